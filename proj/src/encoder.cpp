#include "drec/encoder.hpp"

#include <cmath>

#include "drec/errors.hpp"

namespace drec {

namespace {

void check_layers(int layers) {
  if (layers < 0) throw UsageError("layer count must be >= 0");
}

}  // namespace

std::pair<Mat, Mat> propagate_bipartite(const Mat& user_rows,
                                        const Mat& item_rows,
                                        const InteractionGraph& graph,
                                        int layers) {
  check_layers(layers);
  const std::size_t d = user_rows.cols();
  if (item_rows.cols() != d ||
      user_rows.rows() != static_cast<std::size_t>(graph.user_count) ||
      item_rows.rows() != static_cast<std::size_t>(graph.item_count))
    throw UsageError("propagation shape mismatch");

  Mat acc_u = user_rows;
  Mat acc_i = item_rows;
  Mat cur_u = user_rows;
  Mat cur_i = item_rows;
  Mat next_u(cur_u.rows(), d);
  Mat next_i(cur_i.rows(), d);

  for (int l = 0; l < layers; ++l) {
    next_u.fill(0.0);
    next_i.fill(0.0);
    for (int u = 0; u < graph.user_count; ++u) {
      double du = graph.user_degree(u);
      if (du == 0) continue;
      auto out = next_u.row(u);
      for (int i : graph.items_of(u)) {
        double c = 1.0 / std::sqrt(du * graph.item_degree(i));
        axpy(out, c, cur_i.row(i));
      }
    }
    for (int i = 0; i < graph.item_count; ++i) {
      double di = graph.item_degree(i);
      if (di == 0) continue;
      auto out = next_i.row(i);
      for (int u : graph.users_of(i)) {
        double c = 1.0 / std::sqrt(di * graph.user_degree(u));
        axpy(out, c, cur_u.row(u));
      }
    }
    std::swap(cur_u, next_u);
    std::swap(cur_i, next_i);
    acc_u.add_scaled(cur_u, 1.0);
    acc_i.add_scaled(cur_i, 1.0);
  }

  double inv = 1.0 / static_cast<double>(layers + 1);
  for (double& v : acc_u.data()) v *= inv;
  for (double& v : acc_i.data()) v *= inv;
  return {std::move(acc_u), std::move(acc_i)};
}

Mat propagate_users(const Mat& user_rows, const SocialNetwork& net,
                    int layers) {
  check_layers(layers);
  if (user_rows.rows() != static_cast<std::size_t>(net.user_count))
    throw UsageError("propagation shape mismatch");
  const std::size_t d = user_rows.cols();

  Mat acc = user_rows;
  Mat cur = user_rows;
  Mat next(cur.rows(), d);
  for (int l = 0; l < layers; ++l) {
    next.fill(0.0);
    for (int u = 0; u < net.user_count; ++u) {
      double du = net.degree(u);
      if (du == 0) continue;
      auto out = next.row(u);
      for (int v : net.neighbors_of(u)) {
        double c = 1.0 / std::sqrt(du * net.degree(v));
        axpy(out, c, cur.row(v));
      }
    }
    std::swap(cur, next);
    acc.add_scaled(cur, 1.0);
  }
  double inv = 1.0 / static_cast<double>(layers + 1);
  for (double& v : acc.data()) v *= inv;
  return acc;
}

PropagatedEmbeddings propagate_interaction(const EmbeddingState& state,
                                           const InteractionGraph& graph,
                                           int layers) {
  PropagatedEmbeddings out;
  auto [u, i] = propagate_bipartite(state.user_emb, state.item_emb, graph,
                                    layers);
  out.users = std::move(u);
  out.items = std::move(i);
  out.layers = layers;
  out.interaction_graph = &graph;
  return out;
}

PropagatedEmbeddings propagate_social(const EmbeddingState& state,
                                      const SocialNetwork& net, int layers) {
  PropagatedEmbeddings out;
  out.users = propagate_users(state.user_emb, net, layers);
  out.layers = layers;
  out.social_network = &net;
  return out;
}

std::pair<Mat, Mat> backpropagate_interaction(
    const PropagatedEmbeddings& forward, const Mat& user_grad,
    const Mat& item_grad) {
  if (forward.interaction_graph == nullptr || forward.layers < 0)
    throw UsageError("backpropagate without a cached interaction forward pass");
  return propagate_bipartite(user_grad, item_grad, *forward.interaction_graph,
                             forward.layers);
}

Mat backpropagate_social(const PropagatedEmbeddings& forward,
                         const Mat& user_grad) {
  if (forward.social_network == nullptr || forward.layers < 0)
    throw UsageError("backpropagate without a cached social forward pass");
  return propagate_users(user_grad, *forward.social_network, forward.layers);
}

}  // namespace drec
