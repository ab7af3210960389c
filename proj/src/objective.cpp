#include "drec/objective.hpp"

#include <algorithm>
#include <cmath>

#include "drec/errors.hpp"
#include "drec/perturb.hpp"

namespace drec {

BatchSample BatchSample::from_triples(std::vector<int> users,
                                      std::vector<int> positives,
                                      std::vector<int> negatives) {
  if (users.size() != positives.size() || users.size() != negatives.size())
    throw UsageError("batch triple arrays must have equal length");
  BatchSample b;
  b.users = std::move(users);
  b.positives = std::move(positives);
  b.negatives = std::move(negatives);
  b.batch_users = b.users;
  std::sort(b.batch_users.begin(), b.batch_users.end());
  b.batch_users.erase(std::unique(b.batch_users.begin(), b.batch_users.end()),
                      b.batch_users.end());
  b.batch_items = b.positives;
  std::sort(b.batch_items.begin(), b.batch_items.end());
  b.batch_items.erase(std::unique(b.batch_items.begin(), b.batch_items.end()),
                      b.batch_items.end());
  return b;
}

double score(std::span<const double> user_row,
             std::span<const double> item_row) {
  if (user_row.size() != item_row.size())
    throw UsageError("score dimension mismatch");
  return dot(user_row, item_row);
}

namespace {

// log(1 + exp(x)) without overflow
double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// sigmoid(-m) = 1 / (1 + exp(m))
double sigmoid_neg(double m) {
  if (m >= 0.0) {
    double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

// d cos(a, b) / d a, accumulated into `out` with weight w. Zero vectors
// follow the cosine-is-zero convention and contribute no gradient.
void add_cosine_grad(std::span<double> out, double w,
                     std::span<const double> a, std::span<const double> b) {
  double na = norm2(a);
  double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return;
  double s = dot(a, b) / (na * nb);
  double cb = w / (na * nb);
  double ca = -w * s / (na * na);
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c] += cb * b[c] + ca * a[c];
}

struct SoftmaxTable {
  std::vector<double> sim;  // n x n cosine matrix, row-major
  std::vector<double> prob; // row softmax of sim / tau
  std::vector<double> lse;  // per-row log-sum-exp of sim / tau
  std::size_t n = 0;
};

SoftmaxTable view_softmax(const Mat& view1, const Mat& view2,
                          std::span<const int> anchors, double tau) {
  SoftmaxTable t;
  t.n = anchors.size();
  t.sim.assign(t.n * t.n, 0.0);
  t.prob.assign(t.n * t.n, 0.0);
  t.lse.assign(t.n, 0.0);
  for (std::size_t k = 0; k < t.n; ++k)
    for (std::size_t l = 0; l < t.n; ++l)
      t.sim[k * t.n + l] = cosine(view1.row(anchors[k]), view2.row(anchors[l]));
  for (std::size_t k = 0; k < t.n; ++k) {
    double mx = -1e300;
    for (std::size_t l = 0; l < t.n; ++l)
      mx = std::max(mx, t.sim[k * t.n + l] / tau);
    double z = 0.0;
    for (std::size_t l = 0; l < t.n; ++l)
      z += std::exp(t.sim[k * t.n + l] / tau - mx);
    t.lse[k] = mx + std::log(z);
    for (std::size_t l = 0; l < t.n; ++l)
      t.prob[k * t.n + l] = std::exp(t.sim[k * t.n + l] / tau - t.lse[k]);
  }
  return t;
}

void check_tau(double tau) {
  if (tau <= 0.0) throw ConfigError("temperature must be positive");
}

}  // namespace

double bpr_loss(const BatchSample& batch, const Mat& p_user, const Mat& p_item,
                Mat* d_user, Mat* d_item) {
  double loss = 0.0;
  for (std::size_t t = 0; t < batch.users.size(); ++t) {
    int u = batch.users[t];
    int i = batch.positives[t];
    int j = batch.negatives[t];
    auto pu = p_user.row(u);
    auto pi = p_item.row(i);
    auto pj = p_item.row(j);
    double margin = dot(pu, pi) - dot(pu, pj);
    loss += softplus(-margin);
    if (d_user && d_item) {
      double g = -sigmoid_neg(margin);  // d loss / d margin
      auto du = d_user->row(u);
      for (std::size_t c = 0; c < du.size(); ++c)
        du[c] += g * (pi[c] - pj[c]);
      axpy(d_item->row(i), g, pu);
      axpy(d_item->row(j), -g, pu);
    }
  }
  return loss;
}

double infonce_loss(const Mat& view1, const Mat& view2,
                    std::span<const int> anchors, double tau, Mat* d_view1,
                    Mat* d_view2) {
  check_tau(tau);
  if (anchors.empty()) return 0.0;
  auto t = view_softmax(view1, view2, anchors, tau);

  double loss = 0.0;
  for (std::size_t k = 0; k < t.n; ++k)
    loss += -t.sim[k * t.n + k] / tau + t.lse[k];

  if (d_view1 && d_view2) {
    for (std::size_t k = 0; k < t.n; ++k) {
      auto a = view1.row(anchors[k]);
      for (std::size_t l = 0; l < t.n; ++l) {
        double g = (t.prob[k * t.n + l] - (k == l ? 1.0 : 0.0)) / tau;
        if (g == 0.0) continue;
        auto b = view2.row(anchors[l]);
        add_cosine_grad(d_view1->row(anchors[k]), g, a, b);
        add_cosine_grad(d_view2->row(anchors[l]), g, b, a);
      }
    }
  }
  return loss;
}

double anchored_infonce_loss(const Mat& original, const Mat& view1,
                             const Mat& view2, std::span<const int> anchors,
                             double tau, Mat* d_original, Mat* d_view1,
                             Mat* d_view2) {
  check_tau(tau);
  if (anchors.empty()) return 0.0;
  auto t = view_softmax(view1, view2, anchors, tau);

  double loss = 0.0;
  for (std::size_t k = 0; k < t.n; ++k) {
    auto h = original.row(anchors[k]);
    double pull = (cosine(h, view1.row(anchors[k])) +
                   cosine(h, view2.row(anchors[k]))) /
                  (2.0 * tau);
    loss += -pull + t.lse[k];
  }

  if (d_original && d_view1 && d_view2) {
    double w = -1.0 / (2.0 * tau);
    for (std::size_t k = 0; k < t.n; ++k) {
      int idx = anchors[k];
      auto h = original.row(idx);
      auto v1 = view1.row(idx);
      auto v2 = view2.row(idx);
      add_cosine_grad(d_original->row(idx), w, h, v1);
      add_cosine_grad(d_original->row(idx), w, h, v2);
      add_cosine_grad(d_view1->row(idx), w, v1, h);
      add_cosine_grad(d_view2->row(idx), w, v2, h);
      for (std::size_t l = 0; l < t.n; ++l) {
        double g = t.prob[k * t.n + l] / tau;
        auto b = view2.row(anchors[l]);
        add_cosine_grad(d_view1->row(idx), g, v1, b);
        add_cosine_grad(d_view2->row(anchors[l]), g, b, v1);
      }
    }
  }
  return loss;
}

ForwardPass forward_pass(const EmbeddingState& state,
                         const InteractionGraph& graph,
                         const SocialNetwork& net, int layers) {
  ForwardPass f;
  f.interaction = propagate_interaction(state, graph, layers);
  f.social = propagate_social(state, net, layers);
  return f;
}

JointLossResult joint_loss(const EmbeddingState& state,
                           const ForwardPass& forward,
                           const BatchSample& batch,
                           const PerturbationNoise* noise, ClLoss cl_kind,
                           const LossWeights& weights) {
  const Mat& p_user = forward.interaction.users;
  const Mat& p_item = forward.interaction.items;
  const Mat& p_social = forward.social.users;

  JointLossResult res;
  Mat d_p_user(p_user.rows(), p_user.cols());
  Mat d_p_item(p_item.rows(), p_item.cols());
  Mat d_p_social(p_social.rows(), p_social.cols());

  res.bpr = bpr_loss(batch, p_user, p_item, &d_p_user, &d_p_item);

  if (noise != nullptr) {
    auto cl_term = [&](const Mat& anchor_mat, const Mat& d1, const Mat& d2,
                       std::span<const int> anchors, Mat& d_accum,
                       double weight) {
      Mat v1 = apply_noise(anchor_mat, d1, noise->epsilon);
      Mat v2 = apply_noise(anchor_mat, d2, noise->epsilon);
      Mat tmp(anchor_mat.rows(), anchor_mat.cols());
      double value = 0.0;
      if (cl_kind == ClLoss::kAnchored) {
        // views are P - eps*delta with constant delta, so gradients w.r.t.
        // anchor and both views all land on P
        value = anchored_infonce_loss(anchor_mat, v1, v2, anchors,
                                      weights.temperature, &tmp, &tmp, &tmp);
      } else {
        value = infonce_loss(v1, v2, anchors, weights.temperature, &tmp, &tmp);
      }
      d_accum.add_scaled(tmp, weight);
      return value;
    };
    res.cl_interaction =
        cl_term(p_user, noise->user_interaction_1, noise->user_interaction_2,
                batch.batch_users, d_p_user, weights.cl_interaction);
    res.cl_social =
        cl_term(p_social, noise->user_social_1, noise->user_social_2,
                batch.batch_users, d_p_social, weights.cl_social);
    res.cl_item = cl_term(p_item, noise->item_1, noise->item_2,
                          batch.batch_items, d_p_item, weights.cl_item);
  }

  auto [du_inter, di_inter] =
      backpropagate_interaction(forward.interaction, d_p_user, d_p_item);
  Mat du_social = backpropagate_social(forward.social, d_p_social);

  res.d_user = std::move(du_inter);
  res.d_user.add_scaled(du_social, 1.0);
  res.d_item = std::move(di_inter);

  res.reg = weights.reg *
            (state.user_emb.frobenius_sq() + state.item_emb.frobenius_sq());
  res.d_user.add_scaled(state.user_emb, 2.0 * weights.reg);
  res.d_item.add_scaled(state.item_emb, 2.0 * weights.reg);

  res.total = res.bpr + weights.cl_interaction * res.cl_interaction +
              weights.cl_social * res.cl_social +
              weights.cl_item * res.cl_item + res.reg;
  return res;
}

}  // namespace drec
