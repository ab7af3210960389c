#pragma once

#include <utility>

#include "drec/graph.hpp"
#include "drec/mat.hpp"

namespace drec {

// Trainable base embedding tables.
struct EmbeddingState {
  Mat user_emb;  // M x d
  Mat item_emb;  // N x d

  std::size_t dim() const { return user_emb.cols(); }
};

// Layer-averaged propagation output. Caches its source graph and depth so
// the adjoint pass can be replayed; the caller keeps the graph alive.
struct PropagatedEmbeddings {
  Mat users;
  Mat items;  // empty for the social pass
  int layers = -1;
  const InteractionGraph* interaction_graph = nullptr;
  const SocialNetwork* social_network = nullptr;
};

// Symmetric-normalized message passing over the bipartite graph; output is
// the mean of layers 0..L. Zero-degree nodes receive only their layer-0
// contribution averaged over L+1 layers.
PropagatedEmbeddings propagate_interaction(const EmbeddingState& state,
                                           const InteractionGraph& graph,
                                           int layers);

// User-user analogue with coefficient 1/sqrt(deg(u) deg(v)). The item table
// is accepted for signature parity but does not participate.
PropagatedEmbeddings propagate_social(const EmbeddingState& state,
                                      const SocialNetwork& net, int layers);

// Adjoint of the propagation-plus-pooling map. The map is linear and its
// matrix is symmetric, so the adjoint is the same propagation applied to the
// output gradient. Throws UsageError when `forward` has no cached graph.
std::pair<Mat, Mat> backpropagate_interaction(
    const PropagatedEmbeddings& forward, const Mat& user_grad,
    const Mat& item_grad);
Mat backpropagate_social(const PropagatedEmbeddings& forward,
                         const Mat& user_grad);

// Internal single-table kernels, exposed for reuse by the adjoint pass.
std::pair<Mat, Mat> propagate_bipartite(const Mat& user_rows,
                                        const Mat& item_rows,
                                        const InteractionGraph& graph,
                                        int layers);
Mat propagate_users(const Mat& user_rows, const SocialNetwork& net,
                    int layers);

}  // namespace drec
