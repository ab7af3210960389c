#pragma once

#include <span>
#include <vector>

#include "drec/encoder.hpp"
#include "drec/mat.hpp"

namespace drec {

enum class ClLoss {
  kAnchored,  // anchor-centered variant: original row pulls both views
  kInfonce,   // plain view-vs-view InfoNCE
};

struct LossWeights {
  double cl_interaction = 0.1;  // user interaction-view CL weight
  double cl_social = 0.1;       // user social-view CL weight
  double cl_item = 0.1;         // item CL weight
  double reg = 1e-4;            // Frobenius regularization on base tables
  double temperature = 0.2;
};

// One training mini-batch: parallel (user, positive, negative) triples for
// ranking, plus deduplicated anchor index lists for the contrastive terms.
struct BatchSample {
  std::vector<int> users;
  std::vector<int> positives;
  std::vector<int> negatives;
  std::vector<int> batch_users;  // deduplicated users, ascending
  std::vector<int> batch_items;  // deduplicated positives, ascending

  static BatchSample from_triples(std::vector<int> users,
                                  std::vector<int> positives,
                                  std::vector<int> negatives);
};

// Predicted preference of a user row for an item row (inner product).
double score(std::span<const double> user_row, std::span<const double> item_row);

// Pairwise ranking loss, summed over triples: softplus(neg - pos) per
// triple. Gradients accumulate (+=) into the full-size matrices when given.
double bpr_loss(const BatchSample& batch, const Mat& p_user, const Mat& p_item,
                Mat* d_user = nullptr, Mat* d_item = nullptr);

// Sum over anchors k of -log softmax; similarities are cosine over raw
// (unnormalized) rows, temperature-scaled with max-subtraction. Gradient
// matrices may alias each other; they are only written via +=.
double infonce_loss(const Mat& view1, const Mat& view2,
                    std::span<const int> anchors, double tau,
                    Mat* d_view1 = nullptr, Mat* d_view2 = nullptr);

// Anchor-centered variant: numerator exponent (s(h,h') + s(h,h''))/(2 tau),
// denominator identical to infonce_loss (including the diagonal term).
double anchored_infonce_loss(const Mat& original, const Mat& view1,
                             const Mat& view2, std::span<const int> anchors,
                             double tau, Mat* d_original = nullptr,
                             Mat* d_view1 = nullptr, Mat* d_view2 = nullptr);

// Forward propagation pair used by one optimization step.
struct ForwardPass {
  PropagatedEmbeddings interaction;  // users + items
  PropagatedEmbeddings social;       // users only
};

ForwardPass forward_pass(const EmbeddingState& state,
                         const InteractionGraph& graph,
                         const SocialNetwork& net, int layers);

// Frozen per-batch perturbation noise; views are recomputed as
// P - epsilon * delta from whatever propagation is current, so the noise is
// a constant of differentiation.
struct PerturbationNoise {
  Mat user_interaction_1, user_interaction_2;
  Mat user_social_1, user_social_2;
  Mat item_1, item_2;
  double epsilon = 0.0;
};

struct JointLossResult {
  double total = 0.0;
  double bpr = 0.0;
  double cl_interaction = 0.0;
  double cl_social = 0.0;
  double cl_item = 0.0;
  double reg = 0.0;
  Mat d_user;  // gradient w.r.t. the base user table
  Mat d_item;  // gradient w.r.t. the base item table
};

// Total loss for one batch with exact gradients pushed back through the
// propagation adjoint onto the base tables. `noise == nullptr` disables the
// contrastive terms entirely (embedding-denoising ablation).
JointLossResult joint_loss(const EmbeddingState& state,
                           const ForwardPass& forward,
                           const BatchSample& batch,
                           const PerturbationNoise* noise, ClLoss cl_kind,
                           const LossWeights& weights);

}  // namespace drec
