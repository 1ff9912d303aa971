#pragma once
// Scoring, sampled cross-entropy, the regularizers, and the combined loss
//   L = L_rec + lambda * R(H_last) + beta * R(M_active)
// where R is the smoothing loss, CosReg, EuclidReg, or nothing.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "seqrec/linalg/matrix.hpp"
#include "seqrec/model/encoder.hpp"

namespace seqrec::model {

/// h . M_v for each listed item (weight tying: M is the input table).
template <typename Real>
std::vector<Real> score_items(std::span<const Real> h, const ModelParams<Real>& params,
                              const std::vector<ItemId>& items);

/// -log(exp(s+) / (exp(s+) + sum_j exp(s-_j))) with a max shift. Throws
/// InvalidInput without negatives, NumericalFailure on non-finite scores.
double sampled_ce_loss(double pos_score, std::span<const double> neg_scores);

/// (1/N^2) sum_i sum_j cos(m_i, m_j) over all rows, i == j included.
/// Throws DegenerateMatrix on a zero row.
double cos_reg(const linalg::Matrix& m);
/// -(1/N^2) sum_i sum_j ||m_i - m_j||.
double euclid_reg(const linalg::Matrix& m);

struct RegTerm {
  double value = 0.0;
  linalg::Matrix grad;
};

RegTerm cos_reg_with_grad(const linalg::Matrix& m);
/// Pairs at zero distance contribute no gradient (the subgradient 0).
RegTerm euclid_reg_with_grad(const linalg::Matrix& m);
/// Dispatches on kind; RegKind::none gives 0 and a zero gradient.
RegTerm regularizer(RegKind kind, const linalg::Matrix& m, bool with_grad);

/// Loss components of one batch. A regularizer whose weight is zero is not
/// evaluated and reported as NaN.
struct LossParts {
  double rec = 0.0;
  double seq = 0.0;
  double item = 0.0;
  double total = 0.0;
  std::size_t positions = 0;  // positions with a target
};

/// Rows 1..num_items of the item table, or only the listed ids.
template <typename Real>
linalg::Matrix item_matrix(const ModelParams<Real>& params, const std::vector<ItemId>& ids = {});
/// B x d matrix of final-position outputs.
template <typename Real>
linalg::Matrix last_outputs(const ForwardOutput<Real>& fwd);

/// Sorted distinct non-padding ids used by a batch (inputs, targets, negatives).
std::vector<ItemId> batch_items(const Batch& batch);

template <typename Real>
LossParts total_loss(const ForwardOutput<Real>& fwd, const ModelParams<Real>& params, const ModelConfig& cfg,
                     const Batch& batch);

/// total_loss plus its gradient with respect to every tensor, accumulated
/// into grads (which must be zero on entry for a plain gradient). The
/// padding row of the item gradient is left at zero.
template <typename Real>
LossParts total_loss_grad(const ForwardOutput<Real>& fwd, const ModelParams<Real>& params, const ModelConfig& cfg,
                          const Batch& batch, ModelParams<Real>& grads);

/// Adam with bias correction; moments live in the parameter precision.
template <typename Real>
class Adam {
 public:
  explicit Adam(const ModelParams<Real>& shape, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(ModelParams<Real>& params, const ModelParams<Real>& grads, double learning_rate);
  std::size_t steps() const noexcept { return t_; }

 private:
  ModelParams<Real> m_, v_;
  double beta1_, beta2_, eps_;
  std::size_t t_ = 0;
};

/// Throws NumericalFailure naming the first tensor with a non-finite entry.
template <typename Real>
void ensure_finite_gradients(const ModelParams<Real>& grads);

/// Forward in train mode, exact gradient, one Adam update, padding row of M
/// re-zeroed. Throws NumericalFailure naming the first tensor whose gradient
/// is not finite.
template <typename Real>
LossParts train_step(ModelParams<Real>& params, Adam<Real>& opt, const ModelConfig& cfg, const Batch& batch,
                     std::mt19937_64& rng);

}  // namespace seqrec::model
