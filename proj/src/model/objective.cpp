#include "seqrec/model/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqrec/error.hpp"
#include "seqrec/kernels/kernels.hpp"
#include "seqrec/linalg/spectrum.hpp"

namespace seqrec::model {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_batch(const Batch& batch, std::size_t n) {
  if (batch.len != n || batch.input.size() != batch.size * n) {
    throw Error(ErrorCode::invalid_input, "batch shape does not match model length");
  }
  if (!batch.targets.empty() && batch.targets.size() != batch.input.size()) {
    throw Error(ErrorCode::invalid_input, "targets must align with inputs");
  }
  if (!batch.targets.empty() && batch.negatives.size() != batch.input.size() * batch.negatives_per_pos) {
    throw Error(ErrorCode::invalid_input, "negatives must hold negatives_per_pos ids per position");
  }
}

template <typename Real>
LossParts evaluate(const ForwardOutput<Real>& fwd, const ModelParams<Real>& params, const ModelConfig& cfg,
                   const Batch& batch, ModelParams<Real>* grads) {
  check_batch(batch, fwd.len);
  const std::size_t d = fwd.dim;
  const std::size_t k = batch.negatives_per_pos;
  const auto& kt = kernels::active<Real>();
  const auto& m = params.item();

  LossParts parts;
  std::vector<Real> d_h;
  if (grads) d_h.assign(fwd.h_all.size(), Real(0));

  for (ItemId t : batch.targets)
    if (t != data::kPad) ++parts.positions;

  if (parts.positions > 0) {
    if (k == 0) throw Error(ErrorCode::invalid_input, "sampled cross-entropy needs at least one negative");
    const double inv = 1.0 / static_cast<double>(parts.positions);
    std::vector<double> logits(k + 1);
    std::vector<ItemId> ids(k + 1);
    double sum = 0.0;
    for (std::size_t r = 0; r < batch.targets.size(); ++r) {
      if (batch.targets[r] == data::kPad) continue;
      const Real* h = fwd.h_all.data() + r * d;
      ids[0] = batch.targets[r];
      std::copy_n(batch.negatives.begin() + static_cast<std::ptrdiff_t>(r * k), k, ids.begin() + 1);
      for (std::size_t j = 0; j <= k; ++j) {
        if (ids[j] == data::kPad || ids[j] > params.num_items()) {
          throw Error(ErrorCode::invalid_input, "target or negative id out of range");
        }
        logits[j] = static_cast<double>(kt.dot(h, m.row(ids[j]), d));
      }
      sum += sampled_ce_loss(logits[0], std::span<const double>(logits).subspan(1));
      if (!grads) continue;
      const double mx = *std::max_element(logits.begin(), logits.end());
      double z = 0.0;
      for (double& l : logits) {
        l = std::exp(l - mx);
        z += l;
      }
      Real* dh = d_h.data() + r * d;
      for (std::size_t j = 0; j <= k; ++j) {
        const double g = (logits[j] / z - (j == 0 ? 1.0 : 0.0)) * inv;
        kt.axpy(static_cast<Real>(g), m.row(ids[j]), dh, d);
        kt.axpy(static_cast<Real>(g), h, grads->item().row(ids[j]), d);
      }
    }
    parts.rec = sum * inv;
  }

  parts.seq = kNaN;
  parts.item = kNaN;
  parts.total = parts.rec;
  if (cfg.lambda > 0.0 && cfg.reg != RegKind::none) {
    const auto term = regularizer(cfg.reg, last_outputs(fwd), grads != nullptr);
    parts.seq = term.value;
    parts.total += cfg.lambda * term.value;
    if (grads) {
      for (std::size_t b = 0; b < fwd.batch; ++b) {
        Real* dh = d_h.data() + (b * fwd.len + fwd.len - 1) * d;
        for (std::size_t i = 0; i < d; ++i) dh[i] += static_cast<Real>(cfg.lambda * term.grad(b, i));
      }
    }
  }
  if (cfg.beta > 0.0 && cfg.reg != RegKind::none) {
    std::vector<ItemId> ids;
    if (cfg.item_reg_in_batch) ids = batch_items(batch);
    const auto term = regularizer(cfg.reg, item_matrix(params, ids), grads != nullptr);
    parts.item = term.value;
    parts.total += cfg.beta * term.value;
    if (grads) {
      for (std::size_t r = 0; r < term.grad.rows(); ++r) {
        Real* g = grads->item().row(ids.empty() ? r + 1 : ids[r]);
        for (std::size_t i = 0; i < d; ++i) g[i] += static_cast<Real>(cfg.beta * term.grad(r, i));
      }
    }
  }

  if (grads) {
    backward(params, cfg, batch.input, fwd, std::move(d_h), *grads);
    auto& gm = grads->item();
    std::fill(gm.data.begin(), gm.data.begin() + static_cast<std::ptrdiff_t>(gm.cols), Real(0));
  }
  return parts;
}

}  // namespace

template <typename Real>
std::vector<Real> score_items(std::span<const Real> h, const ModelParams<Real>& params,
                              const std::vector<ItemId>& items) {
  if (h.size() != params.dim()) throw Error(ErrorCode::invalid_input, "query has wrong dimension");
  const auto& kt = kernels::active<Real>();
  std::vector<Real> out;
  out.reserve(items.size());
  for (ItemId v : items) {
    if (v == data::kPad || v > params.num_items()) throw Error(ErrorCode::invalid_input, "item id out of range");
    out.push_back(kt.dot(h.data(), params.item().row(v), h.size()));
  }
  return out;
}

double sampled_ce_loss(double pos_score, std::span<const double> neg_scores) {
  if (neg_scores.empty()) throw Error(ErrorCode::invalid_input, "sampled cross-entropy needs at least one negative");
  double mx = pos_score;
  for (double s : neg_scores) mx = std::max(mx, s);
  if (!std::isfinite(pos_score) ||
      std::any_of(neg_scores.begin(), neg_scores.end(), [](double s) { return !std::isfinite(s); })) {
    throw Error(ErrorCode::numerical_failure, "non-finite score in sampled cross-entropy");
  }
  double z = std::exp(pos_score - mx);
  for (double s : neg_scores) z += std::exp(s - mx);
  return -(pos_score - mx) + std::log(z);
}

RegTerm cos_reg_with_grad(const linalg::Matrix& m) {
  const std::size_t n = m.rows();
  const std::size_t d = m.cols();
  if (n == 0) throw Error(ErrorCode::invalid_matrix, "empty matrix");
  std::vector<double> norms(n);
  linalg::Matrix u(n, d);
  std::vector<double> s(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (std::size_t c = 0; c < d; ++c) sq += m(i, c) * m(i, c);
    norms[i] = std::sqrt(sq);
    if (!(norms[i] > 0.0)) throw Error(ErrorCode::degenerate_matrix, "zero row " + std::to_string(i));
    for (std::size_t c = 0; c < d; ++c) {
      u(i, c) = m(i, c) / norms[i];
      s[c] += u(i, c);
    }
  }
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  double ss = 0.0;
  for (double x : s) ss += x * x;
  RegTerm out{ss / n2, linalg::Matrix(n, d)};
  // d/dm_i ||sum_j u_j||^2 = 2 (I - u_i u_i^T) s / ||m_i||
  for (std::size_t i = 0; i < n; ++i) {
    double us = 0.0;
    for (std::size_t c = 0; c < d; ++c) us += u(i, c) * s[c];
    for (std::size_t c = 0; c < d; ++c) out.grad(i, c) = 2.0 * (s[c] - us * u(i, c)) / (norms[i] * n2);
  }
  return out;
}

double cos_reg(const linalg::Matrix& m) { return cos_reg_with_grad(m).value; }

RegTerm euclid_reg_with_grad(const linalg::Matrix& m) {
  const std::size_t n = m.rows();
  const std::size_t d = m.cols();
  if (n == 0) throw Error(ErrorCode::invalid_matrix, "empty matrix");
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  RegTerm out{0.0, linalg::Matrix(n, d)};
  std::vector<double> diff(d);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        diff[c] = m(i, c) - m(j, c);
        sq += diff[c] * diff[c];
      }
      const double dist = std::sqrt(sq);
      sum += 2.0 * dist;
      if (dist == 0.0) continue;
      // Each unordered pair appears twice in the double sum.
      const double w = -2.0 / (n2 * dist);
      for (std::size_t c = 0; c < d; ++c) {
        out.grad(i, c) += w * diff[c];
        out.grad(j, c) -= w * diff[c];
      }
    }
  }
  out.value = -sum / n2;
  return out;
}

double euclid_reg(const linalg::Matrix& m) { return euclid_reg_with_grad(m).value; }

RegTerm regularizer(RegKind kind, const linalg::Matrix& m, bool with_grad) {
  switch (kind) {
    case RegKind::spectral: {
      if (!with_grad) return {linalg::smoothing_loss(m), {}};
      auto t = linalg::smoothing_loss_with_grad(m);
      return {t.loss, std::move(t.grad)};
    }
    case RegKind::cos: return cos_reg_with_grad(m);
    case RegKind::euclid: return euclid_reg_with_grad(m);
    case RegKind::none: return {0.0, linalg::Matrix(m.rows(), m.cols())};
  }
  return {0.0, {}};
}

template <typename Real>
linalg::Matrix item_matrix(const ModelParams<Real>& params, const std::vector<ItemId>& ids) {
  const auto& m = params.item();
  const std::size_t rows = ids.empty() ? params.num_items() : ids.size();
  linalg::Matrix out(rows, m.cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Real* src = m.row(ids.empty() ? r + 1 : ids[r]);
    for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = src[c];
  }
  return out;
}

template <typename Real>
linalg::Matrix last_outputs(const ForwardOutput<Real>& fwd) {
  linalg::Matrix out(fwd.batch, fwd.dim);
  for (std::size_t i = 0; i < fwd.h_last.size(); ++i) out.data()[i] = fwd.h_last[i];
  return out;
}

std::vector<ItemId> batch_items(const Batch& batch) {
  std::vector<ItemId> ids;
  ids.reserve(batch.input.size() * 2 + batch.negatives.size());
  for (ItemId v : batch.input) ids.push_back(v);
  for (ItemId v : batch.targets) ids.push_back(v);
  for (ItemId v : batch.negatives) ids.push_back(v);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (!ids.empty() && ids.front() == data::kPad) ids.erase(ids.begin());
  return ids;
}

template <typename Real>
LossParts total_loss(const ForwardOutput<Real>& fwd, const ModelParams<Real>& params, const ModelConfig& cfg,
                     const Batch& batch) {
  return evaluate<Real>(fwd, params, cfg, batch, nullptr);
}

template <typename Real>
LossParts total_loss_grad(const ForwardOutput<Real>& fwd, const ModelParams<Real>& params, const ModelConfig& cfg,
                          const Batch& batch, ModelParams<Real>& grads) {
  return evaluate<Real>(fwd, params, cfg, batch, &grads);
}

template <typename Real>
Adam<Real>::Adam(const ModelParams<Real>& shape, double beta1, double beta2, double eps)
    : m_(shape.zeros_like()), v_(shape.zeros_like()), beta1_(beta1), beta2_(beta2), eps_(eps) {}

template <typename Real>
void Adam<Real>::step(ModelParams<Real>& params, const ModelParams<Real>& grads, double learning_rate) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto& pt = params.tensors();
  const auto& gt = grads.tensors();
  auto& mt = m_.tensors();
  auto& vt = v_.tensors();
  for (std::size_t k = 0; k < pt.size(); ++k) {
    auto& p = pt[k].data;
    const auto& g = gt[k].data;
    auto& m = mt[k].data;
    auto& v = vt[k].data;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = beta1_ * m[i] + (1.0 - beta1_) * gi;
      const double vi = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
      m[i] = static_cast<Real>(mi);
      v[i] = static_cast<Real>(vi);
      p[i] = static_cast<Real>(p[i] - learning_rate * (mi / c1) / (std::sqrt(vi / c2) + eps_));
    }
  }
}

template <typename Real>
void ensure_finite_gradients(const ModelParams<Real>& grads) {
  for (const auto& t : grads.tensors()) {
    for (Real v : t.data) {
      if (!std::isfinite(v)) throw Error(ErrorCode::numerical_failure, "non-finite gradient in " + t.name);
    }
  }
}

template <typename Real>
LossParts train_step(ModelParams<Real>& params, Adam<Real>& opt, const ModelConfig& cfg, const Batch& batch,
                     std::mt19937_64& rng) {
  const auto fwd = forward(params, cfg, batch.input, batch.size, true, &rng);
  auto grads = params.zeros_like();
  const auto parts = total_loss_grad(fwd, params, cfg, batch, grads);
  ensure_finite_gradients(grads);
  opt.step(params, grads, cfg.learning_rate);
  auto& m = params.item();
  std::fill(m.data.begin(), m.data.begin() + static_cast<std::ptrdiff_t>(m.cols), Real(0));
  return parts;
}

#define SEQREC_INSTANTIATE(Real)                                                                               \
  template std::vector<Real> score_items<Real>(std::span<const Real>, const ModelParams<Real>&,                \
                                               const std::vector<ItemId>&);                                    \
  template linalg::Matrix item_matrix<Real>(const ModelParams<Real>&, const std::vector<ItemId>&);            \
  template linalg::Matrix last_outputs<Real>(const ForwardOutput<Real>&);                                      \
  template LossParts total_loss<Real>(const ForwardOutput<Real>&, const ModelParams<Real>&, const ModelConfig&, \
                                      const Batch&);                                                           \
  template LossParts total_loss_grad<Real>(const ForwardOutput<Real>&, const ModelParams<Real>&,               \
                                           const ModelConfig&, const Batch&, ModelParams<Real>&);              \
  template class Adam<Real>;                                                                                   \
  template void ensure_finite_gradients<Real>(const ModelParams<Real>&);                                       \
  template LossParts train_step<Real>(ModelParams<Real>&, Adam<Real>&, const ModelConfig&, const Batch&,      \
                                      std::mt19937_64&);

SEQREC_INSTANTIATE(float)
SEQREC_INSTANTIATE(double)

#undef SEQREC_INSTANTIATE

}  // namespace seqrec::model
