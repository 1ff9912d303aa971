#include "seqrec/model/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqrec/error.hpp"
#include "seqrec/kernels/kernels.hpp"

namespace seqrec::model {

namespace {

constexpr double kLnEps = 1e-8;

template <typename Real>
void linear(const std::vector<Real>& x, const Tensor<Real>& w, const Tensor<Real>& b, std::vector<Real>& y,
            std::size_t rows) {
  const std::size_t din = w.rows;
  const std::size_t dout = w.cols;
  y.resize(rows * dout);
  for (std::size_t r = 0; r < rows; ++r) std::copy(b.data.begin(), b.data.end(), y.begin() + static_cast<std::ptrdiff_t>(r * dout));
  kernels::gemm_nn(x.data(), w.data.data(), y.data(), rows, din, dout, true);
}

// dy -> dx (overwritten), dW += x^T dy, db += colsum(dy)
template <typename Real>
void linear_backward(const std::vector<Real>& x, const Tensor<Real>& w, const std::vector<Real>& dy,
                     std::vector<Real>& dx, Tensor<Real>& dw, Tensor<Real>& db, std::size_t rows) {
  const std::size_t din = w.rows;
  const std::size_t dout = w.cols;
  dx.assign(rows * din, Real(0));
  kernels::gemm_nt(dy.data(), w.data.data(), dx.data(), rows, dout, din, false);
  kernels::gemm_tn_acc(x.data(), dy.data(), dw.data.data(), rows, din, dout);
  const auto& kt = kernels::active<Real>();
  for (std::size_t r = 0; r < rows; ++r) kt.axpy(Real(1), dy.data() + r * dout, db.data.data(), dout);
}

template <typename Real>
void layer_norm(const std::vector<Real>& x, const Tensor<Real>& gain, const Tensor<Real>& bias, std::vector<Real>& y,
                std::vector<Real>& xhat, std::vector<Real>& rstd, std::size_t rows, std::size_t d) {
  y.resize(rows * d);
  xhat.resize(rows * d);
  rstd.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const Real* xr = x.data() + r * d;
    double mean = 0.0;
    for (std::size_t i = 0; i < d; ++i) mean += xr[i];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t i = 0; i < d; ++i) var += (xr[i] - mean) * (xr[i] - mean);
    var /= static_cast<double>(d);
    const double rs = 1.0 / std::sqrt(var + kLnEps);
    rstd[r] = static_cast<Real>(rs);
    for (std::size_t i = 0; i < d; ++i) {
      const Real h = static_cast<Real>((xr[i] - mean) * rs);
      xhat[r * d + i] = h;
      y[r * d + i] = gain.data[i] * h + bias.data[i];
    }
  }
}

// dy -> dx (overwritten); accumulates gain/bias gradients.
template <typename Real>
void layer_norm_backward(const std::vector<Real>& dy, const std::vector<Real>& xhat, const std::vector<Real>& rstd,
                         const Tensor<Real>& gain, Tensor<Real>& dgain, Tensor<Real>& dbias, std::vector<Real>& dx,
                         std::size_t rows, std::size_t d) {
  dx.resize(rows * d);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean_dxh = 0.0;
    double mean_dxh_xh = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double g = dy[r * d + i];
      const double xh = xhat[r * d + i];
      dgain.data[i] += static_cast<Real>(g * xh);
      dbias.data[i] += static_cast<Real>(g);
      const double dxh = g * gain.data[i];
      mean_dxh += dxh;
      mean_dxh_xh += dxh * xh;
    }
    mean_dxh /= static_cast<double>(d);
    mean_dxh_xh /= static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double dxh = static_cast<double>(dy[r * d + i]) * gain.data[i];
      dx[r * d + i] = static_cast<Real>(rstd[r] * (dxh - mean_dxh - xhat[r * d + i] * mean_dxh_xh));
    }
  }
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

double gelu_grad(double x) {
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))) + x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// Inverted dropout scales (0 or 1/(1-p)); empty when inactive.
template <typename Real>
std::vector<Real> dropout_mask(std::size_t n, double p, std::mt19937_64* rng) {
  if (rng == nullptr || p <= 0.0) return {};
  std::vector<Real> mask(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Real keep = static_cast<Real>(1.0 / (1.0 - p));
  for (auto& m : mask) m = u(*rng) < p ? Real(0) : keep;
  return mask;
}

template <typename Real>
void apply_mask(std::vector<Real>& x, const std::vector<Real>& mask) {
  if (mask.empty()) return;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= mask[i];
}

}  // namespace

template <typename Real>
ForwardOutput<Real> forward(const ModelParams<Real>& params, const ModelConfig& cfg, const std::vector<ItemId>& input,
                            std::size_t batch_size, bool train_mode, std::mt19937_64* rng) {
  const std::size_t n = params.max_len();
  const std::size_t d = params.dim();
  if (cfg.dim != d || cfg.max_len != n || cfg.num_layers != params.num_layers()) {
    throw Error(ErrorCode::invalid_input, "config does not match parameter shapes");
  }
  if (input.size() != batch_size * n) {
    throw Error(ErrorCode::invalid_input, "batch has " + std::to_string(input.size()) + " ids, expected " +
                                              std::to_string(batch_size * n));
  }
  for (ItemId v : input) {
    if (v > params.num_items()) throw Error(ErrorCode::invalid_input, "item id " + std::to_string(v) + " out of range");
  }
  std::mt19937_64* drop_rng = train_mode ? rng : nullptr;
  const double p = cfg.dropout;
  const std::size_t rows = batch_size * n;
  const std::size_t heads = cfg.num_heads;
  const std::size_t hd = cfg.head_dim();
  const Real scale = static_cast<Real>(1.0 / std::sqrt(static_cast<double>(hd)));
  const auto& kt = kernels::active<Real>();

  ForwardOutput<Real> out;
  out.batch = batch_size;
  out.len = n;
  out.dim = d;
  out.key_valid.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) out.key_valid[i] = input[i] != data::kPad;

  std::vector<Real> x(rows * d);
  for (std::size_t r = 0; r < rows; ++r) {
    const Real* m = params.item().row(input[r]);
    const Real* pos = params.pos().row(r % n);
    for (std::size_t i = 0; i < d; ++i) x[r * d + i] = m[i] + pos[i];
  }
  out.emb_mask = dropout_mask<Real>(x.size(), p, drop_rng);
  apply_mask(x, out.emb_mask);

  out.layers.resize(params.num_layers());
  std::vector<Real> tmp;
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    auto& c = out.layers[l];
    c.x_in = x;
    linear(x, params.layer(l, kWq), params.layer(l, kBq), c.q, rows);
    linear(x, params.layer(l, kWk), params.layer(l, kBk), c.k, rows);
    linear(x, params.layer(l, kWv), params.layer(l, kBv), c.v, rows);

    c.probs.assign(batch_size * heads * n * n, Real(0));
    c.ctx.assign(rows * d, Real(0));
    std::vector<double> logits(n);
    for (std::size_t b = 0; b < batch_size; ++b) {
      for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t t = 0; t < n; ++t) {
          Real* prow = c.probs.data() + ((b * heads + h) * n + t) * n;
          const Real* qt = c.q.data() + (b * n + t) * d + h * hd;
          double mx = -INFINITY;
          bool any = false;
          for (std::size_t j = 0; j <= t; ++j) {
            if (!out.key_valid[b * n + j]) continue;
            const Real* kj = c.k.data() + (b * n + j) * d + h * hd;
            logits[j] = static_cast<double>(scale * kt.dot(qt, kj, hd));
            mx = std::max(mx, logits[j]);
            any = true;
          }
          if (!any) continue;
          double z = 0.0;
          for (std::size_t j = 0; j <= t; ++j) {
            if (!out.key_valid[b * n + j]) continue;
            logits[j] = std::exp(logits[j] - mx);
            z += logits[j];
          }
          for (std::size_t j = 0; j <= t; ++j) {
            if (out.key_valid[b * n + j]) prow[j] = static_cast<Real>(logits[j] / z);
          }
        }
      }
    }
    c.prob_mask = dropout_mask<Real>(c.probs.size(), p, drop_rng);
    for (std::size_t b = 0; b < batch_size; ++b) {
      for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t t = 0; t < n; ++t) {
          const std::size_t base = ((b * heads + h) * n + t) * n;
          Real* ct = c.ctx.data() + (b * n + t) * d + h * hd;
          for (std::size_t j = 0; j <= t; ++j) {
            Real w = c.probs[base + j];
            if (!c.prob_mask.empty()) w *= c.prob_mask[base + j];
            if (w != Real(0)) kt.axpy(w, c.v.data() + (b * n + j) * d + h * hd, ct, hd);
          }
        }
      }
    }

    linear(c.ctx, params.layer(l, kWo), params.layer(l, kBo), tmp, rows);
    c.attn_mask = dropout_mask<Real>(tmp.size(), p, drop_rng);
    apply_mask(tmp, c.attn_mask);
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] += x[i];
    layer_norm(tmp, params.layer(l, kLn1Gain), params.layer(l, kLn1Bias), c.y1, c.ln1_xhat, c.ln1_rstd, rows, d);

    linear(c.y1, params.layer(l, kW1), params.layer(l, kB1), c.f1, rows);
    c.g.resize(c.f1.size());
    for (std::size_t i = 0; i < c.f1.size(); ++i) c.g[i] = static_cast<Real>(gelu(c.f1[i]));
    linear(c.g, params.layer(l, kW2), params.layer(l, kB2), tmp, rows);
    c.ffn_mask = dropout_mask<Real>(tmp.size(), p, drop_rng);
    apply_mask(tmp, c.ffn_mask);
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] += c.y1[i];
    layer_norm(tmp, params.layer(l, kLn2Gain), params.layer(l, kLn2Bias), x, c.ln2_xhat, c.ln2_rstd, rows, d);
  }

  out.h_all = std::move(x);
  out.h_last.resize(batch_size * d);
  for (std::size_t b = 0; b < batch_size; ++b) {
    std::copy_n(out.at(b, n - 1), d, out.h_last.data() + b * d);
  }
  return out;
}

template <typename Real>
void backward(const ModelParams<Real>& params, const ModelConfig& cfg, const std::vector<ItemId>& input,
              const ForwardOutput<Real>& fwd, std::vector<Real> dx, ModelParams<Real>& grads) {
  const std::size_t n = fwd.len;
  const std::size_t d = fwd.dim;
  const std::size_t batch_size = fwd.batch;
  const std::size_t rows = batch_size * n;
  const std::size_t heads = cfg.num_heads;
  const std::size_t hd = cfg.head_dim();
  const Real scale = static_cast<Real>(1.0 / std::sqrt(static_cast<double>(hd)));
  const auto& kt = kernels::active<Real>();

  std::vector<Real> d_r, d_tmp, d_y1, d_ctx, dq, dk, dv, d_in;
  for (std::size_t li = params.num_layers(); li-- > 0;) {
    const auto& c = fwd.layers[li];
    // LN2 and the feed-forward branch.
    layer_norm_backward(dx, c.ln2_xhat, c.ln2_rstd, params.layer(li, kLn2Gain), grads.layer(li, kLn2Gain),
                        grads.layer(li, kLn2Bias), d_r, rows, d);
    d_y1 = d_r;
    d_tmp = d_r;
    apply_mask(d_tmp, c.ffn_mask);
    std::vector<Real> d_g;
    linear_backward(c.g, params.layer(li, kW2), d_tmp, d_g, grads.layer(li, kW2), grads.layer(li, kB2), rows);
    for (std::size_t i = 0; i < d_g.size(); ++i) d_g[i] = static_cast<Real>(d_g[i] * gelu_grad(c.f1[i]));
    linear_backward(c.y1, params.layer(li, kW1), d_g, d_tmp, grads.layer(li, kW1), grads.layer(li, kB1), rows);
    for (std::size_t i = 0; i < d_y1.size(); ++i) d_y1[i] += d_tmp[i];

    // LN1 and the attention branch.
    layer_norm_backward(d_y1, c.ln1_xhat, c.ln1_rstd, params.layer(li, kLn1Gain), grads.layer(li, kLn1Gain),
                        grads.layer(li, kLn1Bias), d_r, rows, d);
    d_in = d_r;  // residual path
    d_tmp = d_r;
    apply_mask(d_tmp, c.attn_mask);
    linear_backward(c.ctx, params.layer(li, kWo), d_tmp, d_ctx, grads.layer(li, kWo), grads.layer(li, kBo), rows);

    dq.assign(rows * d, Real(0));
    dk.assign(rows * d, Real(0));
    dv.assign(rows * d, Real(0));
    std::vector<double> dp(n);
    for (std::size_t b = 0; b < batch_size; ++b) {
      for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t t = 0; t < n; ++t) {
          const std::size_t base = ((b * heads + h) * n + t) * n;
          const Real* dct = d_ctx.data() + (b * n + t) * d + h * hd;
          double dot_pdp = 0.0;
          bool any = false;
          for (std::size_t j = 0; j <= t; ++j) {
            if (!fwd.key_valid[b * n + j]) {
              dp[j] = 0.0;
              continue;
            }
            any = true;
            const Real pj = c.probs[base + j];
            const Real mask = c.prob_mask.empty() ? Real(1) : c.prob_mask[base + j];
            const Real* vj = c.v.data() + (b * n + j) * d + h * hd;
            // ctx_t = sum_j p_j * mask_j * v_j
            dp[j] = static_cast<double>(kt.dot(dct, vj, hd)) * mask;
            if (pj * mask != Real(0)) kt.axpy(pj * mask, dct, dv.data() + (b * n + j) * d + h * hd, hd);
            dot_pdp += pj * dp[j];
          }
          if (!any) continue;
          const Real* qt = c.q.data() + (b * n + t) * d + h * hd;
          Real* dqt = dq.data() + (b * n + t) * d + h * hd;
          for (std::size_t j = 0; j <= t; ++j) {
            if (!fwd.key_valid[b * n + j]) continue;
            const Real ds = static_cast<Real>(c.probs[base + j] * (dp[j] - dot_pdp)) * scale;
            if (ds == Real(0)) continue;
            kt.axpy(ds, c.k.data() + (b * n + j) * d + h * hd, dqt, hd);
            kt.axpy(ds, qt, dk.data() + (b * n + j) * d + h * hd, hd);
          }
        }
      }
    }
    linear_backward(c.x_in, params.layer(li, kWq), dq, d_tmp, grads.layer(li, kWq), grads.layer(li, kBq), rows);
    for (std::size_t i = 0; i < d_in.size(); ++i) d_in[i] += d_tmp[i];
    linear_backward(c.x_in, params.layer(li, kWk), dk, d_tmp, grads.layer(li, kWk), grads.layer(li, kBk), rows);
    for (std::size_t i = 0; i < d_in.size(); ++i) d_in[i] += d_tmp[i];
    linear_backward(c.x_in, params.layer(li, kWv), dv, d_tmp, grads.layer(li, kWv), grads.layer(li, kBv), rows);
    for (std::size_t i = 0; i < d_in.size(); ++i) d_in[i] += d_tmp[i];
    dx.swap(d_in);
  }

  apply_mask(dx, fwd.emb_mask);
  auto& dm = grads.item();
  auto& dpos = grads.pos();
  for (std::size_t r = 0; r < rows; ++r) {
    const Real* g = dx.data() + r * d;
    if (input[r] != data::kPad) kt.axpy(Real(1), g, dm.row(input[r]), d);
    kt.axpy(Real(1), g, dpos.row(r % n), d);
  }
}

template ForwardOutput<float> forward<float>(const ModelParams<float>&, const ModelConfig&, const std::vector<ItemId>&,
                                             std::size_t, bool, std::mt19937_64*);
template ForwardOutput<double> forward<double>(const ModelParams<double>&, const ModelConfig&,
                                               const std::vector<ItemId>&, std::size_t, bool, std::mt19937_64*);
template void backward<float>(const ModelParams<float>&, const ModelConfig&, const std::vector<ItemId>&,
                              const ForwardOutput<float>&, std::vector<float>, ModelParams<float>&);
template void backward<double>(const ModelParams<double>&, const ModelConfig&, const std::vector<ItemId>&,
                               const ForwardOutput<double>&, std::vector<double>, ModelParams<double>&);

}  // namespace seqrec::model
