#pragma once
// Causal self-attention encoder over left-padded item-id sequences.
//
// Embedding E = M[ids] + P, then num_layers post-norm blocks:
//   X1 = LN(X + Drop(Attn(X) Wo + bo))
//   X2 = LN(X1 + Drop(GELU(X1 W1 + b1) W2 + b2))
// Attention at position t sees keys j <= t whose input is not padding; a
// position with no such key gets a zero context.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "seqrec/data/dataset.hpp"
#include "seqrec/model/config.hpp"
#include "seqrec/model/params.hpp"

namespace seqrec::model {

using data::ItemId;

/// B sequences of length n, row-major. targets[b*n+t] == kPad means no loss
/// at that position; negatives holds negatives_per_pos ids per position.
struct Batch {
  std::size_t size = 0;
  std::size_t len = 0;
  std::size_t negatives_per_pos = 0;
  std::vector<ItemId> input;
  std::vector<ItemId> targets;
  std::vector<ItemId> negatives;
  std::vector<std::uint32_t> users;
};

template <typename Real>
struct LayerCache {
  std::vector<Real> x_in;
  std::vector<Real> q, k, v;
  std::vector<Real> probs;      // B x heads x n x n, before dropout
  std::vector<Real> prob_mask;  // dropout scales on probs, empty when off
  std::vector<Real> ctx;
  std::vector<Real> attn_mask;  // dropout scales on the projected context
  std::vector<Real> ln1_xhat, ln1_rstd;
  std::vector<Real> y1;
  std::vector<Real> f1;  // pre-activation
  std::vector<Real> g;   // GELU(f1)
  std::vector<Real> ffn_mask;
  std::vector<Real> ln2_xhat, ln2_rstd;
};

template <typename Real>
struct ForwardOutput {
  std::size_t batch = 0;
  std::size_t len = 0;
  std::size_t dim = 0;
  std::vector<Real> h_all;   // B x n x d
  std::vector<Real> h_last;  // B x d, copy of position n-1
  std::vector<Real> emb_mask;
  std::vector<std::uint8_t> key_valid;  // B x n
  std::vector<LayerCache<Real>> layers;

  const Real* at(std::size_t b, std::size_t t) const { return h_all.data() + (b * len + t) * dim; }
};

/// Runs the encoder. Dropout is applied only when train_mode is set and rng
/// is non-null. Throws InvalidInput for an id outside [0, num_items] or a
/// batch whose shape does not match the parameters.
template <typename Real>
ForwardOutput<Real> forward(const ModelParams<Real>& params, const ModelConfig& cfg,
                            const std::vector<ItemId>& input, std::size_t batch_size, bool train_mode,
                            std::mt19937_64* rng = nullptr);

/// Accumulates d(loss)/d(params) into grads given d(loss)/d(h_all).
template <typename Real>
void backward(const ModelParams<Real>& params, const ModelConfig& cfg, const std::vector<ItemId>& input,
              const ForwardOutput<Real>& fwd, std::vector<Real> d_h_all, ModelParams<Real>& grads);

}  // namespace seqrec::model
