#pragma once
// Trainable tensors of the encoder, addressable by index and by name.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "seqrec/model/config.hpp"

namespace seqrec::model {

template <typename Real>
struct Tensor {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Real> data;

  std::size_t size() const noexcept { return data.size(); }
  Real* row(std::size_t r) { return data.data() + r * cols; }
  const Real* row(std::size_t r) const { return data.data() + r * cols; }
};

// Per-layer tensor slots. Weights are stored d_in x d_out (y = x W + b).
enum LayerSlot : std::size_t {
  kWq, kBq, kWk, kBk, kWv, kBv, kWo, kBo,
  kLn1Gain, kLn1Bias,
  kW1, kB1, kW2, kB2,
  kLn2Gain, kLn2Bias,
  kLayerSlots
};

template <typename Real>
class ModelParams {
 public:
  ModelParams() = default;
  /// Zero-filled tensors with the shapes implied by the config.
  ModelParams(const ModelConfig& cfg, std::uint32_t num_items);

  std::uint32_t num_items() const noexcept { return num_items_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t max_len() const noexcept { return max_len_; }
  std::size_t num_layers() const noexcept { return num_layers_; }

  /// (num_items + 1) x d; row 0 is padding and stays zero.
  Tensor<Real>& item() { return tensors_[0]; }
  const Tensor<Real>& item() const { return tensors_[0]; }
  /// n x d positional table.
  Tensor<Real>& pos() { return tensors_[1]; }
  const Tensor<Real>& pos() const { return tensors_[1]; }
  Tensor<Real>& layer(std::size_t l, LayerSlot s) { return tensors_[2 + l * kLayerSlots + s]; }
  const Tensor<Real>& layer(std::size_t l, LayerSlot s) const { return tensors_[2 + l * kLayerSlots + s]; }

  std::vector<Tensor<Real>>& tensors() noexcept { return tensors_; }
  const std::vector<Tensor<Real>>& tensors() const noexcept { return tensors_; }
  /// nullptr when no tensor has that name.
  const Tensor<Real>* find(const std::string& name) const;

  /// Same shapes, all zeros.
  ModelParams zeros_like() const;
  void set_zero();
  std::size_t parameter_count() const;
  bool all_finite() const;
  /// FNV-1a over every tensor's raw bytes, in order.
  std::uint64_t checksum() const;

  template <typename Other>
  ModelParams<Other> cast() const;

 private:
  template <typename>
  friend class ModelParams;

  std::uint32_t num_items_ = 0;
  std::size_t dim_ = 0;
  std::size_t max_len_ = 0;
  std::size_t num_layers_ = 0;
  std::vector<Tensor<Real>> tensors_;
};

/// Truncated normal (|x| <= 2 std, std 0.02) for embeddings and weights,
/// ones for layer-norm gains, zeros for biases and the padding row.
template <typename Real>
ModelParams<Real> init_params(const ModelConfig& cfg, std::uint32_t num_items, std::mt19937_64& rng);

template <typename Real>
template <typename Other>
ModelParams<Other> ModelParams<Real>::cast() const {
  ModelParams<Other> out;
  out.num_items_ = num_items_;
  out.dim_ = dim_;
  out.max_len_ = max_len_;
  out.num_layers_ = num_layers_;
  for (const auto& t : tensors_) {
    Tensor<Other> o{t.name, t.rows, t.cols, std::vector<Other>(t.data.begin(), t.data.end())};
    out.tensors_.push_back(std::move(o));
  }
  return out;
}

}  // namespace seqrec::model
