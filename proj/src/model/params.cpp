#include "seqrec/model/params.hpp"

#include <algorithm>
#include <cmath>

#include "seqrec/io/binary.hpp"

namespace seqrec::model {

namespace {

const char* const kSlotNames[kLayerSlots] = {
    "wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo", "ln1_gain", "ln1_bias",
    "w1", "b1", "w2", "b2", "ln2_gain", "ln2_bias"};

bool is_bias(std::size_t slot) {
  return slot == kBq || slot == kBk || slot == kBv || slot == kBo || slot == kB1 || slot == kB2 ||
         slot == kLn1Bias || slot == kLn2Bias;
}

}  // namespace

template <typename Real>
ModelParams<Real>::ModelParams(const ModelConfig& cfg, std::uint32_t num_items)
    : num_items_(num_items), dim_(cfg.dim), max_len_(cfg.max_len), num_layers_(cfg.num_layers) {
  const std::size_t d = cfg.dim;
  auto add = [&](std::string name, std::size_t r, std::size_t c) {
    tensors_.push_back({std::move(name), r, c, std::vector<Real>(r * c, Real(0))});
  };
  add("item_emb", std::size_t{num_items} + 1, d);
  add("pos_emb", cfg.max_len, d);
  for (std::size_t l = 0; l < cfg.num_layers; ++l) {
    for (std::size_t s = 0; s < kLayerSlots; ++s) {
      const std::string name = "layer" + std::to_string(l) + "." + kSlotNames[s];
      if (is_bias(s) || s == kLn1Gain || s == kLn2Gain) {
        add(name, 1, d);
      } else {
        add(name, d, d);
      }
    }
  }
}

template <typename Real>
const Tensor<Real>* ModelParams<Real>::find(const std::string& name) const {
  for (const auto& t : tensors_)
    if (t.name == name) return &t;
  return nullptr;
}

template <typename Real>
ModelParams<Real> ModelParams<Real>::zeros_like() const {
  ModelParams out = *this;
  out.set_zero();
  return out;
}

template <typename Real>
void ModelParams<Real>::set_zero() {
  for (auto& t : tensors_) std::fill(t.data.begin(), t.data.end(), Real(0));
}

template <typename Real>
std::size_t ModelParams<Real>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

template <typename Real>
bool ModelParams<Real>::all_finite() const {
  for (const auto& t : tensors_)
    for (Real v : t.data)
      if (!std::isfinite(v)) return false;
  return true;
}

template <typename Real>
std::uint64_t ModelParams<Real>::checksum() const {
  io::BinaryWriter w;
  for (const auto& t : tensors_) w.put_array(t.data.data(), t.size());
  return io::fnv1a(w.buffer().data(), w.buffer().size());
}

template <typename Real>
ModelParams<Real> init_params(const ModelConfig& cfg, std::uint32_t num_items, std::mt19937_64& rng) {
  cfg.validate();
  ModelParams<Real> p(cfg, num_items);
  std::normal_distribution<double> nd(0.0, 0.02);
  auto draw = [&] {
    double x;
    do {
      x = nd(rng);
    } while (std::fabs(x) > 0.04);
    return static_cast<Real>(x);
  };
  for (auto& t : p.tensors()) {
    const auto dot = t.name.find('.');
    const std::string slot = dot == std::string::npos ? t.name : t.name.substr(dot + 1);
    if (slot == "ln1_gain" || slot == "ln2_gain") {
      std::fill(t.data.begin(), t.data.end(), Real(1));
    } else if (slot[0] != 'b' && slot.find("bias") == std::string::npos) {
      for (auto& v : t.data) v = draw();
    }
  }
  auto& m = p.item();
  std::fill(m.data.begin(), m.data.begin() + static_cast<std::ptrdiff_t>(m.cols), Real(0));
  return p;
}

template class ModelParams<float>;
template class ModelParams<double>;
template ModelParams<float> init_params<float>(const ModelConfig&, std::uint32_t, std::mt19937_64&);
template ModelParams<double> init_params<double>(const ModelConfig&, std::uint32_t, std::mt19937_64&);

}  // namespace seqrec::model
