#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace seqrec::model {

/// Which penalty fills the sequence-side and item-side regularizer slots.
enum class RegKind : std::uint8_t { spectral, cos, euclid, none };

std::string_view to_string(RegKind kind);
/// Throws InvalidInput for an unknown name.
RegKind parse_reg_kind(std::string_view name);

struct ModelConfig {
  std::size_t dim = 32;
  std::size_t max_len = 20;
  std::size_t num_layers = 2;
  std::size_t num_heads = 1;
  double dropout = 0.2;
  double lambda = 0.0;  // weight of the sequence-output regularizer
  double beta = 0.0;    // weight of the item-table regularizer
  std::size_t negatives = 1;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  RegKind reg = RegKind::spectral;
  // Item regularizer over the items touched by the batch instead of the
  // whole table.
  bool item_reg_in_batch = false;

  /// Throws InvalidInput on an inconsistent configuration.
  void validate() const;
  std::size_t head_dim() const { return dim / num_heads; }
};

}  // namespace seqrec::model
