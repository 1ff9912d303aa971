#include "seqrec/model/config.hpp"

#include <cmath>

#include "seqrec/error.hpp"

namespace seqrec::model {

std::string_view to_string(RegKind kind) {
  switch (kind) {
    case RegKind::spectral: return "spectral";
    case RegKind::cos: return "cos";
    case RegKind::euclid: return "euclid";
    case RegKind::none: return "none";
  }
  return "none";
}

RegKind parse_reg_kind(std::string_view name) {
  if (name == "spectral") return RegKind::spectral;
  if (name == "cos") return RegKind::cos;
  if (name == "euclid") return RegKind::euclid;
  if (name == "none") return RegKind::none;
  throw Error(ErrorCode::invalid_input, "unknown regularizer '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_input, msg); };
  if (dim == 0) fail("dim must be >= 1");
  if (max_len == 0) fail("max_len must be >= 1");
  if (num_heads == 0 || dim % num_heads != 0) fail("num_heads must divide dim");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must be in [0, 1)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail("beta must be finite and >= 0");
  if (negatives == 0) fail("negatives must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be > 0");
}

}  // namespace seqrec::model
