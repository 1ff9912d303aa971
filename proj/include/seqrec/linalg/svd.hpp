#pragma once

#include <vector>

#include "seqrec/linalg/matrix.hpp"

namespace seqrec::linalg {

/// Thin SVD a = u * diag(sigma) * v^T with k = min(rows, cols).
struct SvdResult {
  Matrix u;                   // rows x k, orthonormal columns
  std::vector<double> sigma;  // k values, descending, >= 0
  Matrix v;                   // cols x k, orthonormal columns
};

struct SvdOptions {
  double tolerance = 1e-12;  // relative off-orthogonality that stops rotating a pair
  int max_sweeps = 60;
};

/// One-sided (Hestenes) Jacobi SVD. Deterministic for a given input.
/// Throws InvalidMatrix on empty or non-finite input and NumericalFailure if
/// the sweep cap is hit before every column pair is orthogonal.
SvdResult svd(const Matrix& a, const SvdOptions& options = {});

/// Singular values only; same algorithm without accumulating v.
std::vector<double> singular_values(const Matrix& a, const SvdOptions& options = {});

}  // namespace seqrec::linalg
