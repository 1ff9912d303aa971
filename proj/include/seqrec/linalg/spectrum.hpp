#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "seqrec/linalg/matrix.hpp"

namespace seqrec::linalg {

/// Frobenius norms below this are treated as a zero matrix.
inline constexpr double kDegenerateNorm = 1e-12;

double nuclear_norm(const Matrix& a);

/// Area under the normalized singular value curve: sum_i sigma_i / sigma_max
/// over all min(rows, cols) singular values. Throws DegenerateMatrix when
/// sigma_max is zero.
double ausc(const Matrix& a);

/// -||a||_* / ||a||_F, in [-sqrt(k), -1]. Scale invariant.
double smoothing_loss(const Matrix& a);

/// Gradient of smoothing_loss:
///   -(U V^T ||a||_F - ||a||_* a / ||a||_F) / ||a||_F^2
/// At repeated singular values U V^T is whichever subgradient the SVD factors
/// produce.
Matrix smoothing_loss_grad(const Matrix& a);

struct SmoothingTerm {
  double loss = 0.0;
  Matrix grad;
};

/// Loss and gradient from a single decomposition.
SmoothingTerm smoothing_loss_with_grad(const Matrix& a);

struct SpectrumReport {
  std::vector<double> sigma;       // descending
  std::vector<double> normalized;  // sigma / sigma[0]
  double ausc = 0.0;
  double nuclear_norm = 0.0;
  double frobenius_norm = 0.0;

  double smoothing_loss() const { return -nuclear_norm / frobenius_norm; }
};

SpectrumReport spectrum_report(const Matrix& a);

/// "index,sigma,normalized" rows followed by "# ausc=<value>".
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);
std::string spectrum_csv(const SpectrumReport& report);

}  // namespace seqrec::linalg
