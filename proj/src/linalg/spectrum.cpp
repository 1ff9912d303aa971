#include "seqrec/linalg/spectrum.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "seqrec/error.hpp"
#include "seqrec/kernels/kernels.hpp"
#include "seqrec/linalg/svd.hpp"

namespace seqrec::linalg {
namespace {

double sum_sigma(const std::vector<double>& sigma) {
  double s = 0.0;
  for (double x : sigma) s += x;
  return s;
}

void require_nonzero(const Matrix& a, double fro) {
  if (!a.all_finite()) throw Error(ErrorCode::invalid_matrix, "non-finite entry");
  if (!(fro >= kDegenerateNorm)) {
    throw Error(ErrorCode::degenerate_matrix, "Frobenius norm below 1e-12");
  }
}

}  // namespace

double nuclear_norm(const Matrix& a) { return sum_sigma(singular_values(a)); }

double ausc(const Matrix& a) {
  const auto sigma = singular_values(a);
  if (!(sigma.front() > 0.0)) throw Error(ErrorCode::degenerate_matrix, "all-zero matrix");
  double acc = 0.0;
  for (double s : sigma) acc += s / sigma.front();
  return acc;
}

double smoothing_loss(const Matrix& a) {
  const double fro = a.frobenius_norm();
  require_nonzero(a, fro);
  return -sum_sigma(singular_values(a)) / fro;
}

SmoothingTerm smoothing_loss_with_grad(const Matrix& a) {
  const double fro = a.frobenius_norm();
  require_nonzero(a, fro);
  const SvdResult f = svd(a);
  const double nuc = sum_sigma(f.sigma);

  SmoothingTerm out;
  out.loss = -nuc / fro;
  out.grad = Matrix(a.rows(), a.cols());
  // U V^T
  kernels::gemm_nt(f.u.data().data(), f.v.data().data(), out.grad.data().data(), a.rows(),
                   f.sigma.size(), a.cols(), false);
  const double fro2 = fro * fro;
  const double c_polar = -1.0 / fro;
  const double c_a = nuc / (fro2 * fro);
  auto g = out.grad.data();
  auto x = a.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = c_polar * g[i] + c_a * x[i];
    if (!std::isfinite(g[i])) {
      throw Error(ErrorCode::numerical_failure, "non-finite smoothing gradient");
    }
  }
  return out;
}

Matrix smoothing_loss_grad(const Matrix& a) { return smoothing_loss_with_grad(a).grad; }

SpectrumReport spectrum_report(const Matrix& a) {
  const double fro = a.frobenius_norm();
  require_nonzero(a, fro);
  SpectrumReport r;
  r.sigma = singular_values(a);
  r.frobenius_norm = fro;
  r.nuclear_norm = sum_sigma(r.sigma);
  r.normalized.reserve(r.sigma.size());
  for (double s : r.sigma) r.normalized.push_back(s / r.sigma.front());
  for (double s : r.normalized) r.ausc += s;
  return r;
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report) {
  out << "index,sigma,normalized\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < report.sigma.size(); ++i) {
    out << i << ',' << report.sigma[i] << ',' << report.normalized[i] << '\n';
  }
  out << "# ausc=" << report.ausc << '\n';
}

std::string spectrum_csv(const SpectrumReport& report) {
  std::ostringstream ss;
  write_spectrum_csv(ss, report);
  return ss.str();
}

}  // namespace seqrec::linalg
