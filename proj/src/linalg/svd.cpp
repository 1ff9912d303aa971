#include "seqrec/linalg/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "seqrec/error.hpp"
#include "seqrec/kernels/kernels.hpp"

namespace seqrec::linalg {
namespace {

void check_input(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw Error(ErrorCode::invalid_matrix, "empty matrix");
  if (!a.all_finite()) throw Error(ErrorCode::invalid_matrix, "non-finite entry");
}

// Columns of the (tall) working matrix stored contiguously so each rotation
// touches two unit-stride vectors.
struct JacobiState {
  std::size_t m = 0;  // column length
  std::size_t n = 0;  // column count, n <= m
  std::vector<double> g;  // n columns of length m
  std::vector<double> v;  // n columns of length n, empty when not accumulated

  double* col(std::size_t j) { return g.data() + j * m; }
  double* vcol(std::size_t j) { return v.data() + j * n; }
};

JacobiState make_state(const Matrix& a, bool transpose, bool want_v) {
  JacobiState s;
  s.m = transpose ? a.cols() : a.rows();
  s.n = transpose ? a.rows() : a.cols();
  s.g.resize(s.m * s.n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      // Working column j, entry i.
      const std::size_t j = transpose ? r : c;
      const std::size_t i = transpose ? c : r;
      s.g[j * s.m + i] = a(r, c);
    }
  }
  if (want_v) {
    s.v.assign(s.n * s.n, 0.0);
    for (std::size_t j = 0; j < s.n; ++j) s.v[j * s.n + j] = 1.0;
  }
  return s;
}

void run_sweeps(JacobiState& s, const SvdOptions& opt) {
  const auto& kt = kernels::active<double>();
  const bool want_v = !s.v.empty();
  std::vector<double> norms(s.n);
  for (std::size_t j = 0; j < s.n; ++j) norms[j] = kt.dot(s.col(j), s.col(j), s.m);

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < s.n; ++p) {
      for (std::size_t q = p + 1; q < s.n; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = kt.dot(s.col(p), s.col(q), s.m);
        if (std::fabs(gamma) <= opt.tolerance * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        kt.rot(s.col(p), s.col(q), c, sn, s.m);
        if (want_v) kt.rot(s.vcol(p), s.vcol(q), c, sn, s.n);
        // Recompute rather than update in closed form; drift in the cached
        // norms would otherwise loosen the stopping test.
        norms[p] = kt.dot(s.col(p), s.col(p), s.m);
        norms[q] = kt.dot(s.col(q), s.col(q), s.m);
      }
    }
    if (!rotated) return;
  }
  throw Error(ErrorCode::numerical_failure,
              "Jacobi SVD did not converge in " + std::to_string(opt.max_sweeps) + " sweeps");
}

std::vector<std::size_t> descending_order(const std::vector<double>& sigma) {
  std::vector<std::size_t> order(sigma.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });
  return order;
}

// Fills columns flagged in `missing` with unit vectors orthogonal to every
// other column (modified Gram-Schmidt, two passes).
void complete_orthonormal(Matrix& u, const std::vector<bool>& missing) {
  const std::size_t m = u.rows();
  const std::size_t k = u.cols();
  std::vector<bool> have(k);
  for (std::size_t j = 0; j < k; ++j) have[j] = !missing[j];
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (have[j]) continue;
    for (; next_basis < m; ++next_basis) {
      std::vector<double> cand(m, 0.0);
      cand[next_basis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t o = 0; o < k; ++o) {
          if (!have[o]) continue;
          double proj = 0.0;
          for (std::size_t i = 0; i < m; ++i) proj += u(i, o) * cand[i];
          for (std::size_t i = 0; i < m; ++i) cand[i] -= proj * u(i, o);
        }
      }
      double nrm = 0.0;
      for (double x : cand) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) u(i, j) = cand[i] / nrm;
        have[j] = true;
        ++next_basis;
        break;
      }
    }
  }
}

}  // namespace

SvdResult svd(const Matrix& a, const SvdOptions& options) {
  check_input(a);
  const bool transpose = a.rows() < a.cols();
  JacobiState s = make_state(a, transpose, true);
  run_sweeps(s, options);

  const auto& kt = kernels::active<double>();
  std::vector<double> raw(s.n);
  for (std::size_t j = 0; j < s.n; ++j) raw[j] = std::sqrt(kt.dot(s.col(j), s.col(j), s.m));
  const auto order = descending_order(raw);
  const double smax = raw[order.front()];
  const double floor = smax * static_cast<double>(s.m) * std::numeric_limits<double>::epsilon();

  // Left factor of the working matrix is m x n, right factor n x n.
  Matrix left(s.m, s.n);
  Matrix right(s.n, s.n);
  std::vector<double> sigma(s.n);
  std::vector<bool> missing(s.n, false);
  for (std::size_t jj = 0; jj < s.n; ++jj) {
    const std::size_t j = order[jj];
    sigma[jj] = raw[j];
    if (raw[j] > floor && raw[j] > 0.0) {
      const double inv = 1.0 / raw[j];
      for (std::size_t i = 0; i < s.m; ++i) left(i, jj) = s.col(j)[i] * inv;
    } else {
      missing[jj] = true;
    }
    for (std::size_t i = 0; i < s.n; ++i) right(i, jj) = s.vcol(j)[i];
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
    complete_orthonormal(left, missing);
  }

  SvdResult out;
  out.sigma = std::move(sigma);
  if (transpose) {
    out.u = std::move(right);
    out.v = std::move(left);
  } else {
    out.u = std::move(left);
    out.v = std::move(right);
  }
  return out;
}

std::vector<double> singular_values(const Matrix& a, const SvdOptions& options) {
  check_input(a);
  JacobiState s = make_state(a, a.rows() < a.cols(), false);
  run_sweeps(s, options);
  const auto& kt = kernels::active<double>();
  std::vector<double> sigma(s.n);
  for (std::size_t j = 0; j < s.n; ++j) sigma[j] = std::sqrt(kt.dot(s.col(j), s.col(j), s.m));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

}  // namespace seqrec::linalg
