#include "seqrec/dpp/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqrec/error.hpp"
#include "seqrec/kernels/kernels.hpp"
#include "seqrec/linalg/svd.hpp"

namespace seqrec::dpp {

KernelMatrix gram_kernel(const linalg::Matrix& features) {
  if (features.rows() == 0 || features.cols() == 0) {
    throw Error(ErrorCode::invalid_input, "empty feature matrix");
  }
  if (!features.all_finite()) throw Error(ErrorCode::invalid_input, "non-finite feature");
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  const auto& kt = kernels::active<double>();
  KernelMatrix out{linalg::Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kt.dot(features.row(i).data(), features.row(j).data(), d);
      out.k(i, j) = v;
      out.k(j, i) = v;
    }
  }
  return out;
}

double two_item_det(const KernelMatrix& k, std::size_t i, std::size_t j) {
  if (i >= k.size() || j >= k.size()) throw Error(ErrorCode::invalid_input, "index out of range");
  if (i == j) throw Error(ErrorCode::invalid_input, "two_item_det needs distinct items");
  return k(i, i) * k(j, j) - k(i, j) * k(j, i);
}

GreedySelection GreedySelection::from_items(const KernelMatrix& k,
                                            const std::vector<std::size_t>& items) {
  GreedySelection s;
  for (std::size_t item : items) s.add(k, item);
  return s;
}

bool GreedySelection::contains(std::size_t item) const {
  return std::find(selected_.begin(), selected_.end(), item) != selected_.end();
}

std::vector<double> GreedySelection::forward_solve(const KernelMatrix& k,
                                                   std::size_t candidate) const {
  const std::size_t r = selected_.size();
  std::vector<double> c(r);
  for (std::size_t i = 0; i < r; ++i) {
    double v = k(selected_[i], candidate);
    const auto& li = chol_rows_[i];
    for (std::size_t p = 0; p < i; ++p) v -= li[p] * c[p];
    c[i] = v / li[i];
  }
  return c;
}

double GreedySelection::schur_complement(const KernelMatrix& k, std::size_t candidate) const {
  if (singular_) throw Error(ErrorCode::singular_kernel, "selected minor is singular");
  const auto c = forward_solve(k, candidate);
  double proj = 0.0;
  for (double x : c) proj += x * x;
  return k(candidate, candidate) - proj;
}

void GreedySelection::add(const KernelMatrix& k, std::size_t item) {
  if (item >= k.size()) throw Error(ErrorCode::invalid_input, "index out of range");
  if (contains(item)) throw Error(ErrorCode::invalid_input, "item already selected");
  if (singular_) {
    selected_.push_back(item);
    logdets_.push_back(-std::numeric_limits<double>::infinity());
    return;
  }
  auto row = forward_solve(k, item);
  double proj = 0.0;
  for (double x : row) proj += x * x;
  const double schur = k(item, item) - proj;
  selected_.push_back(item);
  if (!(schur > kSingularTol)) {
    singular_ = true;
    det_ = 0.0;
    logdets_.push_back(-std::numeric_limits<double>::infinity());
    return;
  }
  row.push_back(std::sqrt(schur));
  chol_rows_.push_back(std::move(row));
  det_ *= schur;
  const double prev = logdets_.empty() ? 0.0 : logdets_.back();
  logdets_.push_back(prev + std::log(schur));
}

double det_after_add(const KernelMatrix& k, const GreedySelection& selected, std::size_t candidate) {
  if (candidate >= k.size()) throw Error(ErrorCode::invalid_input, "candidate out of range");
  if (selected.contains(candidate)) throw Error(ErrorCode::invalid_input, "candidate already selected");
  if (selected.singular()) {
    throw Error(ErrorCode::singular_kernel, "selected minor is singular");
  }
  if (selected.size() == 0) return k(candidate, candidate);
  return selected.det() * selected.schur_complement(k, candidate);
}

GreedySelection greedy_select(const KernelMatrix& k, std::size_t target_size) {
  if (target_size > k.size()) {
    throw Error(ErrorCode::invalid_input, "target size " + std::to_string(target_size) +
                                              " exceeds pool of " + std::to_string(k.size()));
  }
  GreedySelection sel;
  std::vector<bool> taken(k.size(), false);
  while (sel.size() < target_size) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_item = k.size();
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (taken[j]) continue;
      const double d = det_after_add(k, sel, j);
      if (d > best) {
        best = d;
        best_item = j;
      }
    }
    if (best_item == k.size() || !(best > kSingularTol)) break;
    sel.add(k, best_item);
    taken[best_item] = true;
    // With det > 1 the product can clear the tolerance while the pivot does not.
    if (sel.singular()) break;
  }
  return sel;
}

std::pair<double, double> logdet_vs_spectrum(const linalg::Matrix& m) {
  if (m.rows() < m.cols()) {
    throw Error(ErrorCode::singular_kernel, "fewer rows than columns: m^T m is singular");
  }
  const auto sigma = linalg::singular_values(m);
  if (!(sigma.back() > 1e-10)) throw Error(ErrorCode::singular_kernel, "rank-deficient matrix");
  double spectral = 0.0;
  for (double s : sigma) spectral += 2.0 * std::log(s);
  const double direct = linalg::log_det_spd(linalg::matmul_at_b(m, m));
  return {direct, spectral};
}

}  // namespace seqrec::dpp
