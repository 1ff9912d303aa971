#pragma once
// Determinant-based diversity: item Gram kernels, Schur-complement
// (matrix determinant lemma) updates, and greedy MAP subset selection.

#include <cstddef>
#include <utility>
#include <vector>

#include "seqrec/linalg/matrix.hpp"

namespace seqrec::dpp {

/// Pivots at or below this declare the selected minor singular.
inline constexpr double kSingularTol = 1e-12;

/// Item-indexed Gram kernel K[i][j] = <F_i, F_j>.
struct KernelMatrix {
  linalg::Matrix k;

  std::size_t size() const noexcept { return k.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return k(i, j); }
};

/// Items are rows of `features`. Throws InvalidInput on an empty or
/// non-finite feature matrix.
KernelMatrix gram_kernel(const linalg::Matrix& features);

/// K_ii K_jj - K_ij K_ji. Throws InvalidInput for i == j or out of range.
double two_item_det(const KernelMatrix& k, std::size_t i, std::size_t j);

/// A selected item set with an incrementally maintained Cholesky factor of
/// its principal minor.
class GreedySelection {
 public:
  GreedySelection() = default;

  /// Builds a selection by adding `items` in order.
  static GreedySelection from_items(const KernelMatrix& k, const std::vector<std::size_t>& items);

  const std::vector<std::size_t>& selected() const noexcept { return selected_; }
  /// log det of the selected minor after each addition (-inf once singular).
  const std::vector<double>& logdets() const noexcept { return logdets_; }
  /// det of the selected minor; 1 for the empty set.
  double det() const noexcept { return det_; }
  bool singular() const noexcept { return singular_; }
  bool contains(std::size_t item) const;
  std::size_t size() const noexcept { return selected_.size(); }

  /// Appends `item`. A pivot <= kSingularTol marks the selection singular;
  /// later det_after_add calls on it throw SingularKernel.
  void add(const KernelMatrix& k, std::size_t item);

  /// Schur complement K_jj - K_jY K_Y^{-1} K_Yj of a candidate, via the
  /// stored factor. Requires a non-singular selection.
  double schur_complement(const KernelMatrix& k, std::size_t candidate) const;

 private:
  // Solves L c = K[Y, candidate] for the stored lower factor.
  std::vector<double> forward_solve(const KernelMatrix& k, std::size_t candidate) const;

  std::vector<std::size_t> selected_;
  std::vector<double> logdets_;
  std::vector<std::vector<double>> chol_rows_;  // row r holds r+1 entries
  double det_ = 1.0;
  bool singular_ = false;
};

/// det(K_Y) * (K_jj - K_jY K_Y^{-1} K_Yj); K_jj for an empty selection.
/// Throws InvalidInput when the candidate is out of range or already
/// selected, SingularKernel when the selected minor is singular.
double det_after_add(const KernelMatrix& k, const GreedySelection& selected, std::size_t candidate);

/// Greedy determinant maximization. Each step adds the candidate with the
/// largest det_after_add (lowest index on ties) and stops early once every
/// remaining candidate gives det <= kSingularTol.
GreedySelection greedy_select(const KernelMatrix& k, std::size_t target_size);

/// (log det(m^T m) by Cholesky, sum_i 2 log sigma_i by SVD). Throws
/// SingularKernel unless m has full column rank (every sigma_i > 1e-10).
std::pair<double, double> logdet_vs_spectrum(const linalg::Matrix& m);

}  // namespace seqrec::dpp
