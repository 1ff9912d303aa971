#include "seqrec/kernels/kernels.hpp"

namespace seqrec::kernels::detail {
namespace {

template <typename Real>
Real dot_scalar(const Real* x, const Real* y, std::size_t n) {
  Real acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

template <typename Real>
void axpy_scalar(Real a, const Real* x, Real* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename Real>
void rot_scalar(Real* x, Real* y, Real c, Real s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const Real xi = x[i];
    const Real yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

template <typename Real>
void scal_scalar(Real a, Real* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

}  // namespace

template <typename Real>
const KernelTable<Real>& scalar_table() {
  static const KernelTable<Real> table{Isa::scalar, &dot_scalar<Real>, &axpy_scalar<Real>,
                                       &rot_scalar<Real>, &scal_scalar<Real>};
  return table;
}

template const KernelTable<float>& scalar_table<float>();
template const KernelTable<double>& scalar_table<double>();

}  // namespace seqrec::kernels::detail
