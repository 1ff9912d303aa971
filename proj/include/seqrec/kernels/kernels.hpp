#pragma once
// Data-parallel inner loops shared by the SVD, the encoder and the ranker.
//
// Every kernel has a scalar reference implementation plus vector variants
// (AVX2+FMA on x86-64, NEON on AArch64). The variant is picked once per
// process from the CPU feature bits; SEQREC_SIMD=scalar|avx2|neon|auto
// overrides the choice. Vector variants reassociate reductions, so they agree
// with the scalar path to rounding, not bit-for-bit.

#include <cstddef>
#include <string_view>
#include <vector>

namespace seqrec::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

template <typename Real>
struct KernelTable {
  Isa isa;
  /// sum_i x[i] * y[i]
  Real (*dot)(const Real* x, const Real* y, std::size_t n);
  /// y += a * x
  void (*axpy)(Real a, const Real* x, Real* y, std::size_t n);
  /// Plane rotation: (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rot)(Real* x, Real* y, Real c, Real s, std::size_t n);
  /// x *= a
  void (*scal)(Real a, Real* x, std::size_t n);
};

/// True when the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

/// The variant every caller of active() receives.
Isa active_isa();

template <typename Real>
const KernelTable<Real>& active();

/// A specific variant; nullptr when unavailable on this build or CPU.
template <typename Real>
const KernelTable<Real>* table_for(Isa isa);

/// Every variant usable on this machine, scalar first.
std::vector<Isa> available_isas();

// Row-major dense products built on the active table. Row i of every output
// depends only on row i of the left operand, which keeps causal masks exact.

/// C[n x m] (+)= A[n x k] * B[k x m]
template <typename Real>
void gemm_nn(const Real* a, const Real* b, Real* c, std::size_t n, std::size_t k,
             std::size_t m, bool accumulate);

/// C[n x m] (+)= A[n x k] * B[m x k]^T
template <typename Real>
void gemm_nt(const Real* a, const Real* b, Real* c, std::size_t n, std::size_t k,
             std::size_t m, bool accumulate);

/// C[k x m] += A[n x k]^T * B[n x m]
template <typename Real>
void gemm_tn_acc(const Real* a, const Real* b, Real* c, std::size_t n, std::size_t k,
                 std::size_t m);

namespace detail {
// Per-ISA tables, defined in their own translation units.
template <typename Real>
const KernelTable<Real>& scalar_table();
#if defined(SEQREC_HAVE_AVX2)
template <typename Real>
const KernelTable<Real>& avx2_table();
#endif
#if defined(SEQREC_HAVE_NEON)
template <typename Real>
const KernelTable<Real>& neon_table();
#endif
}  // namespace detail

}  // namespace seqrec::kernels
