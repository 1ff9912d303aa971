#include <cstdlib>
#include <string>

#include "seqrec/kernels/kernels.hpp"

namespace seqrec::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(SEQREC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(SEQREC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

namespace {

Isa select_isa() {
  if (const char* env = std::getenv("SEQREC_SIMD")) {
    const std::string want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(isa) && isa_supported(isa)) return isa;
    }
    // Unknown or unsupported request falls through to auto.
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

template <typename Real>
const KernelTable<Real>* table_for(Isa isa) {
  if (!isa_supported(isa)) return nullptr;
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_table<Real>();
    case Isa::avx2:
#if defined(SEQREC_HAVE_AVX2)
      return &detail::avx2_table<Real>();
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(SEQREC_HAVE_NEON)
      return &detail::neon_table<Real>();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

template <typename Real>
const KernelTable<Real>& active() {
  static const KernelTable<Real>& table = *table_for<Real>(active_isa());
  return table;
}

template <typename Real>
void gemm_nn(const Real* a, const Real* b, Real* c, std::size_t n, std::size_t k, std::size_t m,
             bool accumulate) {
  const auto& kt = active<Real>();
  for (std::size_t i = 0; i < n; ++i) {
    Real* ci = c + i * m;
    if (!accumulate) {
      for (std::size_t j = 0; j < m; ++j) ci[j] = 0;
    }
    const Real* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      if (ai[p] != Real(0)) kt.axpy(ai[p], b + p * m, ci, m);
    }
  }
}

template <typename Real>
void gemm_nt(const Real* a, const Real* b, Real* c, std::size_t n, std::size_t k, std::size_t m,
             bool accumulate) {
  const auto& kt = active<Real>();
  for (std::size_t i = 0; i < n; ++i) {
    const Real* ai = a + i * k;
    Real* ci = c + i * m;
    for (std::size_t j = 0; j < m; ++j) {
      const Real v = kt.dot(ai, b + j * k, k);
      ci[j] = accumulate ? ci[j] + v : v;
    }
  }
}

template <typename Real>
void gemm_tn_acc(const Real* a, const Real* b, Real* c, std::size_t n, std::size_t k,
                 std::size_t m) {
  const auto& kt = active<Real>();
  for (std::size_t i = 0; i < n; ++i) {
    const Real* ai = a + i * k;
    const Real* bi = b + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      if (ai[p] != Real(0)) kt.axpy(ai[p], bi, c + p * m, m);
    }
  }
}

template const KernelTable<float>* table_for<float>(Isa);
template const KernelTable<double>* table_for<double>(Isa);
template const KernelTable<float>& active<float>();
template const KernelTable<double>& active<double>();
template void gemm_nn<float>(const float*, const float*, float*, std::size_t, std::size_t,
                             std::size_t, bool);
template void gemm_nn<double>(const double*, const double*, double*, std::size_t, std::size_t,
                              std::size_t, bool);
template void gemm_nt<float>(const float*, const float*, float*, std::size_t, std::size_t,
                             std::size_t, bool);
template void gemm_nt<double>(const double*, const double*, double*, std::size_t, std::size_t,
                              std::size_t, bool);
template void gemm_tn_acc<float>(const float*, const float*, float*, std::size_t, std::size_t,
                                 std::size_t);
template void gemm_tn_acc<double>(const double*, const double*, double*, std::size_t,
                                  std::size_t, std::size_t);

}  // namespace seqrec::kernels
