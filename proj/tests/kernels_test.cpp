#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "seqrec/kernels/kernels.hpp"

namespace {

using seqrec::kernels::Isa;
using seqrec::kernels::KernelTable;

template <typename Real>
std::vector<Real> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Real> v(n);
  for (auto& x : v) x = static_cast<Real>(u(rng));
  return v;
}

template <typename Real>
Real tolerance();
template <>
float tolerance<float>() { return 2e-5f; }
template <>
double tolerance<double>() { return 1e-13; }

template <typename Real>
class KernelEquivalence : public ::testing::Test {};

using RealTypes = ::testing::Types<float, double>;
TYPED_TEST_SUITE(KernelEquivalence, RealTypes);

// Lengths straddle every vector width and unroll factor so tails are hit.
const std::vector<std::size_t> kLengths = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33, 64, 100, 257};

TYPED_TEST(KernelEquivalence, DotMatchesScalar) {
  using Real = TypeParam;
  const auto* ref = seqrec::kernels::table_for<Real>(Isa::scalar);
  std::mt19937_64 rng(7);
  for (Isa isa : seqrec::kernels::available_isas()) {
    const auto* kt = seqrec::kernels::table_for<Real>(isa);
    ASSERT_NE(kt, nullptr);
    for (std::size_t n : kLengths) {
      auto x = random_vec<Real>(n, rng);
      auto y = random_vec<Real>(n, rng);
      const Real want = ref->dot(x.data(), y.data(), n);
      const Real got = kt->dot(x.data(), y.data(), n);
      EXPECT_NEAR(got, want, tolerance<Real>() * (1 + n)) << seqrec::kernels::isa_name(isa) << " n=" << n;
    }
  }
}

TYPED_TEST(KernelEquivalence, AxpyRotScalMatchScalar) {
  using Real = TypeParam;
  const auto* ref = seqrec::kernels::table_for<Real>(Isa::scalar);
  std::mt19937_64 rng(11);
  for (Isa isa : seqrec::kernels::available_isas()) {
    const auto* kt = seqrec::kernels::table_for<Real>(isa);
    for (std::size_t n : kLengths) {
      const auto x = random_vec<Real>(n, rng);
      const auto y = random_vec<Real>(n, rng);
      const Real a = static_cast<Real>(0.37);

      auto y_ref = y;
      auto y_got = y;
      ref->axpy(a, x.data(), y_ref.data(), n);
      kt->axpy(a, x.data(), y_got.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y_got[i], y_ref[i], tolerance<Real>());

      auto xr = x, yr = y, xg = x, yg = y;
      const Real c = static_cast<Real>(std::cos(0.3));
      const Real s = static_cast<Real>(std::sin(0.3));
      ref->rot(xr.data(), yr.data(), c, s, n);
      kt->rot(xg.data(), yg.data(), c, s, n);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(xg[i], xr[i], tolerance<Real>());
        EXPECT_NEAR(yg[i], yr[i], tolerance<Real>());
      }

      auto sr = x, sg = x;
      ref->scal(a, sr.data(), n);
      kt->scal(a, sg.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(sg[i], sr[i], tolerance<Real>());
    }
  }
}

TYPED_TEST(KernelEquivalence, RotationPreservesNorms) {
  using Real = TypeParam;
  std::mt19937_64 rng(3);
  for (Isa isa : seqrec::kernels::available_isas()) {
    const auto* kt = seqrec::kernels::table_for<Real>(isa);
    auto x = random_vec<Real>(41, rng);
    auto y = random_vec<Real>(41, rng);
    const Real before = kt->dot(x.data(), x.data(), 41) + kt->dot(y.data(), y.data(), 41);
    kt->rot(x.data(), y.data(), static_cast<Real>(0.6), static_cast<Real>(0.8), 41);
    const Real after = kt->dot(x.data(), x.data(), 41) + kt->dot(y.data(), y.data(), 41);
    EXPECT_NEAR(after, before, 50 * tolerance<Real>());
  }
}

TEST(KernelDispatch, ActiveIsAvailable) {
  const auto isas = seqrec::kernels::available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), Isa::scalar);
  EXPECT_TRUE(seqrec::kernels::isa_supported(seqrec::kernels::active_isa()));
  EXPECT_EQ(seqrec::kernels::active<double>().isa, seqrec::kernels::active_isa());
  EXPECT_EQ(seqrec::kernels::active<float>().isa, seqrec::kernels::active_isa());
}

TEST(KernelGemm, ProductsMatchNaiveLoops) {
  std::mt19937_64 rng(5);
  const std::size_t n = 7, k = 13, m = 9;
  auto a = random_vec<double>(n * k, rng);
  auto b = random_vec<double>(k * m, rng);
  auto bt = random_vec<double>(m * k, rng);
  auto b2 = random_vec<double>(n * m, rng);

  std::vector<double> c(n * m, 0.0);
  seqrec::kernels::gemm_nn(a.data(), b.data(), c.data(), n, k, m, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * m + j];
      EXPECT_NEAR(c[i * m + j], s, 1e-12);
    }

  std::vector<double> d(n * m, 1.0);
  seqrec::kernels::gemm_nt(a.data(), bt.data(), d.data(), n, k, m, true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 1.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * bt[j * k + p];
      EXPECT_NEAR(d[i * m + j], s, 1e-12);
    }

  std::vector<double> e(k * m, 0.0);
  seqrec::kernels::gemm_tn_acc(a.data(), b2.data(), e.data(), n, k, m);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += a[i * k + p] * b2[i * m + j];
      EXPECT_NEAR(e[p * m + j], s, 1e-12);
    }
}

}  // namespace
