#include "hft/cycles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "hft/diagram.hpp"
#include "hft/errors.hpp"
#include "hft/series.hpp"

namespace hft {
namespace {

constexpr int N = 64;

// Reference series for the 5/3 kernels: the three distinct coefficient series
// (computed independently and pinned here), written out to order 64.
Series a_ref() { return Series::from_exponents({0, 6, 9, 27, 33, 63}, N); }
Series b_ref() {
  return Series::from_exponents({0, 1, 2, 4, 11, 15, 18, 23, 37, 44, 49, 57}, N);
}
Series c_ref() { return Series::from_exponents({0, 5, 10, 25, 35, 60}, N); }

int row_index(const TriangleMatrix& tm, int i, int l) {
  for (std::size_t r = 0; r < tm.row_labels.size(); ++r)
    if (tm.row_labels[r] == std::make_pair(i, l)) return static_cast<int>(r);
  throw BadInput("missing row label");
}

std::vector<std::tuple<int, int, int>> slope_triples(int max_sum) {
  std::vector<std::tuple<int, int, int>> out;
  for (int p = 1; p < max_sum; ++p)
    for (int q = 1; p + q <= max_sum; ++q) {
      if (std::gcd(p, q) != 1) continue;
      for (int k = 0; k < p; ++k) out.emplace_back(p, q, k);
    }
  return out;
}

TEST(ZWindow, CoversExactlyTheSubTruncationWeights) {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{5, 3}, {3, 5}, {1, 1}, {7, 2}}) {
    auto [lo, hi] = z_window(p, q, N);
    EXPECT_LE(lo, 0);
    EXPECT_GE(hi, p + q - 1);
    EXPECT_GE(z_count(p, q, lo - 1), N);
    EXPECT_GE(z_count(p, q, hi + 1), N);
    for (long long n = lo; n <= hi; ++n) EXPECT_LT(z_count(p, q, n), N);
  }
}

TEST(BuildF, FiveThreeEntriesAndUnitPattern) {
  TriangleMatrix tm = build_F(5, 3, N);
  EXPECT_EQ(tm.row_labels,
            (std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 0}}));
  ASSERT_EQ(tm.F.rows(), 3);
  ASSERT_EQ(tm.F.cols(), 3);

  // The residue class n = 6 mod 15 sums to the reference series c.
  EXPECT_EQ(tm.F.at(row_index(tm, 1, 0), 1), c_ref());

  // Mod U the matrix is the incidence pattern of the six weight-zero
  // triangles: two units per row and per column.
  const bool unit[3][3] = {{true, true, false}, {false, true, true}, {true, false, true}};
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(tm.F.at(r, j).is_unit(), unit[r][j]);
}

TEST(BuildF, IntegerSlopesGiveTheZeroMatrix) {
  for (int p : {1, 2, 3, 4}) {
    TriangleMatrix tm = build_F(p, 1, N);
    EXPECT_EQ(tm.F.rows(), 1);
    EXPECT_TRUE(tm.F.is_zero()) << p;
  }
  EXPECT_TRUE(build_F(1, 1, N).F.is_zero());
}

TEST(BuildF, OneOverQKernelIsTheLastBasisVector) {
  TriangleMatrix tm = build_F(1, 4, N);
  KernelResult k = kernel_generator(tm.F);
  EXPECT_EQ(k.diag, (std::vector<int>{0, 0, 0, N}));
  for (int j = 0; j < 4; ++j)
    EXPECT_EQ(k.generator[j], j == 3 ? Series::one(N) : Series::zero(N));
}

TEST(SolveCoefficients, FiveThreeMatchesReferenceSeries) {
  SolvedCoefficients sc = solve_coefficients(5, 3, N, CoeffOption::UnitU);
  EXPECT_EQ(sc.row_labels,
            (std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 0}}));
  EXPECT_EQ(sc.diag_f, (std::vector<int>{0, 0, N}));
  EXPECT_EQ(sc.diag_fstar, (std::vector<int>{0, 0, N}));
  EXPECT_EQ(sc.max_finite, 0);

  // v is a common unit times (b, a, a); t a common unit times (c, b, c).
  EXPECT_EQ(sc.v[1], sc.v[2]);
  EXPECT_EQ(sc.t[0], sc.t[2]);
  Series mu = sdiv(sc.v[1], a_ref());
  Series nu = sdiv(sc.t[1], b_ref());
  EXPECT_TRUE(agree_below(sc.v[0], mu * b_ref(), N - kDefaultGuard));
  EXPECT_TRUE(agree_below(sc.t[0], nu * c_ref(), N - kDefaultGuard));

  // The kernels kill F and its adjoint on the nose at this truncation.
  TriangleMatrix tm = build_F(5, 3, N);
  for (const Series& s : tm.F.apply(sc.v)) EXPECT_TRUE(s.is_zero());
  for (const Series& s : transpose(tm.F).apply(sc.t)) EXPECT_TRUE(s.is_zero());

  // unit-u option: u is the basis vector, w carries the adjoint kernel.
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(sc.u[i][0], Series::one(N));
    EXPECT_EQ(sc.w[i][0], sc.t[i]);
  }

  SolvedCoefficients sw = solve_coefficients(5, 3, N, CoeffOption::UnitW);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(sw.w[i][0], Series::one(N));
    EXPECT_EQ(sw.u[i][0], sw.t[i]);
  }
}

TEST(BuildPsis, LevelZeroAndLevelTwoAssembly) {
  SlopeParams sp0 = make_slope_params(5, 3, 0);
  SolvedCoefficients sc = solve_coefficients(5, 3, N, CoeffOption::UnitU);
  PsiTriple psi0 = build_psis(sp0, sc);
  EXPECT_EQ(psi0.c, (std::vector<int>{1, 1, 1, 0, 0}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(psi0.theta[i][0], Series::one(N));
    EXPECT_EQ(psi0.zeta[i][0], sc.t[i]);
  }
  for (int j = 0; j < 3; ++j) EXPECT_EQ(psi0.xi[j], sc.v[j]);

  SlopeParams sp2 = make_slope_params(5, 3, 2);
  PsiTriple psi2 = build_psis(sp2, sc);
  EXPECT_EQ(psi2.c, (std::vector<int>{0, 0, 1, 1, 1}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(psi2.theta[(i + 2) % 5][0], sc.u[i][0]);
    EXPECT_EQ(psi2.zeta[(i + 2) % 5][0], sc.w[i][0]);
  }
  for (int j = 0; j < 3; ++j) EXPECT_EQ(psi2.xi[(j + 2) % 3], sc.v[j]);
}

TEST(Mu2, VanishesExactlyForSolvedCycles) {
  for (int k = 0; k < 5; ++k)
    for (CoeffOption opt : {CoeffOption::UnitU, CoeffOption::UnitW}) {
      SlopeParams sp = make_slope_params(5, 3, k);
      PsiTriple psi = build_psis(sp, solve_coefficients(5, 3, N, opt));
      for (Mu2Composition comp :
           {Mu2Composition::ZeroR_RInf, Mu2Composition::RInf_Inf0,
            Mu2Composition::Inf0_ZeroR})
        EXPECT_EQ(mu2(psi, comp, sp, N).min_val(N), N) << "k=" << k;
    }
}

TEST(Mu2, AllOnesControlFailsAtOrderOne) {
  // Replacing the solved coefficients by 1 on every special label leaves the
  // weight-zero part alone but breaks cancellation at order U.
  SlopeParams sp = make_slope_params(5, 3, 0);
  PsiTriple naive = special_basis_psis(sp, N);
  Mu2Output out = mu2(naive, Mu2Composition::Inf0_ZeroR, sp, N);
  EXPECT_GE(out.xi[0].val(), 2);
  EXPECT_FALSE(out.xi[1].has(0));
  EXPECT_TRUE(out.xi[1].has(1));
  EXPECT_FALSE(out.xi[2].has(0));
  EXPECT_TRUE(out.xi[2].has(1));
}

TEST(Mu2, CorruptingOneCoefficientBreaksVanishing) {
  SlopeParams sp = make_slope_params(5, 3, 0);
  SolvedCoefficients sc = solve_coefficients(5, 3, N, CoeffOption::UnitU);
  sc.w[0][0].toggle(3);
  PsiTriple psi = build_psis(sp, sc);
  int vanish = N;
  for (Mu2Composition comp : {Mu2Composition::ZeroR_RInf, Mu2Composition::RInf_Inf0,
                              Mu2Composition::Inf0_ZeroR})
    vanish = std::min(vanish, mu2(psi, comp, sp, N).min_val(N));
  EXPECT_LT(vanish, N / 2);
}

TEST(Incidence, HoldsOnSweep) {
  for (auto [p, q, k] : slope_triples(14))
    EXPECT_TRUE(incidence_check(make_slope_params(p, q, k)))
        << p << "/" << q << " k=" << k;
}

TEST(Conjugation, LevelKEqualsRelabeledLevelZero) {
  for (int k = 0; k < 5; ++k)
    EXPECT_TRUE(conjugation_check(make_slope_params(5, 3, k), N));
  for (auto [p, q, k] : slope_triples(12))
    EXPECT_TRUE(conjugation_check(make_slope_params(p, q, k), 32))
        << p << "/" << q << " k=" << k;
}

TEST(InvolutionRanks, PinnedExamplesAndSweep) {
  InvolutionRanks ir = involution_rank_check(5, 3, N);
  EXPECT_EQ(ir.rank_a, 2);
  EXPECT_EQ(ir.rank_b, 1);
  EXPECT_TRUE(ir.contained);

  ir = involution_rank_check(3, 5, N);
  EXPECT_EQ(ir.rank_a, 3);
  EXPECT_EQ(ir.rank_b, 2);

  ir = involution_rank_check(2, 1, N);
  EXPECT_EQ(ir.rank_a, 1);
  EXPECT_EQ(ir.rank_b, 0);

  ir = involution_rank_check(2, 3, N);
  EXPECT_EQ(ir.rank_a, 2);
  EXPECT_EQ(ir.rank_b, 1);

  for (auto [p, q, k] : slope_triples(12)) {
    if (k) continue;
    InvolutionRanks r = involution_rank_check(p, q, 32);
    EXPECT_EQ(r.rank_a, r.rank_b + 1) << p << "/" << q;
    EXPECT_TRUE(r.contained) << p << "/" << q;
  }
}

TEST(VerifyMainTheorem, FiveThreeFullReport) {
  VerificationReport rep =
      verify_main_theorem(make_slope_params(5, 3, 2), N, CoeffOption::UnitU);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.solved);
  EXPECT_EQ(rep.vanish_order, N);
  EXPECT_EQ(rep.verified_order, N - kDefaultGuard);
  EXPECT_EQ(rep.max_finite, 0);
  EXPECT_TRUE(rep.mu2_vanish);
  EXPECT_TRUE(rep.uvw_mod_u);
  EXPECT_TRUE(rep.incidence);
  EXPECT_TRUE(rep.conjugation);
  EXPECT_TRUE(rep.involution);
  EXPECT_EQ(rep.rank_a, 2);
  EXPECT_EQ(rep.rank_b, 1);
  EXPECT_EQ(rep.uc.u, (std::vector<int>{0, 0, 1, 0, 1}));
  EXPECT_EQ(rep.uw_products.size(), 3u);
  EXPECT_FALSE(rep.stability_checked);
}

TEST(VerifyMainTheorem, IntegerSlopeHasUnitCoefficients) {
  VerificationReport rep =
      verify_main_theorem(make_slope_params(2, 1, 1), N, CoeffOption::UnitU);
  EXPECT_TRUE(rep.ok());
  ASSERT_EQ(rep.v.size(), 1u);
  ASSERT_EQ(rep.t.size(), 1u);
  EXPECT_EQ(rep.v[0], Series::one(N));
  EXPECT_EQ(rep.t[0], Series::one(N));
  EXPECT_EQ(rep.vanish_order, N);
}

TEST(VerifyMainTheorem, UnitWOptionAndStability) {
  VerificationReport rep =
      verify_main_theorem(make_slope_params(5, 3, 1), 32, CoeffOption::UnitW, true);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.stability_checked);
  EXPECT_TRUE(rep.stable);
  EXPECT_EQ(rep.verified_order, 32 - kDefaultGuard);
}

}  // namespace
}  // namespace hft
