#pragma once

// Homological algebra over the truncated series ring: homology of a finite
// free complex as free-plus-torsion summands, three-term mapping cones, and
// the field-reduction acyclicity test.

#include <algorithm>
#include <string>
#include <vector>

#include "hft/rational.hpp"
#include "hft/series.hpp"

namespace hft {

struct FiniteComplex {
  int trunc = kDefaultTrunc;
  bool graded = false;
  std::vector<Rational> gradings;  // all zero when ungraded
  SeriesMatrix d;                  // d.at(r, c) = coefficient of r in the boundary of c
};

// Validates squareness and d*d = 0; with gradings also that every entry is a
// U-monomial dropping the grading by exactly 1 (U itself carries -2).
inline FiniteComplex make_complex(const SeriesMatrix& d,
                                  const std::vector<Rational>* gradings = nullptr) {
  if (d.rows() != d.cols()) throw BadInput("differential must be square");
  if (!(d * d).is_zero()) throw BadInput("differential does not square to zero");
  FiniteComplex c;
  c.trunc = d.trunc();
  c.d = d;
  if (gradings) {
    if (static_cast<int>(gradings->size()) != d.rows())
      throw BadInput("grading count does not match rank");
    c.graded = true;
    c.gradings = *gradings;
    for (int r = 0; r < d.rows(); ++r)
      for (int col = 0; col < d.cols(); ++col) {
        const Series& e = d.at(r, col);
        if (e.is_zero()) continue;
        std::vector<int> exps = e.exponents();
        if (exps.size() != 1)
          throw BadInput("graded differential entry is not a monomial");
        if (!((*gradings)[r] - Rational(2LL * exps[0]) ==
              (*gradings)[col] - Rational(1)))
          throw BadInput("differential entry is not homogeneous of degree -1");
      }
  } else {
    c.gradings.assign(d.rows(), Rational(0));
  }
  return c;
}

struct TorsionSummand {
  int exponent = 0;  // annihilated by U^exponent
  Rational grading;  // grading of the surviving (target) generator

  friend bool operator==(const TorsionSummand&, const TorsionSummand&) = default;
  friend bool operator<(const TorsionSummand& a, const TorsionSummand& b) {
    if (a.exponent != b.exponent) return a.exponent < b.exponent;
    return a.grading < b.grading;
  }
};

struct HomologyDecomp {
  bool graded = false;
  std::vector<Rational> free;          // gradings of the free summands, sorted
  std::vector<TorsionSummand> torsion; // sorted by (exponent, grading)

  int free_rank() const { return static_cast<int>(free.size()); }
};

// Pair-and-clear reduction: repeatedly take the minimal-valuation
// off-diagonal entry d[r][c] = U^a * unit, clear its row and column with
// conjugation transvections (row ops mirrored by the twin column ops, so the
// basis change is consistent on both sides), and retire the pair. d*d = 0
// then forces row c and column r to vanish modulo U^{P-a}, at which point
// the working precision drops from P to P-a. Pairs with a > 0 contribute a
// torsion summand U^a located at the target generator; unpaired generators
// are free.
inline HomologyDecomp homology(const FiniteComplex& C, int guard = kDefaultGuard) {
  const int n = C.d.rows();
  SeriesMatrix d = C.d;
  int P = C.trunc;
  std::vector<bool> alive(n, true);
  HomologyDecomp out;
  out.graded = C.graded;

  while (true) {
    int best = P, br = -1, bc = -1;
    for (int r = 0; r < n; ++r) {
      if (!alive[r]) continue;
      for (int c = 0; c < n; ++c) {
        if (!alive[c] || c == r) continue;
        int v = d.at(r, c).val();
        if (v < best) best = v, br = r, bc = c;
      }
    }
    if (br < 0) break;
    if (best >= P - guard)
      throw UnstableTorsion("pairing exponent " + std::to_string(best) +
                            " within the guard band of precision " +
                            std::to_string(P));
    const Series pivot = d.at(br, bc);

    for (int r2 = 0; r2 < n; ++r2) {
      if (!alive[r2] || r2 == br || d.at(r2, bc).is_zero()) continue;
      if (d.at(r2, bc).val() < best)
        throw UnstableTorsion("entry below pivot valuation during clearing");
      Series f = sdiv(d.at(r2, bc), pivot);
      for (int j = 0; j < n; ++j)
        if (alive[j]) d.at(r2, j) += f * d.at(br, j);
      for (int i = 0; i < n; ++i)
        if (alive[i]) d.at(i, br) += f * d.at(i, r2);
    }
    for (int c2 = 0; c2 < n; ++c2) {
      if (!alive[c2] || c2 == bc || d.at(br, c2).is_zero()) continue;
      if (d.at(br, c2).val() < best)
        throw UnstableTorsion("entry below pivot valuation during clearing");
      Series f = sdiv(d.at(br, c2), pivot);
      for (int i = 0; i < n; ++i)
        if (alive[i]) d.at(i, c2) += f * d.at(i, bc);
      for (int j = 0; j < n; ++j)
        if (alive[j]) d.at(bc, j) += f * d.at(c2, j);
    }

    // d*d = 0 forces what is left of row bc and column br to be divisible by
    // U^{P-best}; discard it and account for the precision loss.
    for (int j = 0; j < n; ++j) d.at(bc, j) = Series(C.trunc);
    for (int i = 0; i < n; ++i) d.at(i, br) = Series(C.trunc);
    alive[br] = alive[bc] = false;
    P -= best;
    if (best > 0) out.torsion.push_back({best, C.gradings[br]});
  }

  // Only diagonal residue can remain below the precision line; a nonzero one
  // would be a self-arrow, which no complex with d*d = 0 can sustain stably.
  for (int i = 0; i < n; ++i)
    if (alive[i] && d.at(i, i).val() < P - guard)
      throw UnstableTorsion("surviving diagonal entry at valuation " +
                            std::to_string(d.at(i, i).val()));

  for (int i = 0; i < n; ++i)
    if (alive[i]) out.free.push_back(C.gradings[i]);
  std::sort(out.free.begin(), out.free.end());
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

// Iterated mapping cone of C0 -> C1 -> C2 along chain maps f0, f1 with a
// nullhomotopy H0 of f1*f0; the result forgets gradings.
inline FiniteComplex mapping_cone3(const FiniteComplex& C0, const FiniteComplex& C1,
                                   const FiniteComplex& C2, const SeriesMatrix& f0,
                                   const SeriesMatrix& f1, const SeriesMatrix& H0) {
  const int n0 = C0.d.rows(), n1 = C1.d.rows(), n2 = C2.d.rows();
  const int N = C0.trunc;
  if (C1.trunc != N || C2.trunc != N) throw BadInput("mixed truncation orders");
  if (f0.rows() != n1 || f0.cols() != n0) throw BadInput("f0 shape mismatch");
  if (f1.rows() != n2 || f1.cols() != n1) throw BadInput("f1 shape mismatch");
  if (H0.rows() != n2 || H0.cols() != n0) throw BadInput("H0 shape mismatch");

  if (!(f0 * C0.d + C1.d * f0).is_zero())
    throw NotChainMap("f0 does not commute with the differentials");
  if (!(f1 * C1.d + C2.d * f1).is_zero())
    throw NotChainMap("f1 does not commute with the differentials");
  if (!(C2.d * H0 + H0 * C0.d + f1 * f0).is_zero())
    throw NotNullhomotopy("dH0 + H0d differs from f1*f0");

  SeriesMatrix d(n0 + n1 + n2, n0 + n1 + n2, N);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) d.at(i, j) = C0.d.at(i, j);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) d.at(n0 + i, n0 + j) = C1.d.at(i, j);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) d.at(n0 + n1 + i, n0 + n1 + j) = C2.d.at(i, j);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n0; ++j) d.at(n0 + i, j) = f0.at(i, j);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n1; ++j) d.at(n0 + n1 + i, n0 + j) = f1.at(i, j);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n0; ++j) d.at(n0 + n1 + i, j) = H0.at(i, j);
  return make_complex(d);
}

// Acyclicity over the field reduction (set U = 0): rank-nullity on the bit
// matrix of unit entries. For finite free complexes this implies acyclicity
// over the full ring.
inline bool is_acyclic_nakayama(const FiniteComplex& C) {
  const int n = C.d.rows();
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = C.d.at(i, j).is_unit();
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int pivot = -1;
    for (int r = rank; r < n; ++r)
      if (m[r][col]) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < n; ++r)
      if (r != rank && m[r][col])
        for (int c2 = col; c2 < n; ++c2) m[r][c2] = m[r][c2] != m[rank][c2];
    ++rank;
  }
  return 2 * rank == n;
}

}  // namespace hft
