#pragma once

// Knot Floer complexes over the two-variable series ring, their
// specialization along the rank-p model local system, and the resulting
// fractionally graded homology.

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hft/homalg.hpp"
#include "hft/localsys.hpp"
#include "hft/rational.hpp"

namespace hft {

struct UnknownKnot : Error {
  explicit UnknownKnot(const std::string& name)
      : Error("unknown built-in knot: " + name) {}
};

struct KnotGenerator {
  std::string name;
  Rational gr_w, gr_z;
};

// Differential entries are F2-sums of monomials W^a Z^b, stored as sorted
// (a, b) pair lists with even repetitions cancelled.
using WZPoly = std::vector<std::pair<int, int>>;

struct KnotComplex {
  std::vector<KnotGenerator> generators;
  // arrows[r][c]: the W,Z-polynomial on the arrow from generator c to r.
  std::vector<std::vector<WZPoly>> arrows;

  int rank() const { return static_cast<int>(generators.size()); }
};

inline WZPoly wz_normalize(WZPoly p) {
  std::sort(p.begin(), p.end());
  WZPoly out;
  for (const auto& m : p) {
    if (!out.empty() && out.back() == m)
      out.pop_back();  // characteristic 2
    else
      out.push_back(m);
  }
  return out;
}

inline WZPoly wz_multiply(const WZPoly& a, const WZPoly& b) {
  WZPoly out;
  for (const auto& [a1, b1] : a)
    for (const auto& [a2, b2] : b) out.emplace_back(a1 + a2, b1 + b2);
  return wz_normalize(out);
}

inline WZPoly wz_add(WZPoly a, const WZPoly& b) {
  a.insert(a.end(), b.begin(), b.end());
  return wz_normalize(a);
}

// Checks d*d = 0 over the two-variable ring and that every monomial W^a Z^b
// on an arrow c -> r satisfies gr_w(r) - 2a = gr_w(c) - 1 and
// gr_z(r) - 2b = gr_z(c) - 1.
inline void validate_knot_complex(const KnotComplex& K) {
  const int n = K.rank();
  if (static_cast<int>(K.arrows.size()) != n)
    throw BadInput("arrow table rank mismatch");
  for (const auto& row : K.arrows)
    if (static_cast<int>(row.size()) != n) throw BadInput("arrow table rank mismatch");

  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      for (const auto& [a, b] : K.arrows[r][c]) {
        if (a < 0 || b < 0) throw BadInput("negative monomial exponent");
        bool w_ok = K.generators[r].gr_w - Rational(2 * a) ==
                    K.generators[c].gr_w - Rational(1);
        bool z_ok = K.generators[r].gr_z - Rational(2 * b) ==
                    K.generators[c].gr_z - Rational(1);
        if (!w_ok || !z_ok)
          throw BadInput("arrow " + K.generators[c].name + " -> " +
                         K.generators[r].name + " breaks the bigrading");
      }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      WZPoly sq;
      for (int m = 0; m < n; ++m)
        sq = wz_add(sq, wz_multiply(K.arrows[i][m], K.arrows[m][j]));
      if (!sq.empty())
        throw BadInput("knot differential does not square to zero");
    }
}

inline KnotComplex builtin_knot(const std::string& name) {
  KnotComplex K;
  if (name == "unknot") {
    K.generators = {{"x", Rational(0), Rational(0)}};
    K.arrows.assign(1, std::vector<WZPoly>(1));
  } else if (name == "rh_trefoil") {
    K.generators = {{"a", Rational(-1), Rational(-1)},
                    {"b", Rational(0), Rational(-2)},
                    {"c", Rational(-2), Rational(0)}};
    K.arrows.assign(3, std::vector<WZPoly>(3));
    K.arrows[1][0] = {{1, 0}};  // W b
    K.arrows[2][0] = {{0, 1}};  // Z c
  } else {
    throw UnknownKnot(name);
  }
  validate_knot_complex(K);
  return K;
}

struct SpecializedComplex {
  FiniteComplex complex;
  // When gcd(p,k) > 1 the grading exponents are not pairwise distinct mod 1
  // and the fractional gradings are a convention, not canonical.
  bool canonical_gradings = true;
  std::vector<std::string> basis_names;
};

// Tensor with the rank-p model: W acts as the model monodromy, Z as U times
// its inverse, so W*Z acts as multiplication by U. Generator g spawns p basis
// vectors g⊗e_i graded by (k/p) gr_w(g) + ((p-k)/p) gr_z(g) - 2 n_i with the
// transported exponents n_i.
inline SpecializedComplex specialize(const KnotComplex& K, const SlopeParams& sp,
                                     int N) {
  validate_knot_complex(K);
  const int p = sp.p, k = sp.k;
  const int n = K.rank();
  GenPerm w_act = model_monodromy(sp);
  GenPerm z_act = w_act.u_times_inverse();

  SpecializedComplex out;
  out.canonical_gradings = std::gcd(p, k) == 1;  // gcd(p,0) = p

  std::vector<Rational> ne = grading_exponents_model(sp);
  std::vector<Rational> grading(static_cast<std::size_t>(n) * p);
  for (int g = 0; g < n; ++g)
    for (int i = 0; i < p; ++i) {
      grading[static_cast<std::size_t>(g) * p + i] =
          Rational(k, p) * K.generators[g].gr_w +
          Rational(p - k, p) * K.generators[g].gr_z - Rational(2) * ne[i];
      out.basis_names.push_back(K.generators[g].name + "*e" + std::to_string(i));
    }

  SeriesMatrix d(n * p, n * p, N);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      for (const auto& [a, b] : K.arrows[r][c]) {
        GenPerm act = GenPerm::identity(p);
        for (int t = 0; t < a; ++t) act = w_act * act;
        for (int t = 0; t < b; ++t) act = z_act * act;
        for (int i = 0; i < p; ++i)
          d.at(r * p + act.perm[i], c * p + i) +=
              Series::upow(act.uexp[i], N);
      }

  out.complex = make_complex(d, &grading);
  return out;
}

inline HomologyDecomp hfk(const KnotComplex& K, const SlopeParams& sp, int N) {
  return homology(specialize(K, sp, N).complex);
}

}  // namespace hft
