#pragma once

// Local systems on the attaching curves: the u- and c-sequences attached to a
// slope, the infinity-curve monodromy, the rank-p model module it is
// isomorphic to, and the fractional grading exponents that the isomorphism
// transports.

#include <numeric>
#include <vector>

#include "hft/diagram.hpp"
#include "hft/rational.hpp"
#include "hft/series.hpp"

namespace hft {

// u_i in {1, U} stored as the exponent (0 or 1); c_i are block sizes.
struct UCSequences {
  std::vector<int> u;
  std::vector<int> c;
};

inline UCSequences uc_sequences(const SlopeParams& sp) {
  UCSequences uc;
  uc.u.assign(sp.p, 0);
  for (int i = 0; i < sp.k; ++i)
    uc.u[mod_pos(-static_cast<long long>(i) * sp.qinv - 1, sp.p)] = 1;
  uc.c.resize(sp.p);
  for (int i = 0; i < sp.p; ++i) uc.c[i] = sp.s[mod_pos(i - sp.k, sp.p)];
  return uc;
}

// A generalized permutation matrix with monomial entries U^uexp: basis vector
// i maps to U^{uexp[i]} times basis vector perm[i].
struct GenPerm {
  std::vector<int> perm;
  std::vector<int> uexp;

  int rank() const { return static_cast<int>(perm.size()); }

  static GenPerm identity(int n) {
    GenPerm g;
    g.perm.resize(n);
    g.uexp.assign(n, 0);
    for (int i = 0; i < n; ++i) g.perm[i] = i;
    return g;
  }

  // (a*b)(e_i) = a(b(e_i))
  friend GenPerm operator*(const GenPerm& a, const GenPerm& b) {
    GenPerm g;
    int n = b.rank();
    g.perm.resize(n);
    g.uexp.resize(n);
    for (int i = 0; i < n; ++i) {
      g.perm[i] = a.perm[b.perm[i]];
      g.uexp[i] = a.uexp[b.perm[i]] + b.uexp[i];
    }
    return g;
  }

  // U * inverse: entries stay monomial with exponent 1 - uexp, which is
  // nonnegative exactly because every entry of the original is 1 or U.
  GenPerm u_times_inverse() const {
    GenPerm g;
    int n = rank();
    g.perm.resize(n);
    g.uexp.resize(n);
    for (int i = 0; i < n; ++i) {
      g.perm[perm[i]] = i;
      g.uexp[perm[i]] = 1 - uexp[i];
    }
    return g;
  }

  int u_entry_count() const {
    int c = 0;
    for (int e : uexp) c += (e != 0);
    return c;
  }

  SeriesMatrix to_matrix(int trunc) const {
    SeriesMatrix m(rank(), rank(), trunc);
    for (int i = 0; i < rank(); ++i) m.at(perm[i], i) = Series::upow(uexp[i], trunc);
    return m;
  }

  friend bool operator==(const GenPerm&, const GenPerm&) = default;
};

// Monodromy of the infinity curve: y_i -> u_i * y_{i+1}.
inline GenPerm monodromy_infinity(const SlopeParams& sp) {
  UCSequences uc = uc_sequences(sp);
  GenPerm g;
  g.perm.resize(sp.p);
  g.uexp = uc.u;
  for (int i = 0; i < sp.p; ++i) g.perm[i] = (i + 1) % sp.p;
  return g;
}

// The model monodromy: e_i -> U^{[(i+q) mod p < k]} * e_{(i+q) mod p}.
inline GenPerm model_monodromy(const SlopeParams& sp) {
  GenPerm g;
  g.perm.resize(sp.p);
  g.uexp.resize(sp.p);
  for (int i = 0; i < sp.p; ++i) {
    g.perm[i] = static_cast<int>(mod_pos(i + sp.q, sp.p));
    g.uexp[i] = g.perm[i] < sp.k ? 1 : 0;
  }
  return g;
}

// The permutation y_i -> e_{(q*i + k - 1) mod p} conjugates the infinity
// monodromy into the model monodromy, entry by entry.
inline bool recover_isomorphism_check(const SlopeParams& sp) {
  GenPerm inf = monodromy_infinity(sp);
  GenPerm model = model_monodromy(sp);
  std::vector<int> phi(sp.p);
  for (int i = 0; i < sp.p; ++i)
    phi[i] = static_cast<int>(mod_pos(static_cast<long long>(sp.q) * i + sp.k - 1, sp.p));
  for (int i = 0; i < sp.p; ++i) {
    if (model.perm[phi[i]] != phi[inf.perm[i]]) return false;
    if (model.uexp[phi[i]] != inf.uexp[i]) return false;
  }
  return true;
}

// Grading exponents m'_i on the y-basis: the recursion m_{i+1} = m_i + k/p,
// minus 1 whenever u_i = U, normalized so the minimum is zero. The recursion
// closes up because u has exactly k entries equal to U.
inline std::vector<Rational> grading_exponents(const SlopeParams& sp) {
  UCSequences uc = uc_sequences(sp);
  std::vector<Rational> m(sp.p, Rational(0));
  for (int i = 0; i + 1 < sp.p; ++i)
    m[i + 1] = m[i] + Rational(sp.k, sp.p) - Rational(uc.u[i]);
  Rational mn = *std::min_element(m.begin(), m.end());
  for (Rational& r : m) r -= mn;
  return m;
}

// The same exponents transported to the model basis along y_i -> e_{(q*i+k-1)
// mod p}. These are the exponents that make specialized differentials
// grading-homogeneous: they satisfy n_{(i+q) mod p} = n_i + k/p - [(i+q) mod
// p < k] on the nose (the normalization shift cancels in differences).
inline std::vector<Rational> grading_exponents_model(const SlopeParams& sp) {
  std::vector<Rational> m = grading_exponents(sp);
  std::vector<Rational> n(sp.p, Rational(0));
  for (int i = 0; i < sp.p; ++i)
    n[mod_pos(static_cast<long long>(sp.q) * i + sp.k - 1, sp.p)] = m[i];
  return n;
}

}  // namespace hft
