#pragma once

// The triangle-counting matrix F and its adjoint, the kernel coefficients
// (u, v, w), assembly of the three cycles, the mu_2 composition engine, and
// the battery of certificates: vanishing orders, mod-U patterns, incidence
// parity, the conjugation identity, and the involution rank argument.

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hft/diagram.hpp"
#include "hft/localsys.hpp"
#include "hft/rational.hpp"
#include "hft/series.hpp"

namespace hft {

struct TriangleMatrix {
  std::vector<std::pair<int, int>> row_labels;  // (i, l) with s_i != 0, l < s_i
  SeriesMatrix F;                               // q x q, columns indexed by Z/q
};

inline SeriesMatrix transpose(const SeriesMatrix& m) {
  SeriesMatrix out(m.cols(), m.rows(), m.trunc());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
  return out;
}

// The window [lo, hi] of all n with z_n < N; it always contains the zero
// window [0, p+q-1], and z is monotone beyond it on both sides.
inline std::pair<long long, long long> z_window(int p, int q, int N) {
  long long lo = 0;
  while (z_count(p, q, lo - 1) < N) --lo;
  long long hi = p + q - 1;
  while (z_count(p, q, hi + 1) < N) ++hi;
  return {lo, hi};
}

// Entry at row (i, lambda), column j': the sum of U^{z_n} over every integer
// n with n = i mod p, n = j'+p mod q, floor(n/p) = lambda mod s_i. The n with
// z_n >= N contribute nothing; characteristic 2 makes coinciding exponents
// cancel, hence the toggles.
inline TriangleMatrix build_F(int p, int q, int N) {
  require_coprime(p, q);
  std::vector<int> s = s_sequence(p, q);
  TriangleMatrix tm;
  for (int i = 0; i < p; ++i)
    for (int l = 0; l < s[i]; ++l) tm.row_labels.emplace_back(i, l);
  const int rows = static_cast<int>(tm.row_labels.size());  // equals q
  tm.F = SeriesMatrix(rows, q, N);

  const long long pq = static_cast<long long>(p) * q;
  const long long pinv_q = mod_inverse(p, q);  // p^{-1} mod q (1 when q = 1)
  const long long qinv_p = mod_inverse(q, p);

  for (int r = 0; r < rows; ++r) {
    auto [i, lambda] = tm.row_labels[r];
    const int si = s[i];
    for (int jp = 0; jp < q; ++jp) {
      // Chinese remainder: n0 = i mod p and n0 = jp + p mod q.
      long long b = mod_pos(jp + p, q);
      long long n0 = mod_pos(i * q % pq * qinv_p + b * p % pq * pinv_q, pq);
      long long l0 = (n0 - i) / p;
      // Among n = n0 + m*pq, keep floor(n/p) = l0 + m*q = lambda mod s_i.
      long long g = std::gcd(static_cast<long long>(q), static_cast<long long>(si));
      if (mod_pos(lambda - l0, g) != 0) continue;  // no solutions: zero entry
      long long step_m = si / g;
      long long m0 = 0;  // every m works when the step is 1
      if (step_m > 1)
        m0 = mod_pos((lambda - l0) / g % step_m * mod_inverse(q / g, step_m), step_m);
      Series& entry = tm.F.at(r, jp);
      const long long stride = pq * step_m;
      long long base = n0 + m0 * pq;
      // Walk the residue class upward, then downward, until z leaves the
      // truncation window on each side.
      for (long long n = base;; n += stride) {
        long long z = z_count(p, q, n);
        if (z < N) entry.toggle(static_cast<int>(z));
        if (n > p + q - 2 && z >= N) break;
      }
      for (long long n = base - stride;; n -= stride) {
        long long z = z_count(p, q, n);
        if (z < N) entry.toggle(static_cast<int>(z));
        if (n < p && z >= N) break;
      }
    }
  }
  return tm;
}

enum class CoeffOption { UnitU, UnitW };

struct SolvedCoefficients {
  int p = 0, q = 0, trunc = 0;
  CoeffOption option = CoeffOption::UnitU;
  std::vector<std::pair<int, int>> row_labels;
  std::vector<Series> v;                  // column kernel of F, indexed by Z/q
  std::vector<Series> t;                  // kernel of the adjoint, by row label
  std::vector<std::vector<Series>> u, w;  // [i][l] on the level-0 labels
  int max_finite = 0;
  std::vector<int> diag_f, diag_fstar;
};

inline SolvedCoefficients solve_coefficients(int p, int q, int N, CoeffOption option) {
  TriangleMatrix tm = build_F(p, q, N);
  KernelResult kv = kernel_generator(tm.F);
  KernelResult kt = kernel_generator(transpose(tm.F));

  SolvedCoefficients sc;
  sc.p = p;
  sc.q = q;
  sc.trunc = N;
  sc.option = option;
  sc.row_labels = tm.row_labels;
  sc.v = kv.generator;
  sc.t = kt.generator;
  sc.max_finite = std::max(kv.max_finite, kt.max_finite);
  sc.diag_f = kv.diag;
  sc.diag_fstar = kt.diag;

  std::vector<int> s = s_sequence(p, q);
  sc.u.resize(p);
  sc.w.resize(p);
  for (int i = 0; i < p; ++i) {
    sc.u[i].assign(s[i], Series(N));
    sc.w[i].assign(s[i], Series(N));
  }
  auto t_at = [&](int i, int l) -> const Series& {
    for (std::size_t r = 0; r < sc.row_labels.size(); ++r)
      if (sc.row_labels[r] == std::make_pair(i, l)) return sc.t[r];
    throw BadInput("row label out of range");
  };
  for (int i = 0; i < p; ++i)
    for (int l = 0; l < s[i]; ++l) {
      if (option == CoeffOption::UnitU) {
        sc.u[i][l] = l == 0 ? Series::one(N) : Series(N);
        sc.w[i][l] = t_at(i, static_cast<int>(mod_pos(-l, s[i])));
      } else {
        sc.u[i][l] = t_at(i, l);
        sc.w[i][l] = l == 0 ? Series::one(N) : Series(N);
      }
    }
  return sc;
}

// The three cycles at level k, stored through their coefficients on the
// standard basis: theta and zeta tables are indexed by the level-k labels
// (i, l) with c_i != 0, xi by j in Z/q.
struct PsiTriple {
  int k = 0;
  int trunc = 0;
  std::vector<int> c;
  std::vector<std::vector<Series>> theta, zeta;
  std::vector<Series> xi;
};

inline PsiTriple build_psis(const SlopeParams& sp, const SolvedCoefficients& sc) {
  const int p = sp.p, q = sp.q, k = sp.k, N = sc.trunc;
  UCSequences uc = uc_sequences(sp);
  PsiTriple psi;
  psi.k = k;
  psi.trunc = N;
  psi.c = uc.c;
  psi.theta.resize(p);
  psi.zeta.resize(p);
  psi.xi.assign(q, Series(N));
  for (int i = 0; i < p; ++i) {
    psi.theta[i].assign(uc.c[i], Series(N));
    psi.zeta[i].assign(uc.c[i], Series(N));
  }
  for (int i = 0; i < p; ++i) {
    int si = sp.s[i];
    if (si == 0) continue;
    int ik = (i + k) % p;
    int wrap = i >= p - k ? 1 : 0;  // the l-shift picked up when i+k wraps
    for (int l = 0; l < si; ++l) {
      psi.theta[ik][(l + wrap) % si] += sc.u[i][l];
      psi.zeta[ik][l] += sc.w[i][l];
    }
  }
  for (int j = 0; j < q; ++j) psi.xi[(j + k) % q] += sc.v[j];
  return psi;
}

// All-ones coefficients on exactly the special labels: the mod-U shadow of
// the solved cycles, used as the negative control.
inline PsiTriple special_basis_psis(const SlopeParams& sp, int N) {
  const int p = sp.p, q = sp.q, k = sp.k;
  UCSequences uc = uc_sequences(sp);
  PsiTriple psi;
  psi.k = k;
  psi.trunc = N;
  psi.c = uc.c;
  psi.theta.resize(p);
  psi.zeta.resize(p);
  psi.xi.assign(q, Series(N));
  for (int i = 0; i < p; ++i) {
    psi.theta[i].assign(uc.c[i], Series(N));
    psi.zeta[i].assign(uc.c[i], Series(N));
  }
  for (int i = 0; i < p; ++i) {
    if (sp.s[i] == 0) continue;
    int ik = (i + k) % p;
    psi.theta[ik][(i >= p - k ? 1 : 0) % sp.s[i]] = Series::one(N);
    psi.zeta[ik][0] = Series::one(N);
  }
  for (int r = 0; r < std::min(p, q); ++r)
    psi.xi[mod_pos(k - 1 - r, q)] = Series::one(N);
  return psi;
}

enum class Mu2Composition { ZeroR_RInf, RInf_Inf0, Inf0_ZeroR };

struct Mu2Output {
  std::vector<std::vector<Series>> theta, zeta;
  std::vector<Series> xi;

  int min_val(int trunc) const {
    int v = trunc;
    for (const auto& row : theta)
      for (const Series& s : row) v = std::min(v, s.val());
    for (const auto& row : zeta)
      for (const Series& s : row) v = std::min(v, s.val());
    for (const Series& s : xi) v = std::min(v, s.val());
    return v;
  }
};

// Weighted triangle sum: every n in the window contributes, for each d below
// c_i (i = n mod p), the product of the two input coefficients at the
// triangle's vertex labels times U^{z_{n-k}}, accumulated on the third label.
inline Mu2Output mu2(const PsiTriple& psi, Mu2Composition comp, const SlopeParams& sp,
                     int N) {
  const int p = sp.p, q = sp.q, k = sp.k;
  Mu2Output out;
  switch (comp) {
    case Mu2Composition::ZeroR_RInf:
      out.zeta.resize(p);
      for (int i = 0; i < p; ++i) out.zeta[i].assign(psi.c[i], Series(N));
      break;
    case Mu2Composition::RInf_Inf0:
      out.theta.resize(p);
      for (int i = 0; i < p; ++i) out.theta[i].assign(psi.c[i], Series(N));
      break;
    case Mu2Composition::Inf0_ZeroR:
      out.xi.assign(q, Series(N));
      break;
  }

  auto [lo, hi] = z_window(p, q, N);
  for (long long n = lo + k; n <= hi + k; ++n) {
    int i = static_cast<int>(mod_pos(n, p));
    int ci = psi.c[i];
    if (ci == 0) continue;
    long long z = z_count(p, q, n - k);
    if (z >= N) continue;
    long long ell = floor_div(n - i, p);
    int jb = static_cast<int>(mod_pos(n - p, q));
    Series weight = Series::upow(static_cast<int>(z), N);
    for (int d = 0; d < ci; ++d) {
      int lam = static_cast<int>(mod_pos(d + ell, ci));
      switch (comp) {
        case Mu2Composition::ZeroR_RInf:
          if (!psi.theta[i][lam].is_zero() && !psi.xi[jb].is_zero())
            out.zeta[i][d] += psi.theta[i][lam] * psi.xi[jb] * weight;
          break;
        case Mu2Composition::RInf_Inf0:
          if (!psi.xi[jb].is_zero() && !psi.zeta[i][d].is_zero())
            out.theta[i][lam] += psi.xi[jb] * psi.zeta[i][d] * weight;
          break;
        case Mu2Composition::Inf0_ZeroR:
          if (!psi.theta[i][lam].is_zero() && !psi.zeta[i][d].is_zero())
            out.xi[jb] += psi.theta[i][lam] * psi.zeta[i][d] * weight;
          break;
      }
    }
  }
  return out;
}

// Special-label incidence parity: every special theta / xi / zeta label must
// be hit by exactly two of the special triangles whose other two vertex
// labels are special as well, and no non-special label may be hit at all.
inline bool incidence_check(const SlopeParams& sp) {
  const int p = sp.p, q = sp.q, k = sp.k;
  UCSequences uc = uc_sequences(sp);

  std::set<std::pair<int, int>> special_theta, special_zeta;
  std::set<int> special_xi;
  for (int i = 0; i < p; ++i) {
    if (sp.s[i] == 0) continue;
    special_theta.insert({(i + k) % p, (i >= p - k ? 1 : 0) % sp.s[i]});
  }
  for (int i = 0; i < p; ++i)
    if (uc.c[i] != 0) special_zeta.insert({i, 0});
  for (int r = 0; r < std::min(p, q); ++r)
    special_xi.insert(static_cast<int>(mod_pos(k - 1 - r, q)));

  std::map<std::pair<int, int>, int> hits_theta, hits_zeta;
  std::map<int, int> hits_xi;
  for (long long n : special_indices(sp)) {
    int i = static_cast<int>(mod_pos(n, p));
    int ci = uc.c[i];
    if (ci == 0) continue;
    long long ell = floor_div(n - i, p);
    int jb = static_cast<int>(mod_pos(n - p, q));
    bool xi_sp = special_xi.count(jb) > 0;
    for (int d = 0; d < ci; ++d) {
      int lam = static_cast<int>(mod_pos(d + ell, ci));
      bool th_sp = special_theta.count({i, lam}) > 0;
      bool ze_sp = special_zeta.count({i, d}) > 0;
      if (xi_sp && ze_sp) ++hits_theta[{i, lam}];
      if (th_sp && ze_sp) ++hits_xi[jb];
      if (th_sp && xi_sp) ++hits_zeta[{i, d}];
    }
  }

  auto exactly_two_on = [](const auto& hits, const auto& want) {
    if (hits.size() != want.size()) return false;
    for (const auto& [label, count] : hits)
      if (count != 2 || !want.count(label)) return false;
    return true;
  };
  return exactly_two_on(hits_theta, special_theta) &&
         exactly_two_on(hits_xi, special_xi) &&
         exactly_two_on(hits_zeta, special_zeta);
}

// Structure constants of the weighted triangle sum at level k: the series
// weight attached to each (theta label, xi label, zeta label) incidence.
inline std::map<std::tuple<int, int, int, int>, Series> structure_constants(
    const SlopeParams& sp, int N) {
  const int p = sp.p, q = sp.q, k = sp.k;
  UCSequences uc = uc_sequences(sp);
  std::map<std::tuple<int, int, int, int>, Series> sc;
  auto [lo, hi] = z_window(p, q, N);
  for (long long n = lo + k; n <= hi + k; ++n) {
    int i = static_cast<int>(mod_pos(n, p));
    int ci = uc.c[i];
    if (ci == 0) continue;
    long long z = z_count(p, q, n - k);
    if (z >= N) continue;
    long long ell = floor_div(n - i, p);
    int jb = static_cast<int>(mod_pos(n - p, q));
    for (int d = 0; d < ci; ++d) {
      int lam = static_cast<int>(mod_pos(d + ell, ci));
      auto key = std::make_tuple(i, lam, jb, d);
      auto it = sc.find(key);
      if (it == sc.end()) it = sc.emplace(key, Series(N)).first;
      it->second.toggle(static_cast<int>(z));
    }
  }
  // Drop entries that cancelled to zero so map comparison is support-exact.
  for (auto it = sc.begin(); it != sc.end();)
    it = it->second.is_zero() ? sc.erase(it) : std::next(it);
  return sc;
}

// The level-k triangle sum is the level-0 one conjugated by the relabeling
// theta_{i,l} -> theta_{i+k, l(+1 on wrap)}, xi_j -> xi_{j+k},
// zeta_{i,l} -> zeta_{i+k,l}; checked as exact equality of structure
// constants.
inline bool conjugation_check(const SlopeParams& sp, int N) {
  const int p = sp.p, q = sp.q, k = sp.k;
  SlopeParams base = make_slope_params(p, q, 0);
  auto sc0 = structure_constants(base, N);
  auto sck = structure_constants(sp, N);
  if (sc0.size() != sck.size()) return false;
  std::vector<int> s = sp.s;
  for (const auto& [key, series] : sc0) {
    auto [i, lam, jb, d] = key;
    int ik = (i + k) % p;
    int wrap = i >= p - k ? 1 : 0;
    auto mapped = std::make_tuple(ik, (lam + wrap) % s[i], (jb + k) % q, d);
    auto it = sck.find(mapped);
    if (it == sck.end() || !(it->second == series)) return false;
  }
  return true;
}

struct InvolutionRanks {
  int rank_a = 0;
  int rank_b = 0;
  bool contained = false;
};

// The involution certificate: A is the invariant subspace on the column side,
// B the (almost-)invariant subspace on the row side; F must carry A into B
// with rank A = rank B + 1.
inline InvolutionRanks involution_rank_check(int p, int q, int N) {
  TriangleMatrix tm = build_F(p, q, N);
  std::vector<int> s = s_sequence(p, q);
  InvolutionRanks out;

  // Column side: orbits of j -> -(j+p+1) mod q; one generator per orbit.
  std::vector<std::vector<Series>> gens_a;
  std::set<int> seen;
  for (int j = 0; j < q; ++j) {
    if (seen.count(j)) continue;
    int jb = col_involution(p, q, j);
    seen.insert(j);
    seen.insert(jb);
    std::vector<Series> gen(q, Series(N));
    gen[j] = Series::one(N);
    if (jb != j) gen[jb] = Series::one(N);
    gens_a.push_back(std::move(gen));
  }
  out.rank_a = static_cast<int>(gens_a.size());

  // Row side: index lookup for the involution on labels.
  auto row_index = [&](int i, int l) {
    for (std::size_t r = 0; r < tm.row_labels.size(); ++r)
      if (tm.row_labels[r] == std::make_pair(i, l)) return static_cast<int>(r);
    throw BadInput("row label out of range");
  };
  const int rows = static_cast<int>(tm.row_labels.size());
  std::vector<int> partner(rows);
  for (int r = 0; r < rows; ++r) {
    auto [i, l] = tm.row_labels[r];
    auto [ib, lb] = row_involution(p, q, s, i, l);
    partner[r] = row_index(ib, lb);
  }

  // The one fixed row generator allowed into B: (i0, l0) with
  // l0*p + i0 = (p+q-1)/2, present exactly when p+q is odd and p < q.
  int extra = -1;
  if ((p + q) % 2 == 1 && p < q) {
    int half = (p + q - 1) / 2;
    int i0 = half % p, l0 = half / p;
    if (l0 >= s[i0]) throw BadInput("midpoint row label out of range");
    extra = row_index(i0, l0);
  }

  int two_orbits = 0;
  for (int r = 0; r < rows; ++r)
    if (partner[r] > r) ++two_orbits;
  out.rank_b = two_orbits + (extra >= 0 ? 1 : 0);

  out.contained = true;
  for (const auto& gen : gens_a) {
    std::vector<Series> y = tm.F.apply(gen);
    for (int r = 0; r < rows; ++r) {
      if (partner[r] == r) {
        if (r != extra && !y[r].is_zero()) out.contained = false;
      } else if (!(y[r] == y[partner[r]])) {
        out.contained = false;
      }
    }
  }
  return out;
}

struct VerificationReport {
  int p = 0, q = 0, k = 0, trunc = 0;
  CoeffOption option = CoeffOption::UnitU;
  bool solved = false;
  std::string failure;
  int vanish_order = 0;    // smallest valuation seen across the three sums
  int verified_order = 0;  // vanish order clamped by the kernel accuracy
  int max_finite = 0;
  bool mu2_vanish = false;
  bool uvw_mod_u = false;
  bool incidence = false;
  bool conjugation = false;
  bool involution = false;
  int rank_a = 0, rank_b = 0;
  bool stability_checked = false;
  bool stable = true;
  double elapsed_ms = 0;
  UCSequences uc;
  std::vector<Rational> gradings;
  std::vector<std::pair<int, int>> row_labels;
  std::vector<Series> v, t;
  std::vector<Series> uw_products;
  std::vector<int> diag_f, diag_fstar;

  bool ok() const {
    return solved && mu2_vanish && uvw_mod_u && incidence && conjugation &&
           involution && rank_a == rank_b + 1 && (!stability_checked || stable);
  }
};

inline bool agree_below(const Series& a, const Series& b, int order) {
  for (int e = 0; e < order; ++e)
    if (a.has(e) != b.has(e)) return false;
  return true;
}

inline VerificationReport verify_main_theorem(const SlopeParams& sp, int N,
                                              CoeffOption option,
                                              bool with_stability = false) {
  auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.p = sp.p;
  rep.q = sp.q;
  rep.k = sp.k;
  rep.trunc = N;
  rep.option = option;
  rep.uc = uc_sequences(sp);
  rep.gradings = grading_exponents(sp);

  SolvedCoefficients sc;
  try {
    sc = solve_coefficients(sp.p, sp.q, N, option);
  } catch (const Error& e) {
    rep.failure = e.what();
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return rep;
  }
  rep.solved = true;
  rep.row_labels = sc.row_labels;
  rep.v = sc.v;
  rep.t = sc.t;
  rep.max_finite = sc.max_finite;
  rep.diag_f = sc.diag_f;
  rep.diag_fstar = sc.diag_fstar;
  for (int i = 0; i < sp.p; ++i)
    if (sp.s[i] != 0) rep.uw_products.push_back(sc.u[i][0] * sc.w[i][0]);

  PsiTriple psi = build_psis(sp, sc);
  int vanish = N;
  for (Mu2Composition comp : {Mu2Composition::ZeroR_RInf, Mu2Composition::RInf_Inf0,
                              Mu2Composition::Inf0_ZeroR})
    vanish = std::min(vanish, mu2(psi, comp, sp, N).min_val(N));
  rep.vanish_order = vanish;
  rep.verified_order =
      std::min({vanish, N - kDefaultGuard, N - sc.max_finite - 1});
  rep.mu2_vanish = rep.verified_order >= N / 2;

  rep.uvw_mod_u = true;
  int mn = std::min(sp.p, sp.q);
  for (int j = 0; j < sp.q; ++j) {
    bool want = mod_pos(-(j + 1LL), sp.q) < mn;
    if (sc.v[j].is_unit() != want) rep.uvw_mod_u = false;
  }
  for (std::size_t r = 0; r < sc.row_labels.size(); ++r) {
    bool want = sc.row_labels[r].second == 0;
    if (sc.t[r].is_unit() != want) rep.uvw_mod_u = false;
  }

  rep.incidence = incidence_check(sp);
  rep.conjugation = conjugation_check(sp, N);
  InvolutionRanks ir = involution_rank_check(sp.p, sp.q, N);
  rep.rank_a = ir.rank_a;
  rep.rank_b = ir.rank_b;
  rep.involution = ir.contained && ir.rank_a == ir.rank_b + 1;

  if (with_stability) {
    rep.stability_checked = true;
    try {
      SolvedCoefficients sc2 = solve_coefficients(sp.p, sp.q, 2 * N, option);
      int order = N - kDefaultGuard;
      for (int j = 0; j < sp.q; ++j)
        if (!agree_below(sc.v[j], sc2.v[j], order)) rep.stable = false;
      for (std::size_t r = 0; r < sc.row_labels.size(); ++r)
        if (!agree_below(sc.t[r], sc2.t[r], order)) rep.stable = false;
    } catch (const Error& e) {
      rep.stable = false;
      rep.failure = e.what();
    }
  }

  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rep;
}

}  // namespace hft
