#pragma once

// Canonical JSON in and out: every emitter uses ordered keys, reduced
// "num/den" strings for rationals, and ascending exponent arrays for series,
// so identical configurations produce byte-identical reports.

#include <string>
#include <vector>

#include <json.hpp>

#include "hft/cycles.hpp"
#include "hft/diagram.hpp"
#include "hft/homalg.hpp"
#include "hft/knotfloer.hpp"
#include "hft/localsys.hpp"
#include "hft/rational.hpp"
#include "hft/series.hpp"

namespace hft {

using ojson = nlohmann::ordered_json;

inline ojson series_to_json(const Series& s) { return ojson(s.exponents()); }

inline ojson rational_to_json(const Rational& r) { return ojson(to_string(r)); }

inline std::string dump_canonical(const ojson& j) { return j.dump(2) + "\n"; }

inline Rational rational_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return rational_from_string(j.get<std::string>());
  throw BadInput(where + " must be an integer or a \"num/den\" string");
}

inline ojson zdata_to_json(const SlopeParams& sp, int N) {
  ojson j;
  j["p"] = sp.p;
  j["q"] = sp.q;
  j["k"] = sp.k;
  j["s"] = sp.s;
  j["special"] = special_indices(sp);
  ZigZag zz = zigzag(sp);
  ojson zj;
  zj["vertices"] = zz.vertices;
  zj["h_edges"] = ojson::array();
  for (const auto& [a, b] : zz.h_edges) zj["h_edges"].push_back({a, b});
  zj["l_edges"] = ojson::array();
  for (const auto& [a, b] : zz.l_edges) zj["l_edges"].push_back({a, b});
  zj["single_cycle"] = zz.single_cycle;
  j["zigzag"] = zj;
  auto [lo, hi] = z_window(sp.p, sp.q, N);
  ojson table = ojson::array();
  for (long long n = lo; n <= hi; ++n) table.push_back({n, z_count(sp.p, sp.q, n)});
  j["z"] = table;
  return j;
}

inline ojson local_system_to_json(const SlopeParams& sp) {
  UCSequences uc = uc_sequences(sp);
  ojson j;
  ojson uj = ojson::array();
  for (int e : uc.u) uj.push_back(e ? "U" : "1");
  j["u"] = uj;
  j["c"] = uc.c;
  ojson gj = ojson::array();
  for (const Rational& r : grading_exponents(sp)) gj.push_back(to_string(r));
  j["gradings"] = gj;
  return j;
}

inline const char* option_name(CoeffOption o) {
  return o == CoeffOption::UnitU ? "unit-u" : "unit-w";
}

inline ojson report_to_json(const VerificationReport& r) {
  ojson j;
  j["p"] = r.p;
  j["q"] = r.q;
  j["k"] = r.k;
  j["trunc"] = r.trunc;
  j["option"] = option_name(r.option);
  j["ok"] = r.ok();
  j["solved"] = r.solved;
  if (!r.failure.empty()) j["failure"] = r.failure;
  ojson checks;
  checks["mu2_vanish"] = r.mu2_vanish;
  checks["uvw_mod_u"] = r.uvw_mod_u;
  checks["incidence"] = r.incidence;
  checks["conjugation"] = r.conjugation;
  checks["involution"] = r.involution;
  if (r.stability_checked) checks["stability"] = r.stable;
  j["checks"] = checks;
  j["vanish_order"] = r.vanish_order;
  j["verified_order"] = r.verified_order;
  j["max_finite"] = r.max_finite;
  j["rank_a"] = r.rank_a;
  j["rank_b"] = r.rank_b;
  j["diag_f"] = r.diag_f;
  j["diag_fstar"] = r.diag_fstar;
  SlopeParams sp = make_slope_params(r.p, r.q, r.k);
  j["local_system"] = local_system_to_json(sp);
  ojson rows = ojson::array();
  for (const auto& [i, l] : r.row_labels) rows.push_back({i, l});
  j["row_labels"] = rows;
  ojson vj = ojson::array();
  for (const Series& s : r.v) vj.push_back(s.exponents());
  j["v"] = vj;
  ojson tj = ojson::array();
  for (const Series& s : r.t) tj.push_back(s.exponents());
  j["t"] = tj;
  ojson uwj = ojson::array();
  for (const Series& s : r.uw_products) uwj.push_back(s.exponents());
  j["uw_products"] = uwj;
  return j;
}

inline ojson homology_to_json(const HomologyDecomp& h) {
  ojson j;
  ojson fj = ojson::array();
  for (const Rational& g : h.free) fj.push_back(to_string(g));
  j["free_rank"] = h.free_rank();
  j["free"] = fj;
  ojson tj = ojson::array();
  for (const TorsionSummand& t : h.torsion) {
    ojson e;
    e["exponent"] = t.exponent;
    e["grading"] = to_string(t.grading);
    tj.push_back(e);
  }
  j["torsion"] = tj;
  return j;
}

inline KnotComplex knot_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw BadInput("knot document must be a JSON object");
  if (!j.contains("generators") || !j["generators"].is_array())
    throw BadInput("knot document needs a \"generators\" array");
  if (!j.contains("differential") || !j["differential"].is_array())
    throw BadInput("knot document needs a \"differential\" array");

  KnotComplex K;
  std::map<std::string, int> index;
  for (const auto& g : j["generators"]) {
    if (!g.is_object() || !g.contains("name") || !g["name"].is_string() ||
        !g.contains("gr_w") || !g.contains("gr_z"))
      throw BadInput("generator entries need name, gr_w, gr_z");
    std::string name = g["name"].get<std::string>();
    if (index.count(name)) throw BadInput("duplicate generator name: " + name);
    index[name] = K.rank();
    K.generators.push_back({name, rational_from_json(g["gr_w"], "gr_w"),
                            rational_from_json(g["gr_z"], "gr_z")});
  }
  const int n = K.rank();
  K.arrows.assign(n, std::vector<WZPoly>(n));
  for (const auto& a : j["differential"]) {
    if (!a.is_object() || !a.contains("from") || !a["from"].is_string() ||
        !a.contains("to") || !a["to"].is_string() || !a.contains("monomials") ||
        !a["monomials"].is_array())
      throw BadInput("differential entries need from, to, monomials");
    auto from = index.find(a["from"].get<std::string>());
    auto to = index.find(a["to"].get<std::string>());
    if (from == index.end() || to == index.end())
      throw BadInput("differential references an unknown generator");
    WZPoly poly;
    for (const auto& m : a["monomials"]) {
      if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() ||
          !m[1].is_number_integer())
        throw BadInput("monomials must be [a, b] integer pairs");
      int wa = m[0].get<int>(), zb = m[1].get<int>();
      if (wa < 0 || zb < 0) throw BadInput("monomial exponents must be nonnegative");
      poly.emplace_back(wa, zb);
    }
    K.arrows[to->second][from->second] =
        wz_add(K.arrows[to->second][from->second], poly);
  }
  validate_knot_complex(K);  // throws BadInput on d^2 != 0 or bad bigrading
  return K;
}

inline ojson kernel_to_json(int p, int q, int N) {
  TriangleMatrix tm = build_F(p, q, N);
  ojson j;
  j["p"] = p;
  j["q"] = q;
  j["trunc"] = N;
  ojson rows = ojson::array();
  for (const auto& [i, l] : tm.row_labels) rows.push_back({i, l});
  j["row_labels"] = rows;
  auto side = [&](const SeriesMatrix& m) {
    KernelResult kr = kernel_generator(m);
    ojson s;
    s["diag"] = kr.diag;
    s["max_finite"] = kr.max_finite;
    ojson gen = ojson::array();
    for (const Series& g : kr.generator) gen.push_back(g.exponents());
    s["kernel"] = gen;
    return s;
  };
  j["f"] = side(tm.F);
  j["fstar"] = side(transpose(tm.F));
  return j;
}

inline ojson hfk_to_json(const std::string& knot_label, const KnotComplex& K,
                         const SlopeParams& sp, int N) {
  SpecializedComplex sx = specialize(K, sp, N);
  HomologyDecomp h = homology(sx.complex);
  ojson j;
  j["knot"] = knot_label;
  j["p"] = sp.p;
  j["q"] = sp.q;
  j["k"] = sp.k;
  j["trunc"] = N;
  j["rank"] = sx.complex.d.rows();
  j["canonical_gradings"] = sx.canonical_gradings;
  j["homology"] = homology_to_json(h);
  return j;
}

}  // namespace hft
