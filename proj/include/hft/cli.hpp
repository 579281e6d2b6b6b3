#pragma once

// Command-line front end: subcommands zdata, verify, kernel, hfk, sweep.
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "hft/json_io.hpp"

namespace hft {

inline void check_trunc(int N) {
  if (N < kMinTrunc) throw TruncationTooSmall(N);
}

inline std::vector<std::tuple<int, int, int>> sweep_triples(int bound) {
  std::vector<std::tuple<int, int, int>> triples;
  for (int s = 2; s <= bound; ++s)
    for (int p = 1; p < s; ++p) {
      int q = s - p;
      if (std::gcd(p, q) != 1) continue;
      for (int k = 0; k < p; ++k) triples.emplace_back(p, q, k);
    }
  return triples;
}

// Runs the verifier over every coprime (p,q) with p+q <= bound and every k,
// optionally on several threads; the report order is always (p+q, p, k).
inline std::vector<VerificationReport> run_sweep(int bound, int N, CoeffOption option,
                                                 bool with_stability, int jobs) {
  auto triples = sweep_triples(bound);
  std::vector<VerificationReport> reports(triples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= triples.size()) break;
      auto [p, q, k] = triples[idx];
      reports[idx] =
          verify_main_theorem(make_slope_params(p, q, k), N, option, with_stability);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return reports;
}

namespace cli_detail {

struct OutputTarget {
  std::ostream& fallback;
  std::string path;

  template <typename Fn>
  void write(Fn&& fn) const {
    if (path.empty()) {
      fn(fallback);
    } else {
      std::ofstream file(path);
      if (!file) throw BadInput("cannot open output file: " + path);
      fn(file);
    }
  }
};

inline int default_jobs() {
  if (const char* env = std::getenv("SURGERY_TRIANGLE_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

inline void print_report_text(const VerificationReport& r, std::ostream& os) {
  os << "p=" << r.p << " q=" << r.q << " k=" << r.k << " trunc=" << r.trunc
     << " option=" << option_name(r.option) << "\n";
  if (!r.solved) {
    os << "  solve failed: " << r.failure << "\n";
    return;
  }
  os << "  mu2 compositions vanish to order " << r.verified_order
     << " (raw " << r.vanish_order << "): " << (r.mu2_vanish ? "pass" : "FAIL")
     << "\n";
  os << "  mod-U coefficient patterns: " << (r.uvw_mod_u ? "pass" : "FAIL") << "\n";
  os << "  incidence parity: " << (r.incidence ? "pass" : "FAIL") << "\n";
  os << "  conjugation identity: " << (r.conjugation ? "pass" : "FAIL") << "\n";
  os << "  involution ranks " << r.rank_a << " = " << r.rank_b
     << " + 1, image contained: " << (r.involution ? "pass" : "FAIL") << "\n";
  if (r.stability_checked)
    os << "  stability at doubled truncation: " << (r.stable ? "pass" : "FAIL")
       << "\n";
  os << "  overall: " << (r.ok() ? "pass" : "FAIL") << "\n";
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Surgery-triangle local certificate calculator"};
  app.require_subcommand(1);

  int p = 0, q = 0, k = 0, N = kDefaultTrunc;
  int bound = 0, jobs = cli_detail::default_jobs();
  std::string option_str = "unit-u", out_path, knot_name, knot_file;
  bool as_text = false, as_json = false, with_stability = false, no_stability = false;

  auto add_common = [&](CLI::App* cmd, bool with_k) {
    cmd->add_option("--trunc", N, "truncation order (default 64)");
    cmd->add_flag("--json", as_json, "emit JSON (default)");
    cmd->add_flag("--text", as_text, "emit a human-readable summary");
    cmd->add_option("--out", out_path, "write the report to a file");
    if (with_k) cmd->add_option("--k", k, "twisting level (default 0)");
  };

  CLI::App* zdata = app.add_subcommand("zdata", "basepoint counts and zig-zag data");
  zdata->add_option("--p", p)->required();
  zdata->add_option("--q", q)->required();
  add_common(zdata, true);

  CLI::App* verify = app.add_subcommand("verify", "verify the local certificate");
  verify->add_option("--p", p);
  verify->add_option("--q", q);
  verify->add_option("--option", option_str)
      ->check(CLI::IsMember({"unit-u", "unit-w"}));
  verify->add_option("--sweep", bound, "verify all coprime pairs with p+q <= bound");
  verify->add_option("--jobs", jobs, "sweep parallelism");
  verify->add_flag("--stability", with_stability,
                   "also check agreement at doubled truncation");
  verify->add_flag("--no-stability", no_stability, "skip the stability check");
  add_common(verify, true);

  CLI::App* kernel = app.add_subcommand("kernel", "triangle matrix kernels");
  kernel->add_option("--p", p)->required();
  kernel->add_option("--q", q)->required();
  add_common(kernel, false);

  CLI::App* hfk_cmd = app.add_subcommand("hfk", "modified knot Floer homology");
  hfk_cmd->add_option("--knot", knot_name, "built-in knot: unknot or rh_trefoil");
  hfk_cmd->add_option("--file", knot_file, "knot complex JSON document");
  hfk_cmd->add_option("--p", p)->required();
  hfk_cmd->add_option("--q", q)->required();
  add_common(hfk_cmd, true);

  CLI::App* sweep = app.add_subcommand("sweep", "verify a whole family");
  sweep->add_option("--bound", bound, "largest p+q")->required();
  sweep->add_option("--option", option_str)
      ->check(CLI::IsMember({"unit-u", "unit-w"}));
  sweep->add_option("--jobs", jobs, "parallelism");
  sweep->add_flag("--stability", with_stability,
                  "also check agreement at doubled truncation");
  add_common(sweep, false);

  std::vector<const char*> argv;
  argv.push_back("hft");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  cli_detail::OutputTarget target{out, out_path};
  bool text = as_text && !as_json;
  CoeffOption option =
      option_str == "unit-w" ? CoeffOption::UnitW : CoeffOption::UnitU;

  try {
    check_trunc(N);

    if (zdata->parsed()) {
      SlopeParams sp = make_slope_params(p, q, k);
      ojson j = zdata_to_json(sp, N);
      target.write([&](std::ostream& os) {
        if (text) {
          os << "p=" << p << " q=" << q << " k=" << k << "\ns =";
          for (int si : sp.s) os << " " << si;
          os << "\nspecial =";
          for (long long n : special_indices(sp)) os << " " << n;
          os << "\nzigzag single cycle: "
             << (j["zigzag"]["single_cycle"].get<bool>() ? "yes" : "no") << "\n";
          for (const auto& row : j["z"])
            os << "z[" << row[0].get<long long>()
               << "] = " << row[1].get<long long>() << "\n";
        } else {
          os << dump_canonical(j);
        }
      });
      return 0;
    }

    if (kernel->parsed()) {
      ojson j = kernel_to_json(p, q, N);
      target.write([&](std::ostream& os) {
        if (text) {
          TriangleMatrix tm = build_F(p, q, N);
          KernelResult kf = kernel_generator(tm.F);
          KernelResult kt = kernel_generator(transpose(tm.F));
          os << "kernel of F:";
          for (const Series& s : kf.generator) os << "  [" << to_string(s) << "]";
          os << "\nkernel of F*:";
          for (const Series& s : kt.generator) os << "  [" << to_string(s) << "]";
          os << "\n";
        } else {
          os << dump_canonical(j);
        }
      });
      return 0;
    }

    if (hfk_cmd->parsed()) {
      if (knot_name.empty() == knot_file.empty())
        throw BadInput("hfk needs exactly one of --knot or --file");
      KnotComplex K;
      std::string label;
      if (!knot_name.empty()) {
        K = builtin_knot(knot_name);
        label = knot_name;
      } else {
        std::ifstream in(knot_file);
        if (!in) throw BadInput("cannot read knot file: " + knot_file);
        nlohmann::json doc;
        try {
          in >> doc;
        } catch (const nlohmann::json::parse_error& e) {
          throw BadInput(std::string("knot file is not valid JSON: ") + e.what());
        }
        K = knot_from_json(doc);
        label = knot_file;
      }
      SlopeParams sp = make_slope_params(p, q, k);
      ojson j = hfk_to_json(label, K, sp, N);
      target.write([&](std::ostream& os) {
        if (text) {
          os << "HFK of " << label << " at (" << p << "," << q << "," << k
             << "), trunc " << N << "\n";
          os << "free rank " << j["homology"]["free_rank"].get<int>() << ":";
          for (const auto& g : j["homology"]["free"])
            os << " " << g.get<std::string>();
          os << "\ntorsion:";
          for (const auto& t : j["homology"]["torsion"])
            os << " U^" << t["exponent"].get<int>() << " at "
               << t["grading"].get<std::string>();
          os << "\n";
        } else {
          os << dump_canonical(j);
        }
      });
      return 0;
    }

    if (verify->parsed() && bound == 0) {
      if (p == 0 || q == 0)
        throw BadInput("verify needs --p and --q (or --sweep)");
      SlopeParams sp = make_slope_params(p, q, k);
      VerificationReport rep =
          verify_main_theorem(sp, N, option, !no_stability);
      target.write([&](std::ostream& os) {
        if (text)
          cli_detail::print_report_text(rep, os);
        else
          os << dump_canonical(report_to_json(rep));
      });
      return rep.ok() ? 0 : 1;
    }

    // sweep subcommand, or verify --sweep
    if (bound < 2) throw BadInput("sweep bound must be at least 2");
    std::vector<VerificationReport> reports =
        run_sweep(bound, N, option, with_stability, jobs);
    bool all_ok = true;
    for (const VerificationReport& r : reports) all_ok = all_ok && r.ok();
    target.write([&](std::ostream& os) {
      if (text) {
        for (const VerificationReport& r : reports)
          cli_detail::print_report_text(r, os);
        os << (all_ok ? "all pass" : "FAILURES PRESENT") << "\n";
      } else {
        ojson arr = ojson::array();
        for (const VerificationReport& r : reports) arr.push_back(report_to_json(r));
        os << dump_canonical(arr);
      }
    });
    return all_ok ? 0 : 1;
  } catch (const NoKernel& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const AmbiguousKernel& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnstableTorsion& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hft
