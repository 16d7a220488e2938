#include "cubicsum/cli.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>

#include "CLI11.hpp"

#include "cubicsum/errors.hpp"
#include "cubicsum/factor.hpp"
#include "cubicsum/factor_plan.hpp"
#include "cubicsum/harness.hpp"
#include "cubicsum/quad_field.hpp"
#include "cubicsum/report.hpp"

namespace cubicsum {

namespace {

int64_t parse_i64(const std::string& s, const char* what) {
  int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw invalid_input(std::string(what) + ": expected an integer, got '" + s + "'");
  return v;
}

mpz_class parse_mpz(const std::string& s, const char* what) {
  try {
    return mpz_class(s);
  } catch (const std::invalid_argument&) {
    throw invalid_input(std::string(what) + ": expected an integer, got '" + s + "'");
  }
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Alpha parse_alpha(const std::string& text) {
  auto starts = [&](const char* p) { return text.rfind(p, 0) == 0; };
  if (starts("sqrt:")) {
    int64_t d = parse_i64(text.substr(5), "alpha sqrt:<d>");
    return Alpha{QuadraticIrrational(0, 1, 1, d)};
  }
  if (starts("quad:")) {
    auto parts = split_on(text.substr(5), ',');
    if (parts.size() != 4)
      throw invalid_input("alpha quad:<f>,<g>,<c>,<d>: expected four integers");
    return Alpha{QuadraticIrrational(parse_mpz(parts[0], "quad f"),
                                     parse_mpz(parts[1], "quad g"),
                                     parse_mpz(parts[2], "quad c"),
                                     parse_i64(parts[3], "quad d"))};
  }
  if (starts("rat:")) {
    auto parts = split_on(text.substr(4), '/');
    if (parts.size() != 2)
      throw invalid_input("alpha rat:<a>/<q>: expected a numerator and denominator");
    RationalAlpha r{parse_mpz(parts[0], "rat a"), parse_mpz(parts[1], "rat q")};
    if (r.q <= 0) throw invalid_input("alpha rat:<a>/<q>: q must be positive");
    return Alpha{r};
  }
  throw invalid_input("alpha must match sqrt:<d> | quad:<f>,<g>,<c>,<d> | rat:<a>/<q>");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"cubic exponential sums: approximations, spectra, splits, "
               "verification suites, and scans"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format_s = "json";
  uint64_t seed = 1;
  int64_t max_q = 0;
  int64_t max_n = 0;
  app.add_option("--out", out_path, "write the report to this path");
  app.add_option("--format", format_s, "report format (default json)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "seed for randomized suites (default 1)");
  app.add_option("--max-q", max_q, "memory budget: largest spectrum length");
  app.add_option("--max-n", max_n, "precision budget: largest sum length");

  std::string a_alpha, a_n;
  int64_t a_d = 0;
  double a_eps = 0.0;
  CLI::App* c_approx = app.add_subcommand(
      "approx", "smooth-denominator rational approximation of a quadratic surd");
  c_approx->fallthrough();
  c_approx->add_option("--alpha", a_alpha, "sqrt:<d> or quad:<f>,<g>,<c>,<d>");
  c_approx->add_option("--d", a_d, "shorthand for --alpha sqrt:<d>");
  c_approx->add_option("--N", a_n, "denominator bound")->required();
  c_approx->add_option("--eps", a_eps, "smoothness exponent target")->required();

  std::string s_alpha;
  int64_t s_n = 0;
  CLI::App* c_sum = app.add_subcommand("sum", "evaluate S(alpha, N)");
  c_sum->fallthrough();
  c_sum->add_option("--alpha", s_alpha)->required();
  c_sum->add_option("--N", s_n)->required();

  int64_t sp_a = 0, sp_q = 0;
  CLI::App* c_spec = app.add_subcommand(
      "spectrum", "complete cubic sums S(a,h;q) for every shift h");
  c_spec->fallthrough();
  c_spec->add_option("--a", sp_a)->required();
  c_spec->add_option("--q", sp_q)->required();

  int64_t pl_q = 0, pl_n = 0;
  CLI::App* c_split = app.add_subcommand(
      "split", "three-factor decomposition of q targeting the composite bound");
  c_split->fallthrough();
  c_split->add_option("--q", pl_q)->required();
  c_split->add_option("--N", pl_n)->required();

  std::string v_suite;
  int64_t v_trials = 0, v_bound = 0;
  double v_threshold = 0.0;
  CLI::App* c_verify = app.add_subcommand("verify", "run a verification suite");
  c_verify->fallthrough();
  c_verify->add_option("--suite", v_suite, "suite name")->required();
  c_verify->add_option("--trials", v_trials, "trial count (0: suite default)");
  c_verify->add_option("--threshold", v_threshold,
                       "pass threshold override (0: suite default)");
  c_verify->add_option("--bound", v_bound, "size bound (0: suite default)");

  int64_t t_q = 0, t_n = 0, t_a = 1;
  CLI::App* c_trace = app.add_subcommand(
      "trace", "per-r inequality-chain trace of the iterated shift argument");
  c_trace->fallthrough();
  c_trace->add_option("--q", t_q)->required();
  c_trace->add_option("--N", t_n)->required();
  c_trace->add_option("--a", t_a, "numerator residue (default 1)");

  std::string sc_alpha;
  int64_t sc_min = 0, sc_max = 0;
  double sc_eps = 1.0;
  CLI::App* c_scan = app.add_subcommand(
      "scan", "sup |S(alpha, N)| over doubling N with a fitted growth exponent");
  c_scan->fallthrough();
  c_scan->add_option("--alpha", sc_alpha, "sqrt:<d> or quad:<f>,<g>,<c>,<d>")
      ->required();
  c_scan->add_option("--n-min", sc_min, "first N (power of two)")->required();
  c_scan->add_option("--n-max", sc_max, "last N (power of two)")->required();
  c_scan->add_option("--eps", sc_eps, "smoothness target for the plug-through");

  int64_t ab_d = 0, ab_nmax = 0;
  CLI::App* c_abc = app.add_subcommand(
      "abc", "powerful part of the Pell denominators for sqrt(d)");
  c_abc->fallthrough();
  c_abc->add_option("--d", ab_d)->required();
  c_abc->add_option("--n-max", ab_nmax)->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cubicsum");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    Format fmt = parse_format(format_s);
    Limits limits;
    if (max_q > 0) limits.max_spectrum_q = max_q;
    if (max_n > 0) limits.max_weyl_n = max_n;

    std::ofstream ofs;
    std::ostream* osp = &out;
    if (!out_path.empty()) {
      ofs.open(out_path, std::ios::binary);
      if (!ofs) throw invalid_input("cannot open --out path '" + out_path + "'");
      osp = &ofs;
    }
    std::ostream& os = *osp;

    if (app.got_subcommand(c_approx)) {
      if ((a_d != 0) == !a_alpha.empty())
        throw invalid_input("approx: give exactly one of --d or --alpha");
      Alpha alpha = a_d != 0 ? Alpha{QuadraticIrrational(0, 1, 1, a_d)}
                             : parse_alpha(a_alpha);
      const auto* quad = std::get_if<QuadraticIrrational>(&alpha);
      if (!quad) throw invalid_input("approx: alpha must be irrational");
      if (!(a_eps > 0)) throw invalid_input("approx: eps must be positive");
      RationalApprox approx =
          smooth_approx(*quad, parse_mpz(a_n, "approx N"), a_eps);
      write_approx(os, fmt, approx);
      return 0;
    }
    if (app.got_subcommand(c_sum)) {
      Alpha alpha = parse_alpha(s_alpha);
      SumValue v = weyl_sum(alpha, s_n, limits);
      write_sum(os, fmt, s_alpha, s_n, v);
      return 0;
    }
    if (app.got_subcommand(c_spec)) {
      auto spec = complete_cubic_spectrum(sp_a, sp_q, limits);
      write_spectrum(os, fmt, sp_a, sp_q, spec);
      return 0;
    }
    if (app.got_subcommand(c_split)) {
      if (pl_q < 1) throw invalid_input("split: q must be >= 1");
      FactorSplit split = split_q(factor(pl_q), pl_n);
      write_split(os, fmt, split);
      return 0;
    }
    if (app.got_subcommand(c_verify)) {
      SuiteOptions opts;
      opts.trials = v_trials;
      opts.seed = seed;
      opts.threshold = v_threshold;
      opts.bound = v_bound;
      opts.limits = limits;
      SuiteReport rep = run_suite(v_suite, opts);
      write_suite(os, fmt, rep);
      err << "suite " << rep.name << ": max_ratio "
          << format_double(rep.max_ratio) << " threshold "
          << format_double(rep.threshold) << " -> "
          << (rep.pass ? "pass" : "FAIL") << '\n';
      return rep.pass ? 0 : 4;
    }
    if (app.got_subcommand(c_trace)) {
      if (t_q < 1) throw invalid_input("trace: q must be >= 1");
      FactorSplit split = split_q(factor(t_q), t_n);
      TraceReport rep = iteration_trace(split, t_a, limits);
      write_trace(os, fmt, rep);
      return 0;
    }
    if (app.got_subcommand(c_scan)) {
      Alpha alpha = parse_alpha(sc_alpha);
      const auto* quad = std::get_if<QuadraticIrrational>(&alpha);
      if (!quad) throw invalid_input("scan: alpha must be irrational");
      auto recs = exponent_scan(*quad, sc_min, sc_max, sc_eps, {}, limits);
      write_scan(os, fmt, sc_alpha, recs);
      return 0;
    }
    if (app.got_subcommand(c_abc)) {
      auto rows = abc_quality(ab_d, ab_nmax, {});
      write_abc(os, fmt, ab_d, rows);
      return 0;
    }
    throw internal_error("dispatch: no subcommand selected");
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const no_approximation_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const infeasible_split_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const resource_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const factoring_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace cubicsum
