// Acceptance gate: twelve numbered end-to-end checks, each printing exactly
// one [PASS]/[FAIL] line with measured values.  Exit status is 0 only when
// every executed criterion passes.
//
//   acceptance        runs all twelve criteria in order
//   acceptance <n>    runs only criterion n

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cubicsum/errors.hpp"
#include "cubicsum/exp_sums.hpp"
#include "cubicsum/factor.hpp"
#include "cubicsum/factor_plan.hpp"
#include "cubicsum/harness.hpp"
#include "cubicsum/quad_field.hpp"
#include "cubicsum/report.hpp"
#include "cubicsum/rng.hpp"
#include "cubicsum/weyl_sums.hpp"

using namespace cubicsum;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Complete-sum product formula across coprime moduli.
bool c1_product_formula(std::string& detail) {
  auto t0 = Clock::now();
  SuiteOptions o;
  o.trials = 1000;
  o.bound = 500;
  o.threshold = 1e-6;
  o.seed = 1;
  SuiteReport rep = run_suite("product-formula", o);
  double dt = seconds_since(t0);
  detail = fmt("1000 coprime pairs u,v <= 500, max residual %.3e <= 1e-6, %.1fs",
               rep.max_ratio, dt);
  return rep.pass && dt < 30.0;
}

// ---------------------------------------------------------------------------
// 2. Fourth-transform multiplicativity, exhaustive over coprime v,w <= 50.
bool c2_multiplicativity(std::string& detail) {
  auto t0 = Clock::now();
  M4Exhaustive m = m4_exhaustive_check(50, 5, 1, {});
  double dt = seconds_since(t0);
  detail = fmt("%lld coprime pairs, %lld evaluations, max residual %.3e <= 1e-6, %.1fs",
               static_cast<long long>(m.pairs),
               static_cast<long long>(m.evaluations), m.max_residual, dt);
  return m.max_residual <= 1e-6 && dt < 60.0;
}

// ---------------------------------------------------------------------------
// 3. Prime-modulus fourth-transform envelope: one global measured C <= 4 over
// every prime p <= 97 and all p^3 residue triples, with the spectrum fast
// path cross-validated against a from-scratch direct evaluation for p <= 13.
bool c3_prime_envelope(std::string& detail) {
  auto t0 = Clock::now();
  Limits lim;

  // direct validation for small primes: build S4 from raw phase sums only
  double max_direct_diff = 0.0;
  for (int64_t p : {2, 3, 5, 7, 11, 13}) {
    std::vector<std::complex<double>> S(static_cast<size_t>(p));
    for (int64_t m = 0; m < p; ++m) {
      for (int64_t u = 0; u < p; ++u) {
        for (int64_t h = 0; h < p; ++h) {
          std::complex<double> acc{0.0, 0.0};
          for (int64_t j = 1; j <= p; ++j) {
            int64_t r = (((j * j % p) * j % p) + h * j) % p;
            acc += std::polar(1.0, 2.0 * std::numbers::pi *
                                       static_cast<double>(r) /
                                       static_cast<double>(p));
          }
          S[static_cast<size_t>(h)] = acc;
        }
        std::vector<std::complex<double>> S2(static_cast<size_t>(p)),
            S3(static_cast<size_t>(p));
        for (int64_t n = 0; n < p; ++n)
          S2[n] = S[(n + m) % p] * std::conj(S[n]);
        for (int64_t n = 0; n < p; ++n)
          S3[n] = S2[(n + u) % p] * std::conj(S2[n]);
        auto lib = s4_spectrum(1, ShiftSpec{m, u}, p, lim);
        for (int64_t t = 0; t < p; ++t) {
          std::complex<double> brute{0.0, 0.0};
          for (int64_t n = 0; n < p; ++n)
            brute += S3[n] * std::polar(1.0, 2.0 * std::numbers::pi *
                                                 static_cast<double>(n * t % p) /
                                                 static_cast<double>(p));
          max_direct_diff = std::max(
              max_direct_diff, std::abs(brute - lib[static_cast<size_t>(t)].value()));
        }
      }
    }
  }
  bool direct_ok = max_direct_diff <= 1e-6 * 13.0 * 13.0;

  // full envelope sweep with per-family constants (disjoint zero patterns)
  double c_generic = 0, c_t0 = 0, c_one_shift = 0, c_both_shifts = 0;
  for (uint64_t pu : primes_up_to(97)) {
    int64_t p = static_cast<int64_t>(pu);
    double p52 = std::pow(static_cast<double>(p), 2.5);
    double p3 = p52 * std::sqrt(static_cast<double>(p));
    for (int64_t m = 0; m < p; ++m) {
      for (int64_t u = 0; u < p; ++u) {
        auto table = s4_spectrum(1, ShiftSpec{m, u}, p, lim);
        for (int64_t t = 0; t < p; ++t) {
          double lhs = table[static_cast<size_t>(t)].abs();
          if (t != 0 && m != 0 && u != 0)
            c_generic = std::max(c_generic, lhs / p52);
          else if (t == 0)
            c_t0 = std::max(c_t0, lhs / p3);
          else if (m == 0 && u == 0)
            c_both_shifts = std::max(c_both_shifts, lhs / p3);
          else
            c_one_shift = std::max(c_one_shift, lhs / p3);
        }
      }
    }
  }
  double c_global =
      std::max({c_generic, c_t0, c_one_shift, c_both_shifts});

  // the suite must agree with the sweep above
  SuiteOptions o;
  o.bound = 97;
  SuiteReport rep = run_suite("s4-prime-bound", o);
  bool consistent = std::abs(rep.max_ratio - c_global) <= 1e-9;

  double dt = seconds_since(t0);
  detail = fmt("C=%.3f <= 4 over p <= 97 (families: generic %.2f, t=0 %.2f, "
               "one shift %.2f, both shifts %.2f); direct check p <= 13 "
               "diff %.1e, %.1fs",
               c_global, c_generic, c_t0, c_one_shift, c_both_shifts,
               max_direct_diff, dt);
  return c_global <= 4.0 && rep.pass && consistent && direct_ok && dt < 600.0;
}

// ---------------------------------------------------------------------------
// 4. Linear-shift envelope |S(a,h;q)| / (q^(1/2) (q,h)^(1/4) d(q)) <= 10.
bool c4_linear_shift_envelope(std::string& detail) {
  auto t0 = Clock::now();
  SuiteOptions o;
  o.trials = 10000;
  o.bound = 10000;
  o.threshold = 10.0;
  o.seed = 1;
  SuiteReport rep = run_suite("lv-envelope", o);
  double dt = seconds_since(t0);
  detail = fmt("10000 samples q <= 1e4, max ratio %.4f <= 10, %.1fs",
               rep.max_ratio, dt);
  return rep.pass;
}

// ---------------------------------------------------------------------------
// 5. Prefix-sum decomposition identity, residual <= 1e-8 * q.
bool c5_decomposition_identity(std::string& detail) {
  auto t0 = Clock::now();
  SuiteOptions o;
  o.trials = 200;
  o.bound = 10000;
  o.threshold = 1e-8;
  o.seed = 1;
  SuiteReport rep = run_suite("decompose-identity", o);
  double dt = seconds_since(t0);
  detail = fmt("200 random (a,q,t) with q <= 1e4, max residual/q %.3e <= 1e-8, %.1fs",
               rep.max_ratio, dt);
  return rep.pass;
}

// ---------------------------------------------------------------------------
// 6. Spectrum energy (sum of |S|^2 = q^2) and pointwise spectrum-vs-direct.
bool c6_spectrum_energy(std::string& detail) {
  auto t0 = Clock::now();
  Limits lim;
  Rng rng(1);
  double max_energy_dev = 0.0;
  double max_point_dev = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int64_t q = rng.uniform(1, 4096);
    int64_t a = rng.uniform(0, q - 1);
    auto spec = complete_cubic_spectrum(a, q, lim);
    double energy = 0.0;
    for (const auto& s : spec) energy += s.abs() * s.abs();
    double q2 = static_cast<double>(q) * static_cast<double>(q);
    max_energy_dev = std::max(max_energy_dev, std::abs(energy - q2) / q2);
    double rootq = std::sqrt(static_cast<double>(q));
    for (int k = 0; k < 8; ++k) {
      int64_t h = rng.uniform(0, q - 1);
      double diff = std::abs(spec[static_cast<size_t>(h)].value() -
                             complete_cubic_sum(a, h, q).value());
      max_point_dev = std::max(max_point_dev, diff / rootq);
    }
  }
  double dt = seconds_since(t0);
  detail = fmt("100 random q <= 4096: energy dev %.3e <= 1e-4, "
               "pointwise dev %.3e <= 1e-6 (x sqrt q), %.1fs",
               max_energy_dev, max_point_dev, dt);
  return max_energy_dev <= 1e-4 && max_point_dev <= 1e-6;
}

// ---------------------------------------------------------------------------
// 7. Unit powers and cyclotomic factors: exact big-integer identities.
bool c7_unit_powers_exact(std::string& detail) {
  auto t0 = Clock::now();
  int checked = 0;
  for (int64_t d : {2, 3, 5, 7, 13}) {
    PellUnit unit = pell_fundamental(d);
    for (uint64_t n = 1; n <= 60; ++n) {
      PellPower pw = pell_power(unit, n);
      if (pw.p * pw.p - d * pw.q * pw.q != 1) {
        detail = fmt("unit-power identity failed at d=%lld n=%llu",
                     static_cast<long long>(d),
                     static_cast<unsigned long long>(n));
        return false;
      }
      mpz_class prod = unit.b;
      for (uint64_t k = 2; k <= n; ++k)
        if (n % k == 0) prod *= lucas_ratio(unit, k);
      if (prod != pw.q) {
        detail = fmt("cyclotomic product failed at d=%lld n=%llu",
                     static_cast<long long>(d),
                     static_cast<unsigned long long>(n));
        return false;
      }
      ++checked;
    }
  }
  double dt = seconds_since(t0);
  detail = fmt("%d instances (d in {2,3,5,7,13}, n <= 60) exact, %.1fs",
               checked, dt);
  return checked == 300;
}

// ---------------------------------------------------------------------------
// 8. Smooth-denominator certification for sqrt 2 at N = 20000.
bool c8_smooth_certification(std::string& detail) {
  auto t0 = Clock::now();
  QuadraticIrrational rt2{0, 1, 1, 2};
  RationalApprox approx = smooth_approx(rt2, 20000, 1.0, {});
  bool ok = approx.q == 13860 && approx.a == 19601 &&
            approx.smoothness_certified && approx.m_used == 6 &&
            approx.smoothness_exponent <= 0.26 &&
            approx.q_factors.largest_prime() == 11 &&
            approx.q_factors.entries.size() == 5;
  // factorization must be exactly 2^2 3^2 5 7 11
  const int64_t want_p[] = {2, 3, 5, 7, 11};
  const unsigned want_e[] = {2, 2, 1, 1, 1};
  for (size_t i = 0; ok && i < 5; ++i)
    ok = approx.q_factors.entries[i].prime == want_p[i] &&
         approx.q_factors.entries[i].exp == want_e[i];
  double dt = seconds_since(t0);
  detail = fmt("q=%s a=%s certified=%d index-modulus=%s exponent=%.4f <= 0.26, %.1fs",
               approx.q.get_str().c_str(), approx.a.get_str().c_str(),
               approx.smoothness_certified ? 1 : 0,
               approx.m_used.get_str().c_str(), approx.smoothness_exponent, dt);
  return ok;
}

// ---------------------------------------------------------------------------
// 9. Iterated Cauchy-Schwarz trace: nonnegative slack everywhere and a
// dominating completion kernel on the reference split.
bool c9_trace(std::string& detail) {
  auto t0 = Clock::now();
  TraceReport tr = iteration_trace(split_q(factor(2310, {}), 200), 1, {});
  bool slacks_ok = tr.cs_ok;
  for (const auto& row : tr.rows)
    if (row.cs1_slack < -1e-7 * (1.0 + std::abs(row.eta1 * row.eta2)))
      slacks_ok = false;
  for (const auto& cell : tr.cells)
    if (cell.cs2_slack < -1e-7 * (1.0 + std::abs(cell.eta4 * cell.eta5)))
      slacks_ok = false;
  bool kernel_ok = tr.max_kernel_ratio <= 1.0 + 1e-12;
  double dt = seconds_since(t0);
  detail = fmt("q=2310 N=200: min slacks %.3e / %.3e, kernel ratio %.4f <= 1, "
               "%zu+%zu+%zu rows, %.1fs",
               tr.min_cs1_slack, tr.min_cs2_slack, tr.max_kernel_ratio,
               tr.rows.size(), tr.cells.size(), tr.cells6.size(), dt);
  return slacks_ok && kernel_ok && dt < 300.0;
}

// ---------------------------------------------------------------------------
// 10. Growth-exponent scan for sqrt 2 over N = 2^10 .. 2^17.
bool c10_growth_scan(std::string& detail) {
  auto t0 = Clock::now();
  QuadraticIrrational rt2{0, 1, 1, 2};
  auto rows = exponent_scan(rt2, 1 << 10, 1 << 17, 1.0, {}, {});
  double dt = seconds_since(t0);
  if (rows.empty()) {
    detail = "scan produced no rows";
    return false;
  }
  double slope = rows.back().slope;
  detail = fmt("fitted slope %.4f <= 0.77 over 8 doublings, sup |S| = %.1f, %.1fs",
               slope, rows.back().running_sup, dt);
  return std::isfinite(slope) && slope <= 0.77 && dt < 300.0;
}

// ---------------------------------------------------------------------------
// 11. Composite-envelope corpus: measured constant and bounded spread.
bool c11_corpus(std::string& detail) {
  auto t0 = Clock::now();
  auto rows = envelope_corpus(2, {}, {});
  double dt = seconds_since(t0);
  if (rows.empty()) {
    detail = "corpus produced no feasible instances";
    return false;
  }
  std::vector<double> ratios;
  ratios.reserve(rows.size());
  for (const auto& r : rows) ratios.push_back(r.ratio);
  std::sort(ratios.begin(), ratios.end());
  double c_measured = ratios.back();
  double median = ratios[ratios.size() / 2];
  bool spread_ok = c_measured <= 10.0 * median;
  detail = fmt("%zu instances, measured C = %.4f, median ratio %.4f, "
               "spread %.2fx <= 10x, %.1fs",
               rows.size(), c_measured, median,
               median > 0 ? c_measured / median : 0.0, dt);
  return spread_ok;
}

// ---------------------------------------------------------------------------
// 12. Byte-identical reports on repeated runs with the same seed.
bool c12_determinism(std::string& detail) {
  auto t0 = Clock::now();
  struct Cfg {
    const char* name;
    int64_t trials;
    int64_t bound;
  };
  const Cfg cfgs[] = {
      {"product-formula", 40, 200},    {"lv-envelope", 200, 2000},
      {"gcd-sum", 80, 300},            {"m4", 30, 30},
      {"s4-prime-bound", 0, 13},       {"s-a0-envelope", 200, 2000},
      {"decompose-identity", 30, 500}, {"lemma1", 8, 1200},
  };
  int compared = 0;
  for (const Cfg& c : cfgs) {
    SuiteOptions o;
    o.trials = c.trials;
    o.bound = c.bound;
    o.seed = 9;
    for (Format f : {Format::json, Format::csv}) {
      std::ostringstream s1, s2;
      write_suite(s1, f, run_suite(c.name, o));
      write_suite(s2, f, run_suite(c.name, o));
      if (s1.str() != s2.str()) {
        detail = fmt("suite %s not byte-identical on rerun", c.name);
        return false;
      }
      ++compared;
    }
  }
  {
    FactorSplit sp = split_q(factor(2310, {}), 200);
    std::ostringstream s1, s2;
    write_trace(s1, Format::json, iteration_trace(sp, 1, {}));
    write_trace(s2, Format::json, iteration_trace(sp, 1, {}));
    if (s1.str() != s2.str()) {
      detail = "trace report not byte-identical on rerun";
      return false;
    }
    ++compared;
  }
  {
    QuadraticIrrational rt2{0, 1, 1, 2};
    std::ostringstream s1, s2;
    write_scan(s1, Format::json, "sqrt:2", exponent_scan(rt2, 256, 2048, 1.0, {}, {}));
    write_scan(s2, Format::json, "sqrt:2", exponent_scan(rt2, 256, 2048, 1.0, {}, {}));
    if (s1.str() != s2.str()) {
      detail = "scan report not byte-identical on rerun";
      return false;
    }
    ++compared;
  }
  double dt = seconds_since(t0);
  detail = fmt("%d report pairs byte-identical (8 suites x 2 formats + trace + scan), %.1fs",
               compared, dt);
  return true;
}

struct Criterion {
  int id;
  const char* name;
  bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "complete-sum product formula", c1_product_formula},
    {2, "fourth-transform multiplicativity (exhaustive)", c2_multiplicativity},
    {3, "prime-modulus fourth-transform envelope", c3_prime_envelope},
    {4, "linear-shift envelope", c4_linear_shift_envelope},
    {5, "prefix-sum decomposition identity", c5_decomposition_identity},
    {6, "spectrum energy and pointwise agreement", c6_spectrum_energy},
    {7, "unit powers and cyclotomic factors (exact)", c7_unit_powers_exact},
    {8, "smooth-denominator certification", c8_smooth_certification},
    {9, "iterated Cauchy-Schwarz trace", c9_trace},
    {10, "growth-exponent scan", c10_growth_scan},
    {11, "composite-envelope corpus", c11_corpus},
    {12, "byte-identical reports", c12_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 12) {
      std::fprintf(stderr, "usage: %s [1-12]\n", argv[0]);
      return 2;
    }
  }
  bool all_ok = true;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = fmt("exception: %s", e.what());
      ok = false;
    }
    std::printf("[%s] %2d. %s (%s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
