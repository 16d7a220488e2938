#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cubicsum/exp_sums.hpp"
#include "cubicsum/factor.hpp"
#include "cubicsum/factor_plan.hpp"
#include "cubicsum/quad_field.hpp"
#include "cubicsum/weyl_sums.hpp"

namespace cubicsum {

// ---------------------------------------------------------------- suites ---

struct SuiteRecord {
  int64_t trial = 0;
  std::string inputs;  // human-readable parameter list (JSON output only)
  double lhs = 0.0;    // measured quantity
  double rhs = 0.0;    // envelope / reference quantity
  double ratio = 0.0;  // score compared against the suite threshold
};

struct SuiteReport {
  std::string name;
  int64_t trials = 0;
  uint64_t seed = 0;
  double threshold = 0.0;
  double max_ratio = 0.0;
  bool pass = false;  // max_ratio <= threshold
  double runtime_seconds = 0.0;  // informational; never serialized
  std::vector<SuiteRecord> records;
};

struct SuiteOptions {
  int64_t trials = 0;    // 0: per-suite default
  uint64_t seed = 1;
  double threshold = 0;  // 0: per-suite default
  int64_t bound = 0;     // per-suite size bound (max q, max v, max prime...)
  Limits limits{};
};

// Known suites:
//   product-formula   complete-sum splitting across coprime moduli (residual)
//   lv-envelope       |S(a,h;q)| against q^(1/2) (q,h)^(1/4) d(q)
//   gcd-sum           windowed gcd-power sums against (H1+min(v,H2)) d(v)
//   m4                fourth-level transform multiplicativity (scaled residual)
//   s4-prime-bound    fourth-level transform at prime modulus vs p^(5/2) envelope
//   s-a0-envelope     |S(a,0;q)| against q^(2/3)
//   decompose-identity rational prefix sum vs its complete-sum expansion
//   lemma1            |S(a/q,N)| against (N/q) sum of block maxima over r
SuiteReport run_suite(const std::string& name, const SuiteOptions& opts = {});
const std::vector<std::string>& suite_names();

// Exhaustive multiplicativity check over all coprime pairs v,w <= vmax with
// `per_pair` random (c, shifts, t) tuples each; returns the max scaled
// residual.  Used by the acceptance gate (the m4 suite samples randomly).
struct M4Exhaustive {
  int64_t pairs = 0;
  int64_t evaluations = 0;
  double max_residual = 0.0;
};
M4Exhaustive m4_exhaustive_check(int64_t vmax, int per_pair, uint64_t seed,
                                 const Limits& limits = {});

// ----------------------------------------------------------------- trace ---

// Per-r row: block maximum eta(r) over the prefix interval I, the window
// energies eta1/eta2 of the two split factors, and the Cauchy-Schwarz slack
// eta1*eta2 - M^2 eta^2 (>= 0 up to roundoff).  eta2_expanded recomputes eta2
// through the shift expansion as an internal cross-check.
struct TraceRow {
  int64_t r = 0;
  double eta = 0.0;
  int64_t prefix_len = 0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta2_expanded = 0.0;
  double cs1_slack = 0.0;
  double env1_ratio = 0.0;  // eta1 / (q1 K d(q1)^3)
};

// Per-(r,m) cell: first-shift correlation eta3 over I(m), window energy eta4
// of the mod-q2 factor, weighted second-shift sum eta5, and the second
// Cauchy-Schwarz slack U^{-2} eta4 eta5 - |eta3|^2 (>= 0 up to roundoff).
struct TraceCell {
  int64_t r = 0;
  int64_t m = 0;
  double eta3_abs = 0.0;
  double eta4 = 0.0;
  double eta5 = 0.0;
  double eta5_expanded = 0.0;
  double cs2_slack = 0.0;
  double env4_ratio = 0.0;  // eta4 / (q2^2 K d(q2)^4)
  double tri2_slack = 0.0;  // M sum_m |eta3| - eta2 (triangle step)
};

// Per-(r,m,u) cell: second-shift correlation eta6 over I(m,u) against the
// completed-transform kernel envelope q3^{-1} sum_t min(K, q3/|t|) |S4(t)|.
struct TraceCell6 {
  int64_t r = 0;
  int64_t m = 0;
  int64_t u = 0;
  double eta6_abs = 0.0;
  double kernel_envelope = 0.0;
  double ratio = 0.0;  // eta6_abs / kernel_envelope (mathematically <= 1)
};

struct TraceReport {
  FactorSplit split;
  int64_t a = 1;
  int64_t a1 = 0;  // a (q2 q3)^2 mod q1
  int64_t b = 0;   // a q1^2 mod q2 q3
  int64_t b1 = 0;  // b q3^2 mod q2
  int64_t c = 0;   // b q2^2 mod q3
  // aggregates over every r / (r,m) / (r,m,u)
  double min_cs1_slack = 0.0;
  double min_cs2_slack = 0.0;
  double max_env1_ratio = 0.0;
  double max_env4_ratio = 0.0;
  double max_kernel_ratio = 0.0;
  double max_eta2_mismatch = 0.0;  // |eta2 - eta2_expanded| scaled
  double max_eta5_mismatch = 0.0;
  bool cs_ok = false;  // both slacks >= -tolerance everywhere
  bool details_included = false;  // rows/cells kept (small instances only)
  std::vector<TraceRow> rows;
  std::vector<TraceCell> cells;
  std::vector<TraceCell6> cells6;
};

// Full inequality-chain trace over every r <= q, |m| <= M, |u| <= U.
// Requires q <= 10^4 (resource_error beyond) and gcd(a, q) = 1.
TraceReport iteration_trace(const FactorSplit& split, int64_t a,
                            const Limits& limits = {});

// ------------------------------------------------------------------ scan ---

struct ScanRecord {
  int64_t N = 0;
  double abs_sum = 0.0;
  double running_sup = 0.0;  // max |S| over N' <= N so far
  double slope = 0.0;        // least-squares slope of log sup vs log N; NaN if <2 pts
  // plug-through extras (JSON only): approximation near N^{3/2} + split
  bool split_feasible = false;
  int64_t q = 0;
  double delta_abs = 0.0;
  double rhs = 0.0;    // composite envelope with C=1
  double ratio = 0.0;  // abs_sum / rhs when feasible
};

// |S(alpha, N)| at each power of two N in [n_min, n_max], with running sup and
// running log-log slope; at each N also attempts the smooth approximation with
// cap floor(N^{3/2}) and a feasible split, recording the envelope ratio.
std::vector<ScanRecord> exponent_scan(const QuadraticIrrational& alpha,
                                      int64_t n_min, int64_t n_max, double eps,
                                      const FactorOptions& fopts = {},
                                      const Limits& limits = {});

// ------------------------------------------------------------------- abc ---

struct AbcRow {
  int64_t n = 0;
  mpz_class v;       // Pell-Lucas denominator q_n
  mpz_class v0;      // powerful part of v
  double exponent = 0.0;  // log v0 / log v (0 when v0 = 1 or v <= 1)
  bool factored = true;   // false when factoring failed within budget
};

// Powerful-part quality of the Pell denominators for sqrt(d), n = 1..n_max.
// Factoring works piecewise through the cyclotomic decomposition of q_n.
std::vector<AbcRow> abc_quality(int64_t d, int64_t n_max,
                                const FactorOptions& fopts = {});

// --------------------------------------------------------------- plug-in ---

struct PlugRecord {
  std::string alpha;  // display form of the scanned irrational
  int64_t conv_index = 0;
  int64_t q = 0;
  int64_t N = 0;
  int64_t q1 = 0, q2 = 0, q3 = 0;
  double abs_sum = 0.0;
  double delta_abs = 0.0;
  double rhs = 0.0;    // composite envelope with C=1, eps=0
  double ratio = 0.0;  // abs_sum / rhs
};

// Deterministic corpus: for six fixed quadratic irrationals, the largest
// continued-fraction denominators q <= 2^31 whose splits are feasible at
// N = smallest power of two >= q^{2/3} (up to two instances each).
std::vector<PlugRecord> envelope_corpus(int instances_per_alpha = 2,
                                       const FactorOptions& fopts = {},
                                       const Limits& limits = {});

}  // namespace cubicsum
