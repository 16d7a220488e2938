#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <variant>
#include <vector>

#include "cubicsum/exp_sums.hpp"
#include "cubicsum/quad_field.hpp"

namespace cubicsum {

// A rational phase a/q (q >= 1).
struct RationalAlpha {
  mpz_class a;
  mpz_class q;
};

using Alpha = std::variant<RationalAlpha, QuadraticIrrational>;

// Rational context for the block decomposition: gcd(a, q) = 1, 1 <= N <= q,
// K = floor(q / N).
struct WeylContext {
  int64_t a = 0;
  int64_t q = 1;
  int64_t N = 1;
  int64_t K = 1;

  WeylContext(int64_t a_, int64_t q_, int64_t N_);
};

// S(alpha, N) = sum_{n=1..N} e(alpha n^3).
//  - rational alpha: phases from exact residues, compensated double summation;
//  - quadratic alpha: alpha n^3 mod 1 tracked by exact third differences at
//    P = 3 ceil(log2 N) + 96 bits; sin/cos and accumulation in MPFR, so the
//    reported err is ~N * 2^-63 plus conversion dust.
// precision_override (quadratic path only): replaces P when nonzero.
SumValue weyl_sum(const Alpha& alpha, int64_t N, const Limits& limits = {},
                  int precision_override = 0);

// |sum_{n<=t} e(a n^3 / q)| maximized over integer t <= N, plus the value at N.
struct PrefixStats {
  double max_abs = 0.0;  // max over 1 <= t <= N
  SumValue at_N;
};
PrefixStats rational_prefix_stats(const mpz_class& a, const mpz_class& q, int64_t N);

// Residual |S(a/q, t) - q^{-1} sum_{-q/2 < h <= q/2} S(a,h;q) T(h,t;q)|.
double hq_decompose_check(const WeylContext& ctx, double t, SpectrumCache* cache = nullptr,
                          const Limits& limits = {});

// eta(r) = max_{0 <= L <= K} |sum_{(r-1)K < h <= (r-1)K + L} S(a,h;q)|,
// 1 <= r <= q.  The spectrum row must belong to (ctx.a, ctx.q).
double eta_r(const WeylContext& ctx, int64_t r, const std::vector<SumValue>& spectrum);
double eta_r(const WeylContext& ctx, int64_t r, SpectrumCache* cache = nullptr,
             const Limits& limits = {});

// sum_{r=1..q} eta(r)/r computed with one rolling prefix pass, O(qK) time.
double eta_harmonic_sum(const WeylContext& ctx, const std::vector<SumValue>& spectrum);

struct TransferResult {
  double lhs = 0.0;          // |S(alpha, N)|
  double max_prefix = 0.0;   // max_{t <= N} |S(a/q, t)|
  double delta_abs = 0.0;    // |alpha - a/q|
  double amplification = 0.0;  // 1 + N^3 |delta|
  double ratio = 0.0;        // lhs / (amplification * max_prefix)
};

// Checks the approximation-transfer inequality for an approx derived from alpha.
TransferResult transfer_bound_check(const Alpha& alpha, const RationalApprox& approx,
                                    int64_t N, const Limits& limits = {});

// |alpha - a/q| in high precision.
double alpha_delta_abs(const Alpha& alpha, const mpz_class& a, const mpz_class& q);

}  // namespace cubicsum
