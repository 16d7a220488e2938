#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "cubicsum/factor.hpp"
#include "cubicsum/mpfloat.hpp"

namespace cubicsum {

// alpha = (f + g*sqrt(d)) / c with g != 0, c >= 1, d >= 2 not a perfect square.
// Constructor validates.
struct QuadraticIrrational {
  mpz_class f;
  mpz_class g;
  mpz_class c;
  int64_t d;

  QuadraticIrrational(mpz_class f_, mpz_class g_, mpz_class c_, int64_t d_);
};

// Fundamental solution of a^2 - d b^2 = 1 (least positive b).
struct PellUnit {
  int64_t d = 0;
  mpz_class a;
  mpz_class b;
};

// (p_n, q_n) with p_n + q_n sqrt(d) = (a + b sqrt(d))^n.
struct PellPower {
  mpz_class p;
  mpz_class q;
};

struct RationalApprox {
  mpz_class a;
  mpz_class q;
  double err_bound = 0.0;  // certified: |alpha - a/q| <= err_bound
  Factorization q_factors;
  double smoothness_exponent = 0.0;  // log(max prime of q) / log q, 0 for q = 1
  bool smoothness_certified = false; // true when the index used was a multiple of m
  uint64_t n_index = 0;              // convergent index n actually used
  mpz_class m_used;                  // the index modulus from choose_m
};

// Continued-fraction solution of the unit Pell equation.  Throws invalid_input
// for d < 2 or d a perfect square.
PellUnit pell_fundamental(int64_t d);

// Exact n-th power of the unit by binary exponentiation; n >= 0 ((1,0) for n=0).
PellPower pell_power(const PellUnit& unit, uint64_t n);

// The k-th cyclotomic factor r_k of the denominator sequence:
// r_k = prod_{j | k} q_j^{mu(k/j)}, a positive integer for k >= 2, satisfying
// q_n = b * prod_{k | n, k >= 2} r_k and r_k <= (2a)^phi(k).
// Throws invalid_input for k < 2, internal_error if the product fails to divide.
mpz_class lucas_ratio(const PellUnit& unit, uint64_t k);

// Smallest m with phi(m)/m <= eps * log(eta) / (2 log 2a), eta = a + b sqrt(d).
// Minimizers are primorials, so the walk multiplies successive primes; the exact
// rational phi(m)/m is compared against the threshold at 256-bit precision.
// Throws invalid_input for eps <= 0, resource_error when the walk passes 10^6.
mpz_class choose_m(const PellUnit& unit, double eps);

// Denominator-smooth rational approximation: picks the largest convergent index
// n <= n_max with n a multiple of m (certified), else falls back to n = n_max
// uncertified; reduces (f v + g u)/(c v) and certifies the error bound by direct
// high-precision evaluation padded one ulp.  Throws no_approximation_error when
// even n = 1 overshoots N.
RationalApprox smooth_approx(const QuadraticIrrational& alpha, const mpz_class& N,
                             double eps, const FactorOptions& factor_opts = {});

// alpha evaluated into `out` at out's precision.
void quad_eval(const QuadraticIrrational& alpha, Real& out);

// alpha as a double (via a 192-bit evaluation).
double quad_value(const QuadraticIrrational& alpha);

// Exact continued-fraction convergents (p_k, q_k) of alpha, in order, stopping
// once q_k would exceed q_cap.  Pure integer surd arithmetic, no rounding.
std::vector<std::pair<mpz_class, mpz_class>> surd_convergents(
    const QuadraticIrrational& alpha, const mpz_class& q_cap);

}  // namespace cubicsum
