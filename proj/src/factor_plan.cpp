#include "cubicsum/factor_plan.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cubicsum/errors.hpp"
#include "cubicsum/mpfloat.hpp"

namespace cubicsum {

namespace {

// q^(num/den) as a 128-bit MPFR value, for exact-side comparisons against
// integer candidates.
void pow_fraction(mpfr_t out, const mpz_class& q, unsigned num, unsigned den) {
  Real lg(128);
  mpfr_set_z(out, q.get_mpz_t(), MPFR_RNDN);
  mpfr_log(lg.get(), out, MPFR_RNDN);
  mpfr_mul_ui(lg.get(), lg.get(), num, MPFR_RNDN);
  mpfr_div_ui(lg.get(), lg.get(), den, MPFR_RNDN);
  mpfr_exp(out, lg.get(), MPFR_RNDN);
}

// Multiplies primes from `pool` (sorted ascending) into a part until it
// reaches `target`.  While no single remaining prime can finish the job the
// largest is taken; once some prime would cross the line, the smallest such
// prime is used, keeping the overshoot minimal.  Chosen primes are removed.
mpz_class greedy_reach(mpfr_srcptr target, std::vector<mpz_class>& pool) {
  mpz_class part = 1;
  Real cand(128);
  auto reaches = [&](const mpz_class& with) {
    mpfr_set_z(cand.get(), with.get_mpz_t(), MPFR_RNDN);
    return mpfr_cmp(cand.get(), target) >= 0;
  };
  while (!reaches(part)) {
    if (pool.empty())
      throw infeasible_split_error("split: ran out of primes before reaching target");
    size_t pick = pool.size() - 1;  // largest by default
    for (size_t i = 0; i < pool.size(); ++i) {
      if (reaches(part * pool[i])) {  // ascending order: first hit is smallest
        pick = i;
        break;
      }
    }
    part *= pool[pick];
    pool.erase(pool.begin() + static_cast<ptrdiff_t>(pick));
  }
  return part;
}

int64_t to_i64(const mpz_class& v, const char* what) {
  if (!v.fits_slong_p())
    throw resource_error(std::string("split: ") + what + " does not fit in 64 bits");
  return static_cast<int64_t>(v.get_si());
}

}  // namespace

mpz_class powerful_part(const Factorization& f) {
  mpz_class out = 1;
  for (const auto& e : f.entries) {
    if (e.exp >= 2) {
      mpz_class pe;
      mpz_pow_ui(pe.get_mpz_t(), e.prime.get_mpz_t(), e.exp);
      out *= pe;
    }
  }
  return out;
}

FactorSplit split_q(const Factorization& fq, int64_t N) {
  if (N < 1) throw invalid_input("split: N must be >= 1");
  const mpz_class& q = fq.n;
  if (q < N) throw invalid_input("split: need N <= q");
  // q <= N^{3/2}  <=>  q^2 <= N^3
  mpz_class q2 = q * q;
  mpz_class n3 = mpz_class(N) * N * N;
  if (q2 > n3) throw invalid_input("split: need q <= N^(3/2)");

  mpz_class q0 = powerful_part(fq);
  std::vector<mpz_class> singles;
  for (const auto& e : fq.entries)
    if (e.exp == 1) singles.push_back(e.prime);
  std::sort(singles.begin(), singles.end());

  Real t3(128), t2(128);
  pow_fraction(t3.get(), q, 10, 21);
  pow_fraction(t2.get(), q, 5, 21);

  mpz_class part3 = greedy_reach(t3.get(), singles);
  mpz_class part2 = greedy_reach(t2.get(), singles);
  mpz_class part1 = q0;
  for (const auto& p : singles) part1 *= p;

  FactorSplit s;
  s.q = to_i64(q, "q");
  s.N = N;
  s.q0 = to_i64(q0, "q0");
  s.q1 = to_i64(part1, "q1");
  s.q2 = to_i64(part2, "q2");
  s.q3 = to_i64(part3, "q3");

  if (part1 * part2 * part3 != q)
    throw internal_error("split: parts do not multiply back to q");
  if (mpz_class(s.q1) * s.q3 < N || mpz_class(s.q2) * s.q3 < N)
    throw infeasible_split_error("split: size constraints N <= q1*q3, N <= q2*q3 failed");
  return s;
}

double genthm_rhs(const FactorSplit& split, double delta_abs, double eps, double C) {
  double N = static_cast<double>(split.N);
  double q = static_cast<double>(split.q);
  double amplification = 1.0 + N * N * N * delta_abs;
  double term1 = std::sqrt(N) * std::sqrt(static_cast<double>(split.q1));
  double n4 = std::pow(N, 0.25);
  double q4 = std::pow(q, 0.25);
  double term2 = n4 * q4 * std::pow(static_cast<double>(split.q2), 0.25);
  double term3 = n4 * q4 * std::pow(static_cast<double>(split.q3), 0.125);
  return C * amplification * (term1 + term2 + term3) * std::pow(q, eps);
}

}  // namespace cubicsum
