#include "cubicsum/quad_field.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "cubicsum/errors.hpp"
#include "cubicsum/mpfloat.hpp"

namespace cubicsum {

namespace {

bool is_square(int64_t d) {
  mpz_class z(d);
  return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

}  // namespace

// alpha = (f + g sqrt(d))/c into out at out's precision.
void quad_eval(const QuadraticIrrational& alpha, Real& out) {
  mpfr_prec_t prec = mpfr_get_prec(out.get());
  Real s(prec);
  mpfr_sqrt_ui(s.get(), static_cast<unsigned long>(alpha.d), MPFR_RNDN);
  mpfr_mul_z(s.get(), s.get(), alpha.g.get_mpz_t(), MPFR_RNDN);
  mpfr_add_z(s.get(), s.get(), alpha.f.get_mpz_t(), MPFR_RNDN);
  mpfr_div_z(out.get(), s.get(), alpha.c.get_mpz_t(), MPFR_RNDN);
}

QuadraticIrrational::QuadraticIrrational(mpz_class f_, mpz_class g_, mpz_class c_, int64_t d_)
    : f(std::move(f_)), g(std::move(g_)), c(std::move(c_)), d(d_) {
  if (g == 0) throw invalid_input("QuadraticIrrational: g must be nonzero");
  if (c < 1) throw invalid_input("QuadraticIrrational: c must be >= 1");
  if (d < 2 || is_square(d)) throw invalid_input("QuadraticIrrational: d must be >= 2 and not a square");
}

double quad_value(const QuadraticIrrational& alpha) {
  Real v(192);
  quad_eval(alpha, v);
  return v.to_double();
}

PellUnit pell_fundamental(int64_t d) {
  if (d < 2) throw invalid_input("pell_fundamental: d must be >= 2");
  if (is_square(d)) throw invalid_input("pell_fundamental: d must not be a perfect square");

  // Continued fraction of sqrt(d); every convergent h/k is tested against the
  // Pell form, so the first hit is the least solution.
  mpz_class D(d), a0, m = 0, den = 1, a;
  mpz_sqrt(a0.get_mpz_t(), D.get_mpz_t());
  a = a0;
  mpz_class h_prev = 1, h = a0, k_prev = 0, k = 1;
  for (int iter = 0; iter < 5'000'000; ++iter) {
    if (h * h - D * k * k == 1) return {d, h, k};
    m = den * a - m;
    den = (D - m * m) / den;
    a = (a0 + m) / den;
    mpz_class h_new = a * h + h_prev;
    mpz_class k_new = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_new;
    k = k_new;
  }
  throw resource_error("pell_fundamental: period walk exceeded its budget");
}

PellPower pell_power(const PellUnit& unit, uint64_t n) {
  // (p, q) * (p', q') = (p p' + d q q', p q' + q p')
  mpz_class rp = 1, rq = 0;           // accumulator = eta^0
  mpz_class bp = unit.a, bq = unit.b; // base = eta
  mpz_class D(unit.d);
  while (n > 0) {
    if (n & 1) {
      mpz_class np = rp * bp + D * rq * bq;
      mpz_class nq = rp * bq + rq * bp;
      rp = np;
      rq = nq;
    }
    n >>= 1;
    if (n > 0) {
      mpz_class np = bp * bp + D * bq * bq;
      mpz_class nq = 2 * bp * bq;
      bp = np;
      bq = nq;
    }
  }
  return {rp, rq};
}

mpz_class lucas_ratio(const PellUnit& unit, uint64_t k) {
  if (k < 2) throw invalid_input("lucas_ratio: k must be >= 2");
  Factorization fk = factor(mpz_class(static_cast<unsigned long>(k)));

  // Enumerate divisors of k from its factorization.
  std::vector<uint64_t> divisors{1};
  for (const auto& e : fk.entries) {
    uint64_t p = e.prime.get_ui();
    size_t base = divisors.size();
    uint64_t pe = 1;
    for (unsigned i = 1; i <= e.exp; ++i) {
      pe *= p;
      for (size_t j = 0; j < base; ++j) divisors.push_back(divisors[j] * pe);
    }
  }

  mpz_class num = 1, den = 1;
  for (uint64_t j : divisors) {
    Factorization fq = factor(mpz_class(static_cast<unsigned long>(k / j)));
    int mu = moebius(fq);
    if (mu == 0) continue;
    mpz_class qj = pell_power(unit, j).q;
    if (mu > 0)
      num *= qj;
    else
      den *= qj;
  }
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
    throw internal_error("lucas_ratio: cyclotomic quotient is not an integer");
  mpz_class r;
  mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

mpz_class choose_m(const PellUnit& unit, double eps) {
  if (!(eps > 0)) throw invalid_input("choose_m: eps must be positive");

  // threshold tau = eps * log(a + b sqrt d) / (2 log 2a), at 256 bits.
  const mpfr_prec_t prec = 256;
  Real eta(prec), t(prec), tau(prec);
  mpfr_sqrt_ui(eta.get(), static_cast<unsigned long>(unit.d), MPFR_RNDN);
  mpfr_mul_z(eta.get(), eta.get(), unit.b.get_mpz_t(), MPFR_RNDN);
  mpfr_add_z(eta.get(), eta.get(), unit.a.get_mpz_t(), MPFR_RNDN);
  mpfr_log(eta.get(), eta.get(), MPFR_RNDN);  // log eta
  mpz_class two_a = 2 * unit.a;
  mpfr_set_z(t.get(), two_a.get_mpz_t(), MPFR_RNDN);
  mpfr_log(t.get(), t.get(), MPFR_RNDN);  // log 2a
  mpfr_mul_ui(t.get(), t.get(), 2, MPFR_RNDN);
  mpfr_div(tau.get(), eta.get(), t.get(), MPFR_RNDN);
  mpfr_mul_d(tau.get(), tau.get(), eps, MPFR_RNDN);

  // Smallest m with phi(m)/m <= tau.  phi(m)/m depends only on the primes of m
  // and shrinks only when a new (smallest available) prime joins, so the minimal
  // m for each reachable ratio is a primorial.
  mpz_class m = 1;
  mpq_class ratio(1, 1);
  mpz_class p = 1;
  while (true) {
    if (mpfr_cmp_q(tau.get(), ratio.get_mpq_t()) >= 0) return m;
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (p > 1'000'000)
      throw resource_error("choose_m: threshold needs a primorial beyond the prime budget");
    m *= p;
    ratio *= mpq_class(p - 1, p);
    ratio.canonicalize();
  }
}

RationalApprox smooth_approx(const QuadraticIrrational& alpha, const mpz_class& N,
                             double eps, const FactorOptions& factor_opts) {
  if (N < 1) throw invalid_input("smooth_approx: N must be >= 1");
  PellUnit unit = pell_fundamental(alpha.d);
  mpz_class m = choose_m(unit, eps);

  // Largest n with c*q_n <= N, walking the second-order recurrence
  // q_{n+1} = 2a q_n - q_{n-1}.
  if (alpha.c * unit.b > N)
    throw no_approximation_error("smooth_approx: no convergent denominator fits N");
  mpz_class two_a = 2 * unit.a;
  mpz_class q_prev = 0, q_cur = unit.b;
  uint64_t n_max = 1;
  while (true) {
    mpz_class q_next = two_a * q_cur - q_prev;
    if (alpha.c * q_next > N) break;
    q_prev = q_cur;
    q_cur = q_next;
    ++n_max;
  }

  uint64_t n;
  bool certified;
  if (m <= static_cast<long>(n_max) && m.fits_ulong_p()) {
    uint64_t mu = m.get_ui();
    n = (n_max / mu) * mu;
    certified = true;
  } else {
    n = n_max;
    certified = false;
  }

  PellPower pw = pell_power(unit, n);
  mpz_class a1 = alpha.f * pw.q + alpha.g * pw.p;
  mpz_class q1 = alpha.c * pw.q;
  mpz_class g0;
  mpz_gcd(g0.get_mpz_t(), a1.get_mpz_t(), q1.get_mpz_t());
  RationalApprox out;
  out.a = a1 / g0;
  out.q = q1 / g0;
  out.n_index = n;
  out.m_used = m;
  out.smoothness_certified = certified;

  // err_bound = |alpha - a/q| evaluated with ~2x the bits of q, rounded up,
  // padded one ulp.
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(
      2 * mpz_sizeinbase(out.q.get_mpz_t(), 2) + 96);
  if (prec < 192) prec = 192;
  Real av(prec), rv(prec);
  quad_eval(alpha, av);
  mpfr_set_z(rv.get(), out.a.get_mpz_t(), MPFR_RNDN);
  mpfr_div_z(rv.get(), rv.get(), out.q.get_mpz_t(), MPFR_RNDN);
  mpfr_sub(rv.get(), av.get(), rv.get(), MPFR_RNDN);
  mpfr_abs(rv.get(), rv.get(), MPFR_RNDN);
  double eb = mpfr_get_d(rv.get(), MPFR_RNDU);
  out.err_bound = std::nextafter(eb, std::numeric_limits<double>::infinity());

  out.q_factors = factor(out.q, factor_opts);
  if (out.q == 1) {
    out.smoothness_exponent = 0.0;
  } else {
    Real lp(128), lq(128);
    mpfr_set_z(lp.get(), out.q_factors.largest_prime().get_mpz_t(), MPFR_RNDN);
    mpfr_log(lp.get(), lp.get(), MPFR_RNDN);
    mpfr_set_z(lq.get(), out.q.get_mpz_t(), MPFR_RNDN);
    mpfr_log(lq.get(), lq.get(), MPFR_RNDN);
    mpfr_div(lp.get(), lp.get(), lq.get(), MPFR_RNDN);
    out.smoothness_exponent = lp.to_double();
  }
  return out;
}

std::vector<std::pair<mpz_class, mpz_class>> surd_convergents(
    const QuadraticIrrational& alpha, const mpz_class& q_cap) {
  if (q_cap < 1) throw invalid_input("surd_convergents: cap must be >= 1");
  // Normalize to alpha = (P + sqrt(D)) / Q with Q | D - P^2 by scaling
  // numerator and denominator by sign(g) * c:
  //   D = g^2 c^2 d,  P = sign(g) f c,  Q = sign(g) c^2,
  // so D - P^2 = c^2 (g^2 d - f^2) is divisible by +-c^2.
  const int sg = (alpha.g > 0) ? 1 : -1;
  mpz_class D = alpha.g * alpha.g * alpha.d * alpha.c * alpha.c;
  mpz_class P = sg * alpha.f * alpha.c;
  mpz_class Q = sg * alpha.c * alpha.c;
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());

  auto floor_step = [&](const mpz_class& Pv, const mpz_class& Qv) {
    // floor((Pv + sqrt(D)) / Qv) with sqrt(D) irrational in (s, s+1)
    mpz_class num = Pv + s;
    if (Qv < 0) num += 1;
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Qv.get_mpz_t());
    return a;
  };

  std::vector<std::pair<mpz_class, mpz_class>> out;
  mpz_class p_prev = 0, q_prev = 1;  // index -2 seeds
  mpz_class p_cur = 1, q_cur = 0;    // index -1 seeds
  mpz_class a = floor_step(P, Q);
  for (int k = 0; k < 4096; ++k) {
    mpz_class p_new = a * p_cur + p_prev;
    mpz_class q_new = a * q_cur + q_prev;
    if (k > 0 && q_new > q_cap) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_new;
    q_cur = q_new;
    out.emplace_back(p_cur, q_cur);
    // surd step: alpha_{k+1} = 1 / (alpha_k - a_k)
    P = a * Q - P;
    mpz_class num = D - P * P;
    if (num % Q != 0) throw internal_error("surd_convergents: division invariant broken");
    Q = num / Q;
    if (Q == 0) throw internal_error("surd_convergents: zero denominator (square D?)");
    a = floor_step(P, Q);
  }
  return out;
}

}  // namespace cubicsum
