#include "cubicsum/weyl_sums.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "cubicsum/errors.hpp"
#include "cubicsum/kahan.hpp"
#include "cubicsum/mpfloat.hpp"

namespace cubicsum {

namespace {

int ceil_log2(int64_t n) {
  int b = 0;
  while ((int64_t{1} << b) < n) ++b;
  return b;
}

// Phase step state for n -> a*n^3 mod q over uint64 (requires q < 2^63).
struct CubicStepper {
  uint64_t q;
  uint64_t x, d1, d2, d3;  // all reduced mod q

  CubicStepper(uint64_t a, uint64_t q_) : q(q_) {
    auto red = [&](unsigned __int128 v) { return static_cast<uint64_t>(v % q); };
    x = red(a);                                  // a * 1^3
    d1 = red(static_cast<unsigned __int128>(a) * 7);
    d2 = red(static_cast<unsigned __int128>(a) * 12);
    d3 = red(static_cast<unsigned __int128>(a) * 6);
  }

  uint64_t current() const { return x; }

  void advance() {
    x += d1;
    if (x >= q) x -= q;
    d1 += d2;
    if (d1 >= q) d1 -= q;
    d2 += d3;
    if (d2 >= q) d2 -= q;
  }
};

// e(r/q) with the symmetric representative of r, so |arg| <= pi.
cdouble unit_phase_sym(uint64_t r, uint64_t q) {
  int64_t rs = static_cast<int64_t>(r);
  if (2 * r > q) rs -= static_cast<int64_t>(q);
  double ang = 2.0 * M_PI * (static_cast<double>(rs) / static_cast<double>(q));
  return {std::cos(ang), std::sin(ang)};
}

constexpr double kTermErr = 2.5e-15;

SumValue weyl_sum_rational(const mpz_class& a_in, const mpz_class& q_in, int64_t N,
                           const Limits& limits) {
  if (q_in <= 0) throw invalid_input("weyl_sum: denominator must be positive");
  if (N < 1) throw invalid_input("weyl_sum: N must be >= 1");
  if (N > limits.max_weyl_n)
    throw resource_error("weyl_sum: N exceeds the configured limit");
  mpz_class a = a_in % q_in;
  if (a < 0) a += q_in;
  if (!q_in.fits_slong_p() || mpz_sizeinbase(q_in.get_mpz_t(), 2) > 62)
    throw resource_error("weyl_sum: denominator exceeds 2^62");
  uint64_t q = mpz_get_ui(q_in.get_mpz_t());
  uint64_t au = mpz_get_ui(a.get_mpz_t());
  CubicStepper st(au, q);
  NeumaierSum re, im;
  for (int64_t n = 1; n <= N; ++n) {
    cdouble z = unit_phase_sym(st.current(), q);
    re.add(z.real());
    im.add(z.imag());
    st.advance();
  }
  SumValue out;
  out.re = re.get();
  out.im = im.get();
  out.err = static_cast<double>(N) * kTermErr;
  return out;
}

void frac_into(mpfr_t dst, mpfr_srcptr src) {
  mpfr_frac(dst, src, MPFR_RNDN);
  if (mpfr_sgn(dst) < 0) mpfr_add_ui(dst, dst, 1, MPFR_RNDN);
}

SumValue weyl_sum_quadratic(const QuadraticIrrational& alpha, int64_t N,
                            const Limits& limits, int precision_override) {
  if (N < 1) throw invalid_input("weyl_sum: N must be >= 1");
  if (N > limits.max_weyl_n)
    throw resource_error("weyl_sum: N exceeds the configured limit");
  const mpfr_prec_t P = precision_override > 0
                            ? precision_override
                            : 3 * ceil_log2(N) + 96;
  const mpfr_prec_t W = std::max<mpfr_prec_t>(128, P > 512 ? 192 : 128);

  // Seed value alpha at extra precision, then the third-difference state:
  // x_n = alpha n^3, d1_n = alpha(3n^2+3n+1), d2_n = alpha(6n+6), d3 = 6 alpha,
  // all mod 1; at n=1 these are alpha, 7 alpha, 12 alpha, 6 alpha.
  Real seed(P + 64);
  quad_eval(alpha, seed);
  Real x(P), d1(P), d2(P), d3(P), t(P + 64);
  const unsigned mults[4] = {1, 7, 12, 6};
  mpfr_ptr regs[4] = {x.get(), d1.get(), d2.get(), d3.get()};
  for (int i = 0; i < 4; ++i) {
    mpfr_mul_ui(t.get(), seed.get(), mults[i], MPFR_RNDN);
    frac_into(t.get(), t.get());
    mpfr_set(regs[i], t.get(), MPFR_RNDN);
    frac_into(regs[i], regs[i]);  // rounding at P bits may have landed on 1.0
  }

  Real two_pi(W), theta(W), s(W), c(W);
  mpfr_const_pi(two_pi.get(), MPFR_RNDN);
  mpfr_mul_ui(two_pi.get(), two_pi.get(), 2, MPFR_RNDN);
  Real acc_re(160), acc_im(160);
  mpfr_set_zero(acc_re.get(), 1);
  mpfr_set_zero(acc_im.get(), 1);

  for (int64_t n = 1; n <= N; ++n) {
    mpfr_mul(theta.get(), x.get(), two_pi.get(), MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), theta.get(), MPFR_RNDN);
    mpfr_add(acc_re.get(), acc_re.get(), c.get(), MPFR_RNDN);
    mpfr_add(acc_im.get(), acc_im.get(), s.get(), MPFR_RNDN);
    // advance the difference ladder; each register stays in [0, 1)
    mpfr_add(x.get(), x.get(), d1.get(), MPFR_RNDN);
    if (mpfr_cmp_ui(x.get(), 1) >= 0) mpfr_sub_ui(x.get(), x.get(), 1, MPFR_RNDN);
    mpfr_add(d1.get(), d1.get(), d2.get(), MPFR_RNDN);
    if (mpfr_cmp_ui(d1.get(), 1) >= 0) mpfr_sub_ui(d1.get(), d1.get(), 1, MPFR_RNDN);
    mpfr_add(d2.get(), d2.get(), d3.get(), MPFR_RNDN);
    if (mpfr_cmp_ui(d2.get(), 1) >= 0) mpfr_sub_ui(d2.get(), d2.get(), 1, MPFR_RNDN);
  }

  SumValue out;
  out.re = mpfr_get_d(acc_re.get(), MPFR_RNDN);
  out.im = mpfr_get_d(acc_im.get(), MPFR_RNDN);
  out.err = std::ldexp(static_cast<double>(N), -63) +
            (std::fabs(out.re) + std::fabs(out.im) + 1.0) * 2.3e-16;
  return out;
}

}  // namespace

WeylContext::WeylContext(int64_t a_, int64_t q_, int64_t N_) : a(a_), q(q_), N(N_) {
  if (q < 1) throw invalid_input("WeylContext: q must be >= 1");
  if (N < 1 || N > q) throw invalid_input("WeylContext: need 1 <= N <= q");
  int64_t am = a % q;
  if (am < 0) am += q;
  a = am;
  if (std::gcd(a == 0 ? q : a, q) != 1)
    throw invalid_input("WeylContext: a and q must be coprime");
  K = q / N;
}

SumValue weyl_sum(const Alpha& alpha, int64_t N, const Limits& limits,
                  int precision_override) {
  if (const auto* rat = std::get_if<RationalAlpha>(&alpha))
    return weyl_sum_rational(rat->a, rat->q, N, limits);
  return weyl_sum_quadratic(std::get<QuadraticIrrational>(alpha), N, limits,
                            precision_override);
}

PrefixStats rational_prefix_stats(const mpz_class& a_in, const mpz_class& q_in,
                                  int64_t N) {
  if (q_in <= 0) throw invalid_input("prefix: denominator must be positive");
  if (N < 1) throw invalid_input("prefix: N must be >= 1");
  if (mpz_sizeinbase(q_in.get_mpz_t(), 2) > 62)
    throw resource_error("prefix: denominator exceeds 2^62");
  mpz_class a = a_in % q_in;
  if (a < 0) a += q_in;
  uint64_t q = mpz_get_ui(q_in.get_mpz_t());
  uint64_t au = mpz_get_ui(a.get_mpz_t());
  CubicStepper st(au, q);
  NeumaierSum re, im;
  PrefixStats stats;
  for (int64_t n = 1; n <= N; ++n) {
    cdouble z = unit_phase_sym(st.current(), q);
    re.add(z.real());
    im.add(z.imag());
    st.advance();
    double v = std::hypot(re.get(), im.get());
    if (v > stats.max_abs) stats.max_abs = v;
  }
  stats.at_N.re = re.get();
  stats.at_N.im = im.get();
  stats.at_N.err = static_cast<double>(N) * kTermErr;
  return stats;
}

double hq_decompose_check(const WeylContext& ctx, double t, SpectrumCache* cache,
                          const Limits& limits) {
  if (!(t >= 1.0) || t > static_cast<double>(ctx.q))
    throw invalid_input("decompose: need 1 <= t <= q");
  int64_t M = static_cast<int64_t>(std::floor(t));
  SumValue lhs = weyl_sum_rational(ctx.a, ctx.q, M, limits);

  SpectrumCache local(1);
  SpectrumCache& sc = cache ? *cache : local;
  auto spec = sc.get(ctx.a, ctx.q, limits);

  const int64_t q = ctx.q;
  const int64_t hhi = q / 2;
  const int64_t hlo = hhi - q + 1;
  NeumaierSum rre, rim;
  for (int64_t h = hlo; h <= hhi; ++h) {
    int64_t hm = h % q;
    if (hm < 0) hm += q;
    const SumValue& S = (*spec)[static_cast<size_t>(hm)];
    SumValue T = linear_sum_T(h, t, q);
    cdouble prod = S.value() * T.value();
    rre.add(prod.real());
    rim.add(prod.imag());
  }
  double qinv = 1.0 / static_cast<double>(q);
  double dre = lhs.re - rre.get() * qinv;
  double dim = lhs.im - rim.get() * qinv;
  return std::hypot(dre, dim);
}

double eta_r(const WeylContext& ctx, int64_t r, const std::vector<SumValue>& spectrum) {
  if (r < 1 || r > ctx.q) throw invalid_input("eta_r: need 1 <= r <= q");
  const int64_t q = ctx.q;
  const int64_t base = (r - 1) * ctx.K;
  NeumaierSum re, im;
  double best = 0.0;  // L = 0 prefix
  for (int64_t L = 1; L <= ctx.K; ++L) {
    int64_t h = (base + L) % q;
    if (h < 0) h += q;
    const SumValue& S = spectrum[static_cast<size_t>(h)];
    re.add(S.re);
    im.add(S.im);
    best = std::max(best, std::hypot(re.get(), im.get()));
  }
  return best;
}

double eta_r(const WeylContext& ctx, int64_t r, SpectrumCache* cache,
             const Limits& limits) {
  SpectrumCache local(1);
  SpectrumCache& sc = cache ? *cache : local;
  auto spec = sc.get(ctx.a, ctx.q, limits);
  return eta_r(ctx, r, *spec);
}

double eta_harmonic_sum(const WeylContext& ctx, const std::vector<SumValue>& spectrum) {
  const int64_t q = ctx.q;
  const int64_t K = ctx.K;
  NeumaierSum total;
  for (int64_t r = 1; r <= q; ++r) {
    NeumaierSum re, im;
    double best = 0.0;
    const int64_t base = (r - 1) * K;
    for (int64_t L = 1; L <= K; ++L) {
      int64_t h = (base + L) % q;
      if (h < 0) h += q;
      const SumValue& S = spectrum[static_cast<size_t>(h)];
      re.add(S.re);
      im.add(S.im);
      best = std::max(best, std::hypot(re.get(), im.get()));
    }
    total.add(best / static_cast<double>(r));
  }
  return total.get();
}

double alpha_delta_abs(const Alpha& alpha, const mpz_class& a, const mpz_class& q) {
  if (q <= 0) throw invalid_input("delta: denominator must be positive");
  if (const auto* rat = std::get_if<RationalAlpha>(&alpha)) {
    mpq_class lhs(rat->a, rat->q);
    lhs.canonicalize();
    mpq_class rhs(a, q);
    rhs.canonicalize();
    mpq_class diff = lhs - rhs;
    return std::fabs(diff.get_d());
  }
  const auto& quad = std::get<QuadraticIrrational>(alpha);
  mpfr_prec_t prec =
      std::max<mpfr_prec_t>(192, 2 * mpz_sizeinbase(q.get_mpz_t(), 2) + 96);
  Real v(prec);
  quad_eval(quad, v);
  mpq_class frac(a, q);
  frac.canonicalize();
  mpfr_sub_q(v.get(), v.get(), frac.get_mpq_t(), MPFR_RNDN);
  mpfr_abs(v.get(), v.get(), MPFR_RNDN);
  return mpfr_get_d(v.get(), MPFR_RNDU);
}

TransferResult transfer_bound_check(const Alpha& alpha, const RationalApprox& approx,
                                    int64_t N, const Limits& limits) {
  if (N < 1) throw invalid_input("transfer: N must be >= 1");
  TransferResult out;
  out.lhs = weyl_sum(alpha, N, limits).abs();
  PrefixStats stats = rational_prefix_stats(approx.a, approx.q, N);
  out.max_prefix = stats.max_abs;
  out.delta_abs = alpha_delta_abs(alpha, approx.a, approx.q);
  double n3 = static_cast<double>(N) * static_cast<double>(N) * static_cast<double>(N);
  out.amplification = 1.0 + n3 * out.delta_abs;
  out.ratio = out.lhs / (out.amplification * out.max_prefix);
  return out;
}

}  // namespace cubicsum
