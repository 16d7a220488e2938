#include "doctest.h"

#include <cmath>

#include "cubicsum/errors.hpp"
#include "cubicsum/quad_field.hpp"

using namespace cubicsum;

TEST_CASE("pell_fundamental known solutions") {
  struct Row {
    int64_t d;
    const char* a;
    const char* b;
  };
  const Row rows[] = {
      {2, "3", "2"},       {3, "2", "1"},   {5, "9", "4"},
      {7, "8", "3"},       {13, "649", "180"},
      {61, "1766319049", "226153980"},
  };
  for (const auto& r : rows) {
    PellUnit u = pell_fundamental(r.d);
    CHECK(u.a == mpz_class(r.a));
    CHECK(u.b == mpz_class(r.b));
    CHECK(u.a * u.a - r.d * u.b * u.b == 1);
  }
  CHECK_THROWS_AS(pell_fundamental(4), invalid_input);
  CHECK_THROWS_AS(pell_fundamental(1), invalid_input);
  CHECK_THROWS_AS(pell_fundamental(0), invalid_input);
}

TEST_CASE("pell_power satisfies the Pell identity and Lucas recurrence") {
  PellUnit u = pell_fundamental(2);
  CHECK(pell_power(u, 1).p == 3);
  CHECK(pell_power(u, 1).q == 2);
  CHECK(pell_power(u, 2).p == 17);
  CHECK(pell_power(u, 2).q == 12);
  CHECK(pell_power(u, 3).p == 99);
  CHECK(pell_power(u, 3).q == 70);
  CHECK(pell_power(u, 6).p == 19601);
  CHECK(pell_power(u, 6).q == 13860);
  CHECK(pell_power(u, 0).p == 1);
  CHECK(pell_power(u, 0).q == 0);

  for (int64_t d : {2, 3, 5, 7, 13}) {
    PellUnit unit = pell_fundamental(d);
    mpz_class q_prev = 0, q_cur;
    for (uint64_t n = 1; n <= 25; ++n) {
      PellPower t = pell_power(unit, n);
      CHECK(t.p * t.p - d * t.q * t.q == 1);
      if (n >= 2) {
        // q_{n+1} = 2a q_n - q_{n-1}
        CHECK(t.q == 2 * unit.a * q_cur - q_prev);
      }
      q_prev = q_cur;
      q_cur = t.q;
    }
  }
}

TEST_CASE("lucas_ratio values and the cyclotomic product identity") {
  PellUnit u2 = pell_fundamental(2);
  CHECK(lucas_ratio(u2, 2) == 6);
  CHECK(lucas_ratio(u2, 3) == 35);
  CHECK(lucas_ratio(u2, 6) == 33);

  for (int64_t d : {2, 3, 5, 7, 13}) {
    PellUnit u = pell_fundamental(d);
    mpz_class two_a = 2 * u.a;
    for (uint64_t n = 1; n <= 30; ++n) {
      mpz_class prod = u.b;
      for (uint64_t k = 2; k <= n; ++k)
        if (n % k == 0) prod *= lucas_ratio(u, k);
      CHECK(prod == pell_power(u, n).q);
    }
    // r_k <= (2a)^phi(k) spot checks at k with phi(k) = 2.
    for (uint64_t k : {3u, 4u, 6u})
      CHECK(lucas_ratio(u, k) <= two_a * two_a);
  }
}

TEST_CASE("choose_m thresholds for d = 2") {
  PellUnit u = pell_fundamental(2);
  CHECK(choose_m(u, 2.04) == 1);
  CHECK(choose_m(u, 1.0) == 6);
  CHECK(choose_m(u, 0.5) == 210);
}

TEST_CASE("smooth_approx certified path: sqrt(2), N = 20000") {
  QuadraticIrrational alpha(0, 1, 1, 2);
  RationalApprox r = smooth_approx(alpha, 20000, 1.0);
  CHECK(r.a == 19601);
  CHECK(r.q == 13860);
  CHECK(r.smoothness_certified);
  CHECK(r.m_used == 6);
  CHECK(r.n_index == 6);
  CHECK(r.q_factors.product() == 13860);
  CHECK(r.q_factors.largest_prime() == 11);
  CHECK(r.smoothness_exponent == doctest::Approx(std::log(11.0) / std::log(13860.0))
                                      .epsilon(1e-12));
  // |sqrt2 - 19601/13860| = |(19601 - 13860 sqrt2)| / 13860 ~ 1.84e-9
  CHECK(r.err_bound > 1.8e-9);
  CHECK(r.err_bound < 1.9e-9);
  double true_err = std::abs(std::sqrt(2.0) - 19601.0 / 13860.0);
  CHECK(r.err_bound >= true_err * (1 - 1e-12));
}

TEST_CASE("smooth_approx uncertified fallback and failure") {
  QuadraticIrrational alpha(0, 1, 1, 2);
  // Tiny eps drives m to an astronomically large primorial: no multiple of m
  // fits, so the best plain convergent is returned, flagged uncertified.
  RationalApprox r = smooth_approx(alpha, 20000, 0.26);
  CHECK(r.q == 13860);
  CHECK_FALSE(r.smoothness_certified);

  RationalApprox tiny = smooth_approx(alpha, 2, 1.0);
  CHECK(tiny.a == 3);
  CHECK(tiny.q == 2);
  CHECK(std::abs(std::sqrt(2.0) - 1.5) <= tiny.err_bound);

  CHECK_THROWS_AS(smooth_approx(alpha, 1, 1.0), no_approximation_error);
}

TEST_CASE("QuadraticIrrational validation") {
  CHECK_THROWS_AS(QuadraticIrrational(0, 1, 1, 4), invalid_input);   // square d
  CHECK_THROWS_AS(QuadraticIrrational(0, 1, 1, 1), invalid_input);
  CHECK_THROWS_AS(QuadraticIrrational(0, 0, 1, 2), invalid_input);   // g = 0
  CHECK_THROWS_AS(QuadraticIrrational(0, 1, 0, 2), invalid_input);   // c < 1
  CHECK_THROWS_AS(QuadraticIrrational(0, 1, -3, 2), invalid_input);
}

TEST_CASE("quad_value evaluates (f + g sqrt d)/c") {
  CHECK(quad_value(QuadraticIrrational(0, 1, 1, 2)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(quad_value(QuadraticIrrational(1, 1, 2, 5)) ==
        doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
  CHECK(quad_value(QuadraticIrrational(-3, -2, 7, 3)) ==
        doctest::Approx((-3 - 2 * std::sqrt(3.0)) / 7).epsilon(1e-15));
}

TEST_CASE("surd_convergents: sqrt(2)") {
  auto conv = surd_convergents(QuadraticIrrational(0, 1, 1, 2), 1000);
  // CF of sqrt2 = [1; 2,2,2,...]: denominators 1,2,5,12,29,70,169,408,985
  REQUIRE(conv.size() >= 9);
  const int64_t want_p[] = {1, 3, 7, 17, 41, 99, 239, 577, 1393};
  const int64_t want_q[] = {1, 2, 5, 12, 29, 70, 169, 408, 985};
  for (size_t i = 0; i < 9; ++i) {
    CHECK(conv[i].first == want_p[i]);
    CHECK(conv[i].second == want_q[i]);
  }
  for (const auto& [p, q] : conv) CHECK(q <= 1000);
}

TEST_CASE("surd_convergents: golden ratio gives Fibonacci numbers") {
  auto conv = surd_convergents(QuadraticIrrational(1, 1, 2, 5), 100);
  REQUIRE(conv.size() >= 10);
  int64_t f_prev = 1, f_cur = 1;  // p_k/q_k = F_{k+2}/F_{k+1}, starting at 1/1
  for (const auto& [p, q] : conv) {
    CHECK(q == f_prev);
    CHECK(p == f_cur);
    int64_t next = f_cur + f_prev;
    f_prev = f_cur;
    f_cur = next;
  }
}

TEST_CASE("surd_convergents: negative irrational") {
  auto conv = surd_convergents(QuadraticIrrational(0, -1, 1, 2), 1000);
  REQUIRE(conv.size() >= 3);
  // -sqrt2 = [-2; 1, 1, 2, 2, 2, ...]: convergents -2/1, -1/1, -3/2, ...
  CHECK(conv[0].first == -2);
  CHECK(conv[0].second == 1);
  double target = -std::sqrt(2.0);
  for (const auto& [p, q] : conv) {
    double approx = p.get_d() / q.get_d();
    CHECK(std::abs(approx - target) < 1.0 / q.get_d());
  }
}

TEST_CASE("surd_convergents: every pair is a best approximation witness") {
  // |alpha - p/q| < 1/q^2 holds for continued-fraction convergents.
  QuadraticIrrational alpha(2, 3, 5, 7);  // (2 + 3 sqrt 7)/5
  double val = quad_value(alpha);
  auto conv = surd_convergents(alpha, 100000);
  REQUIRE(conv.size() >= 5);
  for (const auto& [p, q] : conv) {
    double qd = q.get_d();
    CHECK(std::abs(val - p.get_d() / qd) < 1.0 / (qd * qd) + 1e-15);
  }
  // Denominators strictly increase from the second entry on.
  for (size_t i = 2; i < conv.size(); ++i)
    CHECK(conv[i].second > conv[i - 1].second);
}
