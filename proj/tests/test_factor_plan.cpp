#include "doctest.h"

#include <gmpxx.h>

#include <cmath>

#include "cubicsum/errors.hpp"
#include "cubicsum/factor.hpp"
#include "cubicsum/factor_plan.hpp"

using namespace cubicsum;

TEST_CASE("powerful_part keeps exactly the repeated prime powers") {
  CHECK(powerful_part(factor(12, {})) == 4);      // 2^2 * 3
  CHECK(powerful_part(factor(13860, {})) == 36);  // 2^2 3^2 5 7 11
  CHECK(powerful_part(factor(30, {})) == 1);
  CHECK(powerful_part(factor(1, {})) == 1);
  CHECK(powerful_part(factor(8, {})) == 8);
  CHECK(powerful_part(factor(2 * 2 * 2 * 3 * 3 * 5, {})) == 72);
}

TEST_CASE("split_q: reference split of 2310 at N = 200") {
  FactorSplit sp = split_q(factor(2310, {}), 200);
  CHECK(sp.q == 2310);
  CHECK(sp.N == 200);
  CHECK(sp.q0 == 1);
  CHECK(sp.q1 == 6);
  CHECK(sp.q2 == 7);
  CHECK(sp.q3 == 55);
  CHECK(sp.K() == 11);
  CHECK(sp.M() == 1);
  CHECK(sp.U() == 1);
  // the parts multiply back and satisfy both size constraints
  CHECK(mpz_class(sp.q1) * sp.q2 * sp.q3 == 2310);
  CHECK(sp.q1 * sp.q3 >= sp.N);
  CHECK(sp.q2 * sp.q3 >= sp.N);
}

TEST_CASE("split_q: trivial and boundary instances") {
  FactorSplit unit = split_q(factor(1, {}), 1);
  CHECK(unit.q1 == 1);
  CHECK(unit.q2 == 1);
  CHECK(unit.q3 == 1);
  CHECK(unit.q0 == 1);

  // determinism: identical calls give identical parts
  FactorSplit a = split_q(factor(30030, {}), 1000);
  FactorSplit b = split_q(factor(30030, {}), 1000);
  CHECK(a.q1 == b.q1);
  CHECK(a.q2 == b.q2);
  CHECK(a.q3 == b.q3);
  CHECK(mpz_class(a.q1) * a.q2 * a.q3 == 30030);
}

TEST_CASE("split_q rejects out-of-range N") {
  CHECK_THROWS_AS(split_q(factor(2310, {}), 0), invalid_input);
  CHECK_THROWS_AS(split_q(factor(5, {}), 6), invalid_input);  // q < N
  // q^2 > N^3
  CHECK_THROWS_AS(split_q(factor(13860, {}), 100), invalid_input);
}

TEST_CASE("split_q reports infeasible prime inventories") {
  // prime q: everything lands in one part, nothing left for the others
  CHECK_THROWS_AS(split_q(factor(1009, {}), 101), infeasible_split_error);
  // powerful-only q: no squarefree primes at all
  CHECK_THROWS_AS(split_q(factor(4, {}), 3), infeasible_split_error);
  // 13860 = 36 * 5 * 7 * 11: all three singles go to q3, none left for q2
  CHECK_THROWS_AS(split_q(factor(13860, {}), 600), infeasible_split_error);
  // 2310 at N = 400: parts exist but q2*q3 = 385 < N fails the size check
  CHECK_THROWS_AS(split_q(factor(2310, {}), 400), infeasible_split_error);
}

TEST_CASE("genthm_rhs: closed form at pinned points") {
  FactorSplit ones;
  CHECK(genthm_rhs(ones, 0.0, 0.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));

  FactorSplit sp = split_q(factor(2310, {}), 200);
  double rhs = genthm_rhs(sp, 0.0, 0.0, 1.0);
  CHECK(rhs == doctest::Approx(120.07127666076558).epsilon(1e-13));
  // the three addends: sqrt(N q1), (N q q2)^(1/4), N^(1/4) q^(1/4) q3^(1/8)
  double a1 = std::sqrt(200.0 * 6.0);
  double a2 = std::pow(200.0 * 2310.0 * 7.0, 0.25);
  double a3 = std::pow(200.0, 0.25) * std::pow(2310.0, 0.25) * std::pow(55.0, 0.125);
  CHECK(a1 == doctest::Approx(34.641016151377542).epsilon(1e-13));
  CHECK(a2 == doctest::Approx(42.40675136122924).epsilon(1e-13));
  CHECK(a3 == doctest::Approx(43.023509148158794).epsilon(1e-13));
  CHECK(rhs == doctest::Approx(a1 + a2 + a3).epsilon(1e-13));

  // scaling in C, the amplification factor, and q^eps
  CHECK(genthm_rhs(sp, 1e-9, 0.1, 2.0) ==
        doctest::Approx(525.15905004851322).epsilon(1e-12));
  double amp = 1.0 + 200.0 * 200.0 * 200.0 * 1e-9;
  CHECK(genthm_rhs(sp, 1e-9, 0.0, 1.0) == doctest::Approx(amp * rhs).epsilon(1e-13));
  CHECK(genthm_rhs(sp, 0.0, 0.0, 5.0) == doctest::Approx(5.0 * rhs).epsilon(1e-13));
  CHECK(genthm_rhs(sp, 0.0, 0.1, 1.0) ==
        doctest::Approx(rhs * std::pow(2310.0, 0.1)).epsilon(1e-13));
}
