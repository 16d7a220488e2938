#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cubicsum/errors.hpp"
#include "cubicsum/factor.hpp"

using namespace cubicsum;

TEST_CASE("factor: small and structured integers") {
  auto f = factor(13860);
  REQUIRE(f.entries.size() == 5);
  CHECK(f.entries[0].prime == 2);
  CHECK(f.entries[0].exp == 2);
  CHECK(f.entries[1].prime == 3);
  CHECK(f.entries[1].exp == 2);
  CHECK(f.entries[2].prime == 5);
  CHECK(f.entries[3].prime == 7);
  CHECK(f.entries[4].prime == 11);
  CHECK(f.product() == 13860);
  CHECK(f.divisor_count() == 3 * 3 * 2 * 2 * 2);
  CHECK(f.largest_prime() == 11);

  CHECK(factor(1).entries.empty());
  CHECK(factor(1).largest_prime() == 1);
  CHECK(factor(2).entries.size() == 1);

  mpz_class big("543339720");  // 2^3 * 3^2 * 5 * 7 * 11 * 17 * 1153
  auto fb = factor(big);
  CHECK(fb.product() == big);
  CHECK(fb.largest_prime() == 1153);
  CHECK(fb.entries.size() == 7);
}

TEST_CASE("factor: rejects n < 1") {
  CHECK_THROWS_AS(factor(0), invalid_input);
  CHECK_THROWS_AS(factor(-6), invalid_input);
}

TEST_CASE("factor: large semiprime within rho budget") {
  // 1000003 * 1000033 — both above the default trial-division bound.
  mpz_class n = mpz_class(1000003) * 1000033;
  auto f = factor(n);
  REQUIRE(f.entries.size() == 2);
  CHECK(f.entries[0].prime == 1000003);
  CHECK(f.entries[1].prime == 1000033);
}

TEST_CASE("factor: budget exhaustion raises factoring_error") {
  FactorOptions opts;
  opts.trial_limit = 100;
  opts.rho_max_iters = 2;
  // A 58-digit semiprime of two balanced primes cannot fall to 2 rho steps.
  mpz_class p("1000000000000000003");
  mpz_class q("1000000000000000009");
  // Both factors must also be out of reach of trial division.
  CHECK_THROWS_AS(factor(p * q, opts), factoring_error);
}

TEST_CASE("merge multiplies factorizations") {
  auto m = merge(factor(12), factor(35));
  CHECK(m.n == 420);
  CHECK(m.product() == 420);
  REQUIRE(m.entries.size() == 4);
  CHECK(m.entries[0].prime == 2);
  CHECK(m.entries[0].exp == 2);
  auto sq = merge(factor(12), factor(18));
  CHECK(sq.product() == 216);
}

TEST_CASE("primes_up_to") {
  auto ps = primes_up_to(30);
  std::vector<uint64_t> want = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  CHECK(ps == want);
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(2) == std::vector<uint64_t>{2});
}

TEST_CASE("is_probable_prime") {
  CHECK(is_probable_prime(2));
  CHECK(is_probable_prime(97));
  CHECK(is_probable_prime(mpz_class("1000000000000000003")));
  CHECK_FALSE(is_probable_prime(1));
  CHECK_FALSE(is_probable_prime(1000001));  // 101 * 9901
}

TEST_CASE("totient and moebius from factorizations") {
  CHECK(totient(factor(1)) == 1);
  CHECK(totient(factor(12)) == 4);
  CHECK(totient(factor(210)) == 48);
  CHECK(moebius(factor(1)) == 1);
  CHECK(moebius(factor(6)) == 1);
  CHECK(moebius(factor(30)) == -1);
  CHECK(moebius(factor(12)) == 0);
}

TEST_CASE("gcd_u64") {
  CHECK(gcd_u64(0, 5) == 5);
  CHECK(gcd_u64(12, 18) == 6);
  CHECK(gcd_u64(13860, 200) == 20);
}
