#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace cubicsum {

struct FactorEntry {
  mpz_class prime;
  unsigned exp = 0;
};

// Prime factorization of a positive integer, entries sorted by prime.
struct Factorization {
  mpz_class n = 1;
  std::vector<FactorEntry> entries;

  mpz_class product() const;          // recomputes prod p^e
  uint64_t divisor_count() const;     // prod (e+1)
  mpz_class largest_prime() const;    // 1 for n = 1
};

struct FactorOptions {
  // Trial division bound; primes up to this are removed first.
  uint64_t trial_limit = 1'000'000;
  // Iteration budget per Brent-rho attempt on one composite cofactor.
  uint64_t rho_max_iters = 4'000'000;
  // Deterministic seed for rho's polynomial offsets.
  uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

// Factors n >= 1.  Trial division to options.trial_limit, then Brent's variant
// of Pollard rho with a Miller-Rabin (BPSW) primality gate on every cofactor.
// Throws factoring_error if a composite cofactor survives the rho budget,
// invalid_input for n < 1.
Factorization factor(const mpz_class& n, const FactorOptions& options = {});

// Merges two factorizations (multiplies the underlying integers).
Factorization merge(const Factorization& a, const Factorization& b);

bool is_probable_prime(const mpz_class& n);

// Primes <= limit (simple sieve; limit modest, used for suite/test corpora).
std::vector<uint64_t> primes_up_to(uint64_t limit);

// Euler phi of m from its factorization.
mpz_class totient(const Factorization& f);

// Moebius mu of m (0 if any square factor).
int moebius(const Factorization& f);

// gcd convenience for machine integers (nonnegative result).
uint64_t gcd_u64(uint64_t a, uint64_t b);

}  // namespace cubicsum
