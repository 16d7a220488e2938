#include "cubicsum/factor.hpp"

#include <algorithm>
#include <map>

#include "cubicsum/errors.hpp"

namespace cubicsum {

mpz_class Factorization::product() const {
  mpz_class p = 1;
  for (const auto& e : entries) {
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), e.prime.get_mpz_t(), e.exp);
    p *= pe;
  }
  return p;
}

uint64_t Factorization::divisor_count() const {
  uint64_t d = 1;
  for (const auto& e : entries) d *= e.exp + 1;
  return d;
}

mpz_class Factorization::largest_prime() const {
  return entries.empty() ? mpz_class(1) : entries.back().prime;
}

bool is_probable_prime(const mpz_class& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b != 0) {
    uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::vector<uint64_t> primes_up_to(uint64_t limit) {
  std::vector<uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> sieve(limit + 1, true);
  for (uint64_t i = 2; i <= limit; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (uint64_t j = i * i; j <= limit; j += i) sieve[j] = false;
  }
  return out;
}

namespace {

// Brent's cycle-finding variant of Pollard rho.  Returns a nontrivial factor
// of composite odd n, or 0 if the iteration budget runs out.
mpz_class rho_brent(const mpz_class& n, uint64_t max_iters, uint64_t seed) {
  gmp_randclass rand(gmp_randinit_mt);
  rand.seed(seed);
  for (int attempt = 0; attempt < 24; ++attempt) {
    mpz_class y = rand.get_z_range(n - 3) + 2;  // in [2, n-2]
    mpz_class c = rand.get_z_range(n - 1) + 1;  // in [1, n-1]
    mpz_class x, ys, q = 1, g = 1;
    uint64_t r = 1, iters = 0;
    const uint64_t batch = 128;
    while (g == 1) {
      x = y;
      for (uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
      uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        uint64_t steps = std::min(batch, r - k);
        for (uint64_t i = 0; i < steps; ++i) {
          y = (y * y + c) % n;
          mpz_class diff = x - y;
          q = (q * abs(diff)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += steps;
        iters += steps;
        if (iters > max_iters) return 0;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time to recover the factor past a gcd collapse.
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        mpz_class diff = x - ys;
        mpz_gcd(g.get_mpz_t(), mpz_class(abs(diff)).get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g != n && g != 1) return g;
    // else: retry with new (y, c)
  }
  return 0;
}

void factor_into(const mpz_class& n, const FactorOptions& opt,
                 std::map<mpz_class, unsigned>& acc) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    acc[n] += 1;
    return;
  }
  mpz_class d = rho_brent(n, opt.rho_max_iters, opt.seed);
  if (d == 0) {
    throw factoring_error("general factoring budget exhausted on cofactor with " +
                          std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) + " digits");
  }
  factor_into(d, opt, acc);
  factor_into(mpz_class(n / d), opt, acc);
}

}  // namespace

Factorization factor(const mpz_class& n, const FactorOptions& opt) {
  if (n < 1) throw invalid_input("factor: n must be >= 1");
  Factorization f;
  f.n = n;
  if (n == 1) return f;

  std::map<mpz_class, unsigned> acc;
  mpz_class rem = n;

  // Trial division: 2, 3, then a 6k+-1 wheel up to the limit.
  auto strip = [&](uint64_t p) {
    if (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
        mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
        ++e;
      }
      acc[mpz_class(p)] = e;
    }
  };
  strip(2);
  strip(3);
  for (uint64_t p = 5; p <= opt.trial_limit; p += 6) {
    if (mpz_cmp_ui(rem.get_mpz_t(), 1) == 0) break;
    // Stop once p^2 exceeds the remainder: the remainder is prime.
    mpz_class p2 = mpz_class(p) * p;
    if (p2 > rem) break;
    strip(p);
    strip(p + 2);
  }
  if (rem != 1) {
    if (is_probable_prime(rem)) {
      acc[rem] += 1;
    } else {
      factor_into(rem, opt, acc);
    }
  }

  for (const auto& [p, e] : acc) f.entries.push_back({p, e});
  return f;
}

Factorization merge(const Factorization& a, const Factorization& b) {
  std::map<mpz_class, unsigned> acc;
  for (const auto& e : a.entries) acc[e.prime] += e.exp;
  for (const auto& e : b.entries) acc[e.prime] += e.exp;
  Factorization f;
  f.n = a.n * b.n;
  for (const auto& [p, e] : acc) f.entries.push_back({p, e});
  return f;
}

mpz_class totient(const Factorization& f) {
  mpz_class t = f.n;
  for (const auto& e : f.entries) {
    t /= e.prime;
    t *= e.prime - 1;
  }
  return t;
}

int moebius(const Factorization& f) {
  for (const auto& e : f.entries)
    if (e.exp >= 2) return 0;
  return f.entries.size() % 2 == 0 ? 1 : -1;
}

}  // namespace cubicsum
