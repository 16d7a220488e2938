#pragma once

#include <complex>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "cubicsum/dft.hpp"

namespace cubicsum {

// A computed complex sum with a certified absolute error bound:
// |value - exact| <= err.  err stays <= (#terms) * 2^-40 for every operation
// in this module.
struct SumValue {
  double re = 0.0;
  double im = 0.0;
  double err = 0.0;

  cdouble value() const { return {re, im}; }
  double abs() const { return std::hypot(re, im); }
};

SumValue sum_mul(const SumValue& a, const SumValue& b);
SumValue sum_conj(const SumValue& a);

// Shift offsets for the iterated differenced sums: shift1 = m*q1, shift2 = u*q2
// as plain integers (may be negative).
struct ShiftSpec {
  int64_t shift1 = 0;
  int64_t shift2 = 0;
};

struct Limits {
  int64_t max_spectrum_q = int64_t(1) << 21;  // memory budget for full spectra
  int64_t max_weyl_n = int64_t(1) << 22;      // precision-ladder budget
};

// S(a, h; q) = sum_{n=1..q} e((a n^3 + h n)/q), evaluated term by term from
// exact integer residues.  q >= 1, q < 2^31.
SumValue complete_cubic_sum(int64_t a, int64_t h, int64_t q);

// The full row h -> S(a, h; q) for h = 0..q-1, via one length-q transform of
// n -> e(a n^3 / q).  Agrees with complete_cubic_sum per entry.
// Throws resource_error when q exceeds limits.max_spectrum_q.
std::vector<SumValue> complete_cubic_spectrum(int64_t a, int64_t q,
                                              const Limits& limits = {});

// T(h, t; q) = sum_{1 <= n <= t} e(-h n / q), closed geometric form.
// t is a nonnegative real; h any integer; q >= 1.
SumValue linear_sum_T(int64_t h, double t, int64_t q);

// Differenced products over a shared modulus v:
//   level 2: S2(b, n; v) = S(b, n + shift1; v) * conj S(b, n; v)
//   level 3: S3(b, n; v) = S2(b, n + shift2; v) * conj S2(b, n; v)
// Spectrum-table backed; `table` must be the spectrum of (b, v).
SumValue shifted_product(const std::vector<SumValue>& table, const ShiftSpec& spec,
                         int64_t n, int64_t v, int level);

// Convenience without a precomputed table (evaluates the needed complete sums
// directly).
SumValue shifted_product_direct(int64_t b, const ShiftSpec& spec, int64_t n,
                                int64_t v, int level);

// S4(c, t; v) = sum_{n=1..v} S3(c, n; v) e(n t / v).
SumValue s4(int64_t c, const ShiftSpec& spec, int64_t t, int64_t v,
            const Limits& limits = {});

// All t at once (index t = 0..v-1); one extra transform over n.
std::vector<SumValue> s4_spectrum(int64_t c, const ShiftSpec& spec, int64_t v,
                                  const Limits& limits = {});

// LRU cache of complete cubic spectra keyed by (a mod q, q).
class SpectrumCache {
 public:
  explicit SpectrumCache(size_t capacity = 48) : capacity_(capacity) {}

  std::shared_ptr<const std::vector<SumValue>> get(int64_t a, int64_t q,
                                                   const Limits& limits = {});
  size_t size() const;

 private:
  using Key = std::pair<int64_t, int64_t>;
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return std::hash<int64_t>()(k.first * 0x1f123bb5 ^ k.second);
    }
  };
  mutable std::mutex mu_;
  size_t capacity_;
  std::list<Key> order_;  // most recent at front
  std::unordered_map<Key, std::pair<std::shared_ptr<const std::vector<SumValue>>,
                                    std::list<Key>::iterator>,
                     KeyHash>
      map_;
};

// Exact (a*n^3 + h*n) mod q for 0 <= n < q < 2^31 (used by the direct paths
// and tests).
int64_t cubic_residue(int64_t a, int64_t h, int64_t n, int64_t q);

}  // namespace cubicsum
