#include "cubicsum/exp_sums.hpp"

#include <cmath>
#include <numbers>

#include "cubicsum/errors.hpp"
#include "cubicsum/kahan.hpp"

namespace cubicsum {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

// Per-term value error of e(r/q) built from an exact residue: the symmetric
// residue keeps |r'/q| <= 1/2, so the phase reaches the trig call with < 2^-50
// absolute error; sin/cos add ~1 ulp each.
constexpr double kTermErr = 2.5e-15;

// e(r/q) from an exact residue r in [0, q).
inline cdouble unit_phase(int64_t r, int64_t q) {
  if (2 * r > q) r -= q;  // symmetric residue: |r| <= q/2 keeps the angle tight
  double ang = kTau * (static_cast<double>(r) / static_cast<double>(q));
  return {std::cos(ang), std::sin(ang)};
}

inline int64_t mod_norm(int64_t x, int64_t q) {
  int64_t r = x % q;
  return r < 0 ? r + q : r;
}

}  // namespace

int64_t cubic_residue(int64_t a, int64_t h, int64_t n, int64_t q) {
  // q < 2^31 so every intermediate below stays within __int128.
  int64_t nn = mod_norm(n, q);
  int64_t aa = mod_norm(a, q);
  int64_t hh = mod_norm(h, q);
  __int128 n2 = static_cast<__int128>(nn) * nn % q;
  __int128 n3 = n2 * nn % q;
  __int128 r = (static_cast<__int128>(aa) * n3 + static_cast<__int128>(hh) * nn) % q;
  return static_cast<int64_t>(r);
}

SumValue sum_mul(const SumValue& a, const SumValue& b) {
  cdouble z = a.value() * b.value();
  double ma = a.abs(), mb = b.abs();
  SumValue out;
  out.re = z.real();
  out.im = z.imag();
  out.err = ma * b.err + mb * a.err + a.err * b.err + std::abs(z) * 4e-16;
  return out;
}

SumValue sum_conj(const SumValue& a) { return {a.re, -a.im, a.err}; }

SumValue complete_cubic_sum(int64_t a, int64_t h, int64_t q) {
  if (q < 1 || q >= (int64_t(1) << 31)) throw invalid_input("complete_cubic_sum: q out of range");
  NeumaierSum re, im;
  for (int64_t n = 0; n < q; ++n) {
    cdouble t = unit_phase(cubic_residue(a, h, n, q), q);
    re.add(t.real());
    im.add(t.imag());
  }
  return {re.get(), im.get(), static_cast<double>(q) * kTermErr};
}

std::vector<SumValue> complete_cubic_spectrum(int64_t a, int64_t q, const Limits& limits) {
  if (q < 1 || q >= (int64_t(1) << 31)) throw invalid_input("complete_cubic_spectrum: q out of range");
  if (q > limits.max_spectrum_q)
    throw resource_error("spectrum size " + std::to_string(q) + " exceeds budget " +
                         std::to_string(limits.max_spectrum_q));
  std::vector<cdouble> x(static_cast<size_t>(q));
  for (int64_t n = 0; n < q; ++n) x[static_cast<size_t>(n)] = unit_phase(cubic_residue(a, 0, n, q), q);
  dft(x, +1);  // S(a, h; q) = sum_n e(a n^3/q) e(+h n/q)
  double lg = std::log2(static_cast<double>(q) + 1.0);
  double err = static_cast<double>(q) * (kTermErr + 2.5e-16 * (lg + 6.0));
  std::vector<SumValue> out(static_cast<size_t>(q));
  for (int64_t h = 0; h < q; ++h)
    out[static_cast<size_t>(h)] = {x[static_cast<size_t>(h)].real(), x[static_cast<size_t>(h)].imag(), err};
  return out;
}

SumValue linear_sum_T(int64_t h, double t, int64_t q) {
  if (q < 1) throw invalid_input("linear_sum_T: q must be positive");
  if (!(t >= 0)) throw invalid_input("linear_sum_T: t must be nonnegative");
  int64_t M = static_cast<int64_t>(std::floor(t));
  if (M <= 0) return {0.0, 0.0, 0.0};
  int64_t hm = mod_norm(h, q);
  if (hm == 0) return {static_cast<double>(M), 0.0, 0.0};

  // sum_{n=1..M} e(-h n/q) = e(-h(M+1)/(2q)) * sin(pi h M / q) / sin(pi h / q),
  // with all angle reductions done on exact integers mod 2q.
  int64_t two_q = 2 * q;
  int64_t rM = static_cast<int64_t>(static_cast<__int128>(hm) * mod_norm(M, two_q) % two_q);
  int64_t rP = static_cast<int64_t>(static_cast<__int128>(hm) * mod_norm(M + 1, two_q) % two_q);
  double num = std::sin(std::numbers::pi * (static_cast<double>(rM) / static_cast<double>(q)));
  double den = std::sin(std::numbers::pi * (static_cast<double>(hm) / static_cast<double>(q)));
  double mag = num / den;
  double ang = -std::numbers::pi * (static_cast<double>(rP) / static_cast<double>(q));
  SumValue out;
  out.re = mag * std::cos(ang);
  out.im = mag * std::sin(ang);
  // Relative error of the quotient is a few ulp; near-integer h/q keeps den
  // away from 0 since hm in (0, q).  |mag| <= min(M, 1/den).
  out.err = (std::abs(mag) + 1.0) * 5e-15;
  return out;
}

SumValue shifted_product(const std::vector<SumValue>& table, const ShiftSpec& spec,
                         int64_t n, int64_t v, int level) {
  if (v < 1 || static_cast<size_t>(v) != table.size())
    throw invalid_input("shifted_product: table/modulus mismatch");
  if (level != 2 && level != 3) throw invalid_input("shifted_product: level must be 2 or 3");
  auto at = [&](int64_t idx) { return table[static_cast<size_t>(mod_norm(idx, v))]; };
  SumValue s2 = sum_mul(at(n + spec.shift1), sum_conj(at(n)));
  if (level == 2) return s2;
  SumValue s2_shift = sum_mul(at(n + spec.shift2 + spec.shift1), sum_conj(at(n + spec.shift2)));
  return sum_mul(s2_shift, sum_conj(s2));
}

SumValue shifted_product_direct(int64_t b, const ShiftSpec& spec, int64_t n, int64_t v,
                                int level) {
  if (level != 2 && level != 3) throw invalid_input("shifted_product_direct: level must be 2 or 3");
  auto S = [&](int64_t idx) { return complete_cubic_sum(b, mod_norm(idx, v), v); };
  SumValue s2 = sum_mul(S(n + spec.shift1), sum_conj(S(n)));
  if (level == 2) return s2;
  SumValue s2_shift = sum_mul(S(n + spec.shift2 + spec.shift1), sum_conj(S(n + spec.shift2)));
  return sum_mul(s2_shift, sum_conj(s2));
}

SumValue s4(int64_t c, const ShiftSpec& spec, int64_t t, int64_t v, const Limits& limits) {
  auto table = complete_cubic_spectrum(c, v, limits);
  NeumaierSum re, im;
  double err = 0.0;
  for (int64_t n = 0; n < v; ++n) {
    SumValue s3 = shifted_product(table, spec, n, v, 3);
    cdouble w = unit_phase(mod_norm(static_cast<int64_t>(
                               static_cast<__int128>(mod_norm(t, v)) * n % v), v), v);
    cdouble z = s3.value() * w;
    re.add(z.real());
    im.add(z.imag());
    err += s3.err + std::abs(z) * 8e-16;
  }
  return {re.get(), im.get(), err};
}

std::vector<SumValue> s4_spectrum(int64_t c, const ShiftSpec& spec, int64_t v,
                                  const Limits& limits) {
  auto table = complete_cubic_spectrum(c, v, limits);
  std::vector<cdouble> z(static_cast<size_t>(v));
  double zerr = 0.0, znorm = 0.0;
  for (int64_t n = 0; n < v; ++n) {
    SumValue s3 = shifted_product(table, spec, n, v, 3);
    z[static_cast<size_t>(n)] = s3.value();
    zerr += s3.err;
    znorm += s3.abs();
  }
  dft(z, +1);
  double lg = std::log2(static_cast<double>(v) + 1.0);
  double err = zerr + znorm * 2.5e-16 * (lg + 6.0);
  std::vector<SumValue> out(static_cast<size_t>(v));
  for (int64_t t = 0; t < v; ++t)
    out[static_cast<size_t>(t)] = {z[static_cast<size_t>(t)].real(), z[static_cast<size_t>(t)].imag(), err};
  return out;
}

std::shared_ptr<const std::vector<SumValue>> SpectrumCache::get(int64_t a, int64_t q,
                                                                const Limits& limits) {
  Key key{((a % q) + q) % q, q};
  std::lock_guard<std::mutex> lock(mu_);
  auto it = map_.find(key);
  if (it != map_.end()) {
    order_.splice(order_.begin(), order_, it->second.second);
    return it->second.first;
  }
  auto spec = std::make_shared<const std::vector<SumValue>>(
      complete_cubic_spectrum(key.first, q, limits));
  order_.push_front(key);
  map_[key] = {spec, order_.begin()};
  while (map_.size() > capacity_) {
    map_.erase(order_.back());
    order_.pop_back();
  }
  return spec;
}

size_t SpectrumCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

}  // namespace cubicsum
