#include "cubicsum/dft.hpp"

#include <cmath>
#include <numbers>

namespace cubicsum {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, n a power of two.
void fft_pow2(std::vector<cdouble>& a, int sign) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * kTau / static_cast<double>(len);
    const cdouble wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        cdouble u = a[i + j];
        cdouble v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein: length-n transform as a cyclic convolution of length m = 2^k >= 2n-1.
// Chirp phases use exact integer residues j^2 mod 2n to keep the angle reduction
// lossless for large n.
void fft_bluestein(std::vector<cdouble>& a, int sign) {
  const size_t n = a.size();
  const uint64_t two_n = 2 * static_cast<uint64_t>(n);
  size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  std::vector<cdouble> chirp(n);
  uint64_t sq = 0;  // j^2 mod 2n, updated incrementally: (j+1)^2 = j^2 + 2j + 1
  for (size_t j = 0; j < n; ++j) {
    double ang = sign * kTau * static_cast<double>(sq) / static_cast<double>(two_n);
    chirp[j] = cdouble(std::cos(ang), std::sin(ang));
    sq = (sq + 2 * j + 1) % two_n;
  }

  std::vector<cdouble> f(m, cdouble(0, 0)), g(m, cdouble(0, 0));
  for (size_t j = 0; j < n; ++j) f[j] = a[j] * chirp[j];
  g[0] = std::conj(chirp[0]);
  for (size_t j = 1; j < n; ++j) g[j] = g[m - j] = std::conj(chirp[j]);

  fft_pow2(f, -1);
  fft_pow2(g, -1);
  for (size_t j = 0; j < m; ++j) f[j] *= g[j];
  fft_pow2(f, +1);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (size_t k = 0; k < n; ++k) a[k] = f[k] * inv_m * chirp[k];
}

}  // namespace

void dft(std::vector<cdouble>& x, int sign) {
  const size_t n = x.size();
  if (n <= 1) return;
  if (n <= 4) {  // tiny sizes: direct
    std::vector<cdouble> out(n);
    for (size_t k = 0; k < n; ++k) {
      cdouble acc(0, 0);
      for (size_t j = 0; j < n; ++j) {
        double ang = sign * kTau * static_cast<double>(k * j % n) / static_cast<double>(n);
        acc += x[j] * cdouble(std::cos(ang), std::sin(ang));
      }
      out[k] = acc;
    }
    x = std::move(out);
    return;
  }
  if (is_pow2(n)) {
    fft_pow2(x, sign);
  } else {
    fft_bluestein(x, sign);
  }
}

std::vector<cdouble> dft_copy(const std::vector<cdouble>& x, int sign) {
  std::vector<cdouble> y = x;
  dft(y, sign);
  return y;
}

}  // namespace cubicsum
