#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace cubicsum {

using cdouble = std::complex<double>;

// In-place transform X[k] = sum_n x[n] * exp(sign * 2*pi*i * k*n / N) for any
// length N >= 1.  Powers of two run iterative radix-2; other lengths go through
// the Bluestein chirp reduction to a power-of-two convolution.  No 1/N scaling.
// O(N log N) for every N.
void dft(std::vector<cdouble>& x, int sign);

// Out-of-place convenience.
std::vector<cdouble> dft_copy(const std::vector<cdouble>& x, int sign);

}  // namespace cubicsum
