#pragma once

#include <cmath>

namespace cubicsum {

// Neumaier's compensated accumulator: error stays O(eps * sum |x|) independent
// of the number of terms.
struct NeumaierSum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }

  double get() const { return s + c; }
};

}  // namespace cubicsum
