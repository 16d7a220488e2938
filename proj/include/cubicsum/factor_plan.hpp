#pragma once

#include <cstdint>

#include "cubicsum/factor.hpp"

namespace cubicsum {

// A coprime factorization q = q1 * q2 * q3 prepared for the iteration trace.
// q3 is squarefree and sits near q^{10/21}, q2 near q^{5/21}, and q1 absorbs
// the powerful part q0 together with whatever primes remain.
struct FactorSplit {
  int64_t q = 1;
  int64_t N = 1;
  int64_t q0 = 1;  // powerful part of q (divides q1)
  int64_t q1 = 1;
  int64_t q2 = 1;
  int64_t q3 = 1;

  int64_t K() const { return q / N; }
  int64_t M() const { return K() / q1; }
  int64_t U() const { return K() / q2; }
};

// prod p^e over prime powers p^e || n with e >= 2.
mpz_class powerful_part(const Factorization& f);

// Greedy split of q given its factorization.  Preconditions: N >= 1 and
// N <= q <= N^{3/2} (else invalid_input).  Throws infeasible_split_error when
// the prime inventory cannot satisfy the coprimality/size constraints
// (N <= q1*q3 and N <= q2*q3 with q3 squarefree and coprime to q1*q2).
FactorSplit split_q(const Factorization& fq, int64_t N);

// C * (1 + N^3 |delta|) * (N^{1/2} q1^{1/2} + N^{1/4} q^{1/4} q2^{1/4}
//                          + N^{1/4} q^{1/4} q3^{1/8}) * q^eps.
double genthm_rhs(const FactorSplit& split, double delta_abs, double eps, double C);

}  // namespace cubicsum
