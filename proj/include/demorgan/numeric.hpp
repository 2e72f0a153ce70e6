#pragma once

// Compensated arithmetic shared by the scalar paths and the SIMD kernels.
// Every routine here fixes its operation order: the AVX2 kernels reproduce
// it lane by lane and are tested for bitwise agreement.

#include <cmath>

namespace demorgan::numeric {

/// Knuth's error-free transformation: a + b == s + err exactly.
inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

/// Neumaier's variant of Kahan summation.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  NeumaierSum() = default;
  explicit NeumaierSum(double init) : sum(init) {}

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  double value() const { return hi + lo; }

  DoubleDouble& operator+=(double x) {
    double s, e;
    two_sum(hi, x, s, e);
    e += lo;
    hi = s + e;
    lo = e - (hi - s);
    return *this;
  }
  DoubleDouble& operator-=(double x) { return *this += -x; }
};

/// (a - b) for two double-double values, rounded once to double.
inline double difference(const DoubleDouble& a, const DoubleDouble& b) {
  return (a.hi - b.hi) + (a.lo - b.lo);
}

/// s = (m1 - (baseline - 1)) * denom at one index, given the iterated logs
/// ln_(1..K) n. m1 is the measurement minus one.
inline double level_coefficient(double m1, double n, const double* logs, int K) {
  const double inv_n = 1.0 / n;
  NeumaierSum acc(m1);
  acc.add(-inv_n);
  double p = 1.0;
  for (int i = 1; i < K; ++i) {
    p = p * logs[i - 1];
    acc.add(-(inv_n / p));
  }
  p = p * logs[K - 1];
  const double d = n * p;
  return acc.value() * d;
}

}  // namespace demorgan::numeric
