// Scalar numerics shared across the library: compensated summation, the
// exponential integral E1, overflow-safe hyperbolic quotients, and
// Gauss-Legendre panel quadrature for exponentially decaying integrands.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace mtorus {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Kahan-Neumaier compensated accumulator.  Every infinite series in this
// project is reduced through one of these in a fixed order, so repeated runs
// produce bit-identical results.
class KahanSum {
 public:
  void add(double term) {
    double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term))
      comp_ += (sum_ - t) + term;
    else
      comp_ += (term - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// E1(x) = \int_x^\infty e^{-u}/u du for x > 0.
// Series for x <= 1.5, modified Lentz continued fraction beyond.
double exp_integral_e1(double x);

// (e^x - 1)/(e^x + 1) = tanh(x/2), valid for all x >= 0 without overflow.
double tanh_half(double x);

// 2 e^x / (e^x - 1)^2 = 1/(2 sinh^2(x/2)).  The Fredholm perturbation scale;
// decays like 2 e^{-x}.  Requires x > 0.
double fredholm_factor(double x);

// log(1 - e^{-x}) for x > 0, accurate for both tiny and large x.
double log1mexp(double x);

// Nodes and weights on [-1, 1], computed once by Newton iteration on the
// Legendre recurrence.
struct GaussLegendre {
  explicit GaussLegendre(std::size_t n);
  std::vector<double> nodes;
  std::vector<double> weights;
};

// \int_{y0}^\infty f(y) dy for f decaying at least like e^{-rate*y}.
// Doubling panels with fixed-order Gauss-Legendre; stops once the analytic
// envelope of the remaining tail falls below tol.
double integrate_exponential_tail(const std::function<double(double)>& f,
                                  double y0, double rate, double tol);

// Worker count for block-parallel series evaluation: MTORUS_THREADS clamped
// to the hardware, default 1.  Reductions stay in fixed order, so the
// thread count never changes results.
unsigned thread_budget();

}  // namespace mtorus
