#include "mtorus/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace mtorus {

double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: requires x > 0");
  if (x > 700.0) return 0.0;  // below double underflow once multiplied out
  if (x <= 1.5) {
    // E1(x) = -gamma - log x + sum_{n>=1} (-1)^{n+1} x^n / (n n!)
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n < 64; ++n) {
      term *= -x / n;
      double add = -term / n;
      sum += add;
      if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // Continued fraction E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
  // evaluated by the modified Lentz algorithm.
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x) * h;
}

double tanh_half(double x) { return std::tanh(0.5 * x); }

double fredholm_factor(double x) {
  if (!(x > 0.0)) throw std::domain_error("fredholm_factor: requires x > 0");
  if (x > 40.0) {
    double e = std::exp(-x);
    double d = -std::expm1(-x);  // 1 - e^{-x}
    return 2.0 * e / (d * d);
  }
  double s = std::sinh(0.5 * x);
  return 0.5 / (s * s);
}

double log1mexp(double x) {
  if (!(x > 0.0)) throw std::domain_error("log1mexp: requires x > 0");
  if (x < 0.6931471805599453) return std::log(-std::expm1(-x));
  return std::log1p(-std::exp(-x));
}

GaussLegendre::GaussLegendre(std::size_t n) {
  nodes.resize(n);
  weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

unsigned thread_budget() {
  static const unsigned budget = [] {
    const char* env = std::getenv("MTORUS_THREADS");
    if (env == nullptr) return 1u;
    long v = std::strtol(env, nullptr, 10);
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (v < 1) return 1u;
    return static_cast<unsigned>(std::min<long>(v, hw));
  }();
  return budget;
}

double integrate_exponential_tail(const std::function<double(double)>& f,
                                  double y0, double rate, double tol) {
  if (!(rate > 0.0))
    throw std::domain_error("integrate_exponential_tail: rate must be > 0");
  static const GaussLegendre gl(48);
  KahanSum total;
  double lo = y0;
  double hi = 2.0 * y0;
  for (int panel = 0; panel < 64; ++panel) {
    double mid = 0.5 * (hi + lo);
    double half = 0.5 * (hi - lo);
    KahanSum p;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      p.add(gl.weights[i] * f(mid + half * gl.nodes[i]));
    total.add(half * p.value());
    // Remaining tail is bounded by sup|f| * e^{-rate (y - hi)} integrated,
    // and |f(hi)| already carries the e^{-rate hi} factor.
    double tail_envelope = std::abs(f(hi)) / rate;
    if (tail_envelope < tol && panel >= 1) break;
    lo = hi;
    hi = 2.0 * hi;
  }
  return total.value();
}

}  // namespace mtorus
