#include "kutato/chi_squared.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kutato {
namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Lower regularized P(a, x) by its power series; converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// ln Q(a, x) by modified Lentz evaluation of the continued fraction.
double log_gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

void check_domain(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw std::domain_error("incomplete gamma: need a > 0 and x >= 0");
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  check_domain(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return std::exp(log_gamma_q_fraction(a, x));
}

double log_regularized_gamma_q(double a, double x) {
  check_domain(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) return std::log1p(-gamma_p_series(a, x));
  return log_gamma_q_fraction(a, x);
}

double chi_squared_survival(double x, int df) {
  if (df < 1) throw std::domain_error("chi-squared: df must be positive");
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double chi_squared_log_survival(double x, int df) {
  if (df < 1) throw std::domain_error("chi-squared: df must be positive");
  return log_regularized_gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace kutato
