#pragma once

namespace kutato {

// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0: series
// below x = a + 1, Lentz continued fraction above.
double regularized_gamma_q(double a, double x);
// ln Q(a, x), accurate where Q itself underflows.
double log_regularized_gamma_q(double a, double x);

// P(chi^2_df >= x).
double chi_squared_survival(double x, int df);
double chi_squared_log_survival(double x, int df);

}  // namespace kutato
