#pragma once

namespace gazekit {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

double chi2_cdf(double x, double dof);
double chi2_sf(double x, double dof);

/// Upper-tail inverse of the chi-square CDF: the x with P[X > x] = alpha.
double chi_square_critical(int dof, double alpha);

/// Two-sided p-value of a Student-t statistic with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

} // namespace gazekit
