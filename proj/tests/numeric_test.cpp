#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "gazekit/numeric.hpp"

using namespace gazekit;

namespace {

// Simpson integration of the chi-square density, used as an independent
// check on the incomplete-gamma kernel. Substituting t = u^2 removes the
// dof = 1 integrable singularity at the origin.
double chi2_cdf_quadrature(double x, double dof) {
    if (x <= 0.0) return 0.0;
    // after substitution the integrand is 2 u^(dof-1) e^(-u^2/2) / (2^(dof/2) Gamma(dof/2))
    auto integrand = [dof](double u) {
        double k2 = dof / 2.0;
        double norm = std::exp(-k2 * std::log(2.0) - std::lgamma(k2));
        if (u <= 0.0) return dof == 1.0 ? 2.0 * norm : 0.0;
        return 2.0 * std::exp((dof - 1.0) * std::log(u) - u * u / 2.0) * norm;
    };
    const int n = 20000;
    double b = std::sqrt(x);
    double h = b / n, sum = integrand(0.0) + integrand(b);
    for (int i = 1; i < n; ++i) sum += integrand(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

} // namespace

TEST_CASE("regularized gamma basics") {
    CHECK(regularized_gamma_p(1.0, 0.0) == 0.0);
    // P(1, x) = 1 - exp(-x)
    CHECK(regularized_gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
    CHECK(regularized_gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    // complementarity across the series/continued-fraction switch
    for (double a : {0.5, 3.0, 7.5, 20.0})
        for (double x : {0.1, 2.0, 8.0, 30.0})
            CHECK(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) ==
                  doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regularized beta basics") {
    CHECK(regularized_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, b) = 1 - (1-x)^b
    CHECK(regularized_beta(1.0, 4.0, 0.3) ==
          doctest::Approx(1.0 - std::pow(0.7, 4.0)).epsilon(1e-12));
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    CHECK(regularized_beta(2.5, 4.5, 0.37) ==
          doctest::Approx(1.0 - regularized_beta(4.5, 2.5, 0.63)).epsilon(1e-10));
}

TEST_CASE("chi-square cdf against quadrature oracle") {
    for (double dof : {1.0, 4.0, 15.0})
        for (double x : {0.5, 5.0, 24.996}) {
            CHECK(chi2_cdf(x, dof) ==
                  doctest::Approx(chi2_cdf_quadrature(x, dof)).epsilon(1e-8));
            CHECK(chi2_sf(x, dof) == doctest::Approx(1.0 - chi2_cdf(x, dof)).epsilon(1e-12));
        }
}

TEST_CASE("chi-square critical values") {
    CHECK(chi_square_critical(15, 0.05) == doctest::Approx(24.996).epsilon(0.00004));
    CHECK(chi_square_critical(1, 0.05) == doctest::Approx(3.841).epsilon(0.0003));
    CHECK(chi_square_critical(10, 0.01) == doctest::Approx(23.209).epsilon(0.0001));
    // the critical value decreases monotonically in alpha
    CHECK(chi_square_critical(15, 0.999999) < chi_square_critical(15, 0.5));
    CHECK(chi_square_critical(15, 0.5) < chi_square_critical(15, 0.05));
    CHECK_THROWS(chi_square_critical(0, 0.05));
    CHECK_THROWS(chi_square_critical(15, 0.0));
    CHECK_THROWS(chi_square_critical(15, 1.0));
}

TEST_CASE("student t two-sided p") {
    CHECK(student_t_two_sided_p(0.0, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
    // t(1) is Cauchy: P(|T| > 1) = 0.5
    CHECK(student_t_two_sided_p(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
    // known table value: t = 2.228, dof 10 -> p = 0.05
    CHECK(student_t_two_sided_p(2.228, 10.0) == doctest::Approx(0.05).epsilon(0.001));
    CHECK(student_t_two_sided_p(-2.228, 10.0) ==
          doctest::Approx(student_t_two_sided_p(2.228, 10.0)).epsilon(1e-12));
}
