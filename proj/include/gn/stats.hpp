#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gn {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a),
// series/continued-fraction split as in the classic recipes.
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees.
inline double chi_square_sf(double statistic, double df) {
    return gamma_q(0.5 * df, 0.5 * statistic);
}

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t categories = 0;  // after pooling
    double df = 0.0;
};

// Two-sample chi-square homogeneity test over categorical counts.
// Rarest categories are pooled until every expected cell is >= 5.
// A single surviving category (or an empty table) degenerates to p = 1.
ChiSquareResult chi_square_homogeneity(const std::map<std::string, std::uint64_t>& sample_a,
                                       const std::map<std::string, std::uint64_t>& sample_b);

struct KsResult {
    double statistic = 0.0;  // sup-norm distance D_n
    double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test of `sample` against the CDF values
// supplied per observation (cdf_values[i] = F(x_(i)) for the sorted sample).
KsResult ks_test_from_cdf(std::vector<double> cdf_values);

// Convenience: KS against an exponential with the given rate.
KsResult ks_test_exponential(const std::vector<double>& sample, double rate);

struct FitResult {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
};

// OLS of ln y on ln x; throws on nonpositive coordinates or fewer than
// three points.
FitResult scaling_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace gn
