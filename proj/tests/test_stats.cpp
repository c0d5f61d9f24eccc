#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "gn/rng.hpp"
#include "gn/stats.hpp"

using namespace gn;

TEST_CASE("regularized upper incomplete gamma") {
    // Q(1, x) = e^{-x}
    for (double x : {0.1, 1.0, 3.0, 10.0})
        CHECK(gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
    // Q(1/2, x) = erfc(sqrt(x))
    for (double x : {0.2, 1.0, 4.0})
        CHECK(gamma_q(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-10));
    // Q(2, x) = (1+x) e^{-x}
    CHECK(gamma_q(2.0, 3.0) == doctest::Approx(4.0 * std::exp(-3.0)).epsilon(1e-12));
    CHECK(gamma_q(3.0, 0.0) == 1.0);
    CHECK_THROWS(gamma_q(-1.0, 1.0));
}

TEST_CASE("chi-square homogeneity basics") {
    std::map<std::string, std::uint64_t> a{{"x", 500}, {"y", 300}, {"z", 200}};
    CHECK(chi_square_homogeneity(a, a).p_value == doctest::Approx(1.0));

    std::map<std::string, std::uint64_t> single_a{{"x", 100}}, single_b{{"x", 90}};
    CHECK(chi_square_homogeneity(single_a, single_b).p_value == 1.0);

    std::map<std::string, std::uint64_t> b{{"x", 200}, {"y", 300}, {"z", 500}};
    const auto r = chi_square_homogeneity(a, b);
    CHECK(r.p_value < 1e-6);
    CHECK(r.categories == 3);
}

TEST_CASE("chi-square pools rare categories") {
    std::map<std::string, std::uint64_t> a{{"x", 1000}, {"y", 1000}, {"rare1", 3}, {"rare2", 3}};
    std::map<std::string, std::uint64_t> b{{"x", 1000}, {"y", 1000}, {"rare1", 3}, {"rare2", 2}};
    const auto r = chi_square_homogeneity(a, b);
    CHECK(r.categories == 3);  // the two rare cells merged, expected >= 5
    CHECK(r.p_value > 0.5);

    // a deeply unbalanced rare cell keeps pooling until the rule holds
    std::map<std::string, std::uint64_t> c{{"x", 1000}, {"y", 1000}, {"rare", 1}};
    std::map<std::string, std::uint64_t> d{{"x", 1000}, {"y", 1000}, {"rare", 2}};
    CHECK(chi_square_homogeneity(c, d).categories == 2);
}

TEST_CASE("chi-square self-test: split halves give uniform p-values") {
    // two independent halves of one multinomial ensemble; the p-value
    // should be uniform, checked loosely via a KS test at the 0.001 level
    Stream rng(trial_seed(31415, 0));
    std::vector<double> pvals;
    for (int rep = 0; rep < 200; ++rep) {
        std::map<std::string, std::uint64_t> a, b;
        for (int i = 0; i < 2000; ++i) {
            const double u = rng.next_unit();
            const std::string cat = u < 0.5 ? "a" : (u < 0.8 ? "b" : (u < 0.95 ? "c" : "d"));
            ++(i % 2 ? a : b)[cat];
        }
        pvals.push_back(chi_square_homogeneity(a, b).p_value);
    }
    const auto ks = ks_test_from_cdf(std::move(pvals));
    CHECK(ks.p_value > 1e-3);
}

TEST_CASE("one-sample KS") {
    Stream rng(trial_seed(27, 3));
    std::vector<double> expo;
    for (int i = 0; i < 50'000; ++i) expo.push_back(rng.next_expo(2.5));
    CHECK(ks_test_exponential(expo, 2.5).p_value > 1e-3);
    CHECK(ks_test_exponential(expo, 4.0).p_value < 1e-6);  // wrong rate
}

TEST_CASE("log-log scaling fit") {
    std::vector<std::pair<double, double>> exact;
    for (double x : {2.0, 4.0, 8.0, 16.0, 32.0}) exact.push_back({x, std::pow(x, -1.5)});
    const auto f = scaling_fit(exact);
    CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(f.stderr_slope == doctest::Approx(0.0).epsilon(1e-10));

    std::vector<std::pair<double, double>> scaled;
    for (double x : {3.0, 9.0, 27.0}) scaled.push_back({x, 7.0 * std::pow(x, -2.0)});
    CHECK(scaling_fit(scaled).slope == doctest::Approx(-2.0).epsilon(1e-12));

    CHECK_THROWS(scaling_fit({{1.0, 1.0}, {2.0, 0.5}}));
    CHECK_THROWS(scaling_fit({{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.1}}));
    CHECK_THROWS(scaling_fit({{1.0, 1.0}, {1.0, 0.5}, {1.0, 0.1}}));
}
