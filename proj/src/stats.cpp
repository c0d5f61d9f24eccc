#include "gn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gn {

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

ChiSquareResult chi_square_homogeneity(const std::map<std::string, std::uint64_t>& sample_a,
                                       const std::map<std::string, std::uint64_t>& sample_b) {
    struct Cell {
        std::uint64_t a = 0, b = 0;
        std::uint64_t combined() const { return a + b; }
    };
    std::map<std::string, Cell> cells;
    for (const auto& [k, v] : sample_a) cells[k].a += v;
    for (const auto& [k, v] : sample_b) cells[k].b += v;

    std::vector<Cell> table;
    for (const auto& [k, c] : cells)
        if (c.combined() > 0) table.push_back(c);

    const double na = static_cast<double>(
        std::accumulate(table.begin(), table.end(), std::uint64_t{0},
                        [](std::uint64_t s, const Cell& c) { return s + c.a; }));
    const double nb = static_cast<double>(
        std::accumulate(table.begin(), table.end(), std::uint64_t{0},
                        [](std::uint64_t s, const Cell& c) { return s + c.b; }));

    ChiSquareResult out;
    if (table.size() < 2 || na == 0.0 || nb == 0.0) {
        out.categories = table.size();
        return out;  // degenerate: p = 1
    }

    // pool rarest categories until every expected cell is >= 5
    const double n_total = na + nb;
    const double min_row = std::min(na, nb);
    std::sort(table.begin(), table.end(),
              [](const Cell& x, const Cell& y) { return x.combined() < y.combined(); });
    while (table.size() > 1) {
        const double min_expected = min_row * static_cast<double>(table.front().combined()) / n_total;
        if (min_expected >= 5.0) break;
        table[1].a += table[0].a;
        table[1].b += table[0].b;
        table.erase(table.begin());
        std::sort(table.begin(), table.end(),
                  [](const Cell& x, const Cell& y) { return x.combined() < y.combined(); });
    }
    if (table.size() < 2) {
        out.categories = table.size();
        return out;
    }

    double stat = 0.0;
    for (const Cell& c : table) {
        const double col = static_cast<double>(c.combined());
        const double ea = na * col / n_total;
        const double eb = nb * col / n_total;
        stat += (c.a - ea) * (c.a - ea) / ea;
        stat += (c.b - eb) * (c.b - eb) / eb;
    }
    out.statistic = stat;
    out.categories = table.size();
    out.df = static_cast<double>(table.size() - 1);
    out.p_value = chi_square_sf(stat, out.df);
    return out;
}

namespace {

// Asymptotic Kolmogorov distribution with the Stephens small-sample
// adjustment.
double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_test_from_cdf(std::vector<double> cdf_values) {
    if (cdf_values.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(cdf_values.begin(), cdf_values.end());
    const double n = static_cast<double>(cdf_values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_values.size(); ++i) {
        const double fi = cdf_values[i];
        d = std::max(d, std::max((i + 1) / n - fi, fi - i / n));
    }
    return {d, ks_pvalue(d, cdf_values.size())};
}

KsResult ks_test_exponential(const std::vector<double>& sample, double rate) {
    std::vector<double> cdf;
    cdf.reserve(sample.size());
    for (double x : sample) cdf.push_back(1.0 - std::exp(-rate * x));
    return ks_test_from_cdf(std::move(cdf));
}

FitResult scaling_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 points");
    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("scaling_fit: coordinates must be positive");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
        sx += lx.back();
        sy += ly.back();
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("scaling_fit: x values are all equal");
    FitResult out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (out.intercept + out.slope * lx[i]);
        sse += r * r;
    }
    out.stderr_slope = std::sqrt(std::max(sse, 0.0) / (n - 2.0) / sxx);
    return out;
}

}  // namespace gn
