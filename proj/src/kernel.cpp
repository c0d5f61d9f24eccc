#include "gn/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace gn {

Kernel Kernel::power(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("kernel: power exponent must be > 0");
    Kernel k;
    k.form_ = Form::power;
    k.p_ = p;
    return k;
}

Kernel Kernel::table(std::vector<double> values, double tail_p) {
    if (values.empty()) throw std::invalid_argument("kernel: table must be non-empty");
    for (double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("kernel: table values must be positive");
    if (!(tail_p > 0.0)) throw std::invalid_argument("kernel: tail exponent must be > 0");
    Kernel k;
    k.form_ = Form::table;
    k.p_ = tail_p;
    k.values_ = std::move(values);
    return k;
}

double Kernel::eval(std::uint64_t x) const {
    if (form_ == Form::power) return std::pow(static_cast<double>(x) + 1.0, p_);
    const std::size_t len = values_.size();
    if (x < len) return values_[x];
    // continue the table as a power law anchored at the last entry
    const double scale = values_.back() / std::pow(static_cast<double>(len), p_);
    return scale * std::pow(static_cast<double>(x) + 1.0, p_);
}

bool Kernel::is_explosive() const { return p_ > 1.0; }

namespace {

// Bracket for Sum_{j>=cut} s/(j+1)^p by integral comparison (cut >= 1):
//   s*(cut+1)^(1-p)/(p-1) <= remainder <= s*cut^(1-p)/(p-1)
void power_tail_bracket(double s, double p, std::uint64_t cut, double& lo, double& hi) {
    lo = s * std::pow(static_cast<double>(cut) + 1.0, 1.0 - p) / (p - 1.0);
    hi = s * std::pow(static_cast<double>(cut), 1.0 - p) / (p - 1.0);
}

}  // namespace

TailSum Kernel::tail_mean(std::uint64_t n, double rel_tol) const {
    if (!is_explosive()) throw std::domain_error("kernel: tail diverges (not explosive)");

    double partial = 0.0, comp = 0.0;  // Kahan
    auto add = [&](double term) {
        const double y = term - comp;
        const double t = partial + y;
        comp = (t - partial) - y;
        partial = t;
    };

    // In the pure-power region 1/f(j) = s/(j+1)^p.
    double s = 1.0;
    std::uint64_t power_start = n;
    if (form_ == Form::table) {
        const std::uint64_t len = values_.size();
        s = std::pow(static_cast<double>(len), p_) / values_.back();
        power_start = std::max<std::uint64_t>(n, len);
        for (std::uint64_t j = n; j < power_start; ++j) add(1.0 / values_[j]);
    }

    std::uint64_t cut = std::max<std::uint64_t>(power_start, 1);
    for (std::uint64_t j = power_start; j < cut; ++j)  // covers n == 0
        add(s * std::pow(static_cast<double>(j) + 1.0, -p_));

    const std::uint64_t hard_cap = 400'000'000ull;
    double lo, hi;
    power_tail_bracket(s, p_, cut, lo, hi);
    while (hi - lo > 2.0 * rel_tol * (partial + 0.5 * (lo + hi)) && cut < hard_cap) {
        const std::uint64_t next = cut + std::max<std::uint64_t>(cut / 2, 1024);
        for (std::uint64_t j = cut; j < next; ++j)
            add(s * std::pow(static_cast<double>(j) + 1.0, -p_));
        cut = next;
        power_tail_bracket(s, p_, cut, lo, hi);
    }

    TailSum out;
    out.value = partial + 0.5 * (lo + hi);
    out.error_bound = 0.5 * (hi - lo);
    return out;
}

std::string Kernel::describe() const {
    if (form_ == Form::power) return "power(p=" + std::to_string(p_) + ")";
    return "table(" + std::to_string(values_.size()) + " values, tail_p=" + std::to_string(p_) + ")";
}

int critical_k(double p) {
    if (!(p > 1.0)) throw std::domain_error("critical_k: no finite k for p <= 1");
    int k = 1;
    while (!(p > 1.0 + 1.0 / k)) {
        ++k;
        if (k > 1'000'000'000) throw std::domain_error("critical_k: p too close to 1");
    }
    return k;
}

}  // namespace gn
