#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gn {

// Bracketed value of a tail sum Sum_{j>=n} 1/f(j).
struct TailSum {
    double value = 0.0;        // midpoint of the bracket
    double error_bound = 0.0;  // half-width; truncation error is within it
    double low() const { return value - error_bound; }
    double high() const { return value + error_bound; }
};

// Attachment kernel f. Power form: f(x) = (x+1)^p. Table form: explicit
// values for x < values.size(), continued as values.back()*((x+1)/L)^tail_p
// beyond the table so tail sums and explosivity stay decidable.
class Kernel {
  public:
    enum class Form { power, table };

    static Kernel power(double p);
    static Kernel table(std::vector<double> values, double tail_p);

    Form form() const { return form_; }
    double exponent() const { return p_; }  // p for power form, tail_p for table
    const std::vector<double>& values() const { return values_; }

    double eval(std::uint64_t x) const;

    // Sum_{j>=n} 1/f(j) as an explicit partial sum plus an integral-bracketed
    // remainder; the bracket width is driven below rel_tol * value when
    // possible. Throws if the kernel is not explosive.
    TailSum tail_mean(std::uint64_t n, double rel_tol = 1e-9) const;

    bool is_explosive() const;

    std::string describe() const;

  private:
    Form form_ = Form::power;
    double p_ = 2.0;
    std::vector<double> values_;  // table form only
};

// Smallest k with p > 1 + 1/k (strict, as in the transition statement).
// Throws for p <= 1.
int critical_k(double p);

}  // namespace gn
