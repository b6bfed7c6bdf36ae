#pragma once

#include <span>

namespace okunfit::stats {

double mean(std::span<const double> x);

/// Population standard deviation (divides by n).
double population_sd(std::span<const double> x);

/// Root mean square, sqrt(sum(x^2) / n).
double rms(std::span<const double> x);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of y on x with intercept. Throws
/// DegenerateRegressionError when x has zero variance.
LineFit ols_line(std::span<const double> x, std::span<const double> y);

}  // namespace okunfit::stats
