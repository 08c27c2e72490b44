#pragma once

#include <span>
#include <vector>

namespace avgeig::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double stddev(std::span<const double> x);
/// Midpoint median for even counts.
double median(std::span<const double> x);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares fit y = slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);
/// Least squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace avgeig::stats
