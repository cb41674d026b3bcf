#pragma once

#include <vector>

#include "ffchain/errors.hpp"

namespace ffchain {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    int points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y);

/// Power-law fit: log(amplitude) on log|lambda|. Entries with non-positive
/// amplitude are rejected.
FitResult fit_loglog(const std::vector<double>& lambda_abs, const std::vector<double>& amplitude);

/// Guarded power-law fit for sweep tables: requires at least `min_points`
/// samples spanning at least `min_decades` decades, and flags a clean power
/// law only when r2 >= r2_clean. Throws FitError on an inadmissible grid.
struct PowerLawFit {
    FitResult fit;
    bool clean = false;
};
PowerLawFit fit_power_law(const std::vector<double>& lambda_abs,
                          const std::vector<double>& amplitude, int min_points = 8,
                          double min_decades = 3.0, double r2_clean = 0.999);

} // namespace ffchain
