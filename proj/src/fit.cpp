#include "ffchain/fit.hpp"

#include <algorithm>
#include <cmath>

namespace ffchain {

FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw FitError("fit_linear: length mismatch");
    const int m = static_cast<int>(x.size());
    if (m < 2) throw FitError("fit_linear: need at least two points");
    double sx = 0, sy = 0;
    for (int i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double xbar = sx / m, ybar = sy / m;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0.0) throw FitError("fit_linear: degenerate abscissae");
    FitResult r;
    r.points = m;
    r.slope = sxy / sxx;
    r.intercept = ybar - r.slope * xbar;
    double ss_res = 0, ss_tot = 0;
    for (int i = 0; i < m; ++i) {
        const double e = y[i] - (r.intercept + r.slope * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    r.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    r.slope_stderr = m > 2 ? std::sqrt(ss_res / (m - 2) / sxx) : 0.0;
    return r;
}

FitResult fit_loglog(const std::vector<double>& lambda_abs, const std::vector<double>& amplitude) {
    if (lambda_abs.size() != amplitude.size()) throw FitError("fit_loglog: length mismatch");
    std::vector<double> lx, ly;
    lx.reserve(lambda_abs.size());
    ly.reserve(amplitude.size());
    for (std::size_t i = 0; i < lambda_abs.size(); ++i) {
        if (!(lambda_abs[i] > 0.0) || !(amplitude[i] > 0.0))
            throw FitError("fit_loglog: non-positive sample");
        lx.push_back(std::log(lambda_abs[i]));
        ly.push_back(std::log(amplitude[i]));
    }
    return fit_linear(lx, ly);
}

PowerLawFit fit_power_law(const std::vector<double>& lambda_abs,
                          const std::vector<double>& amplitude, int min_points,
                          double min_decades, double r2_clean) {
    if (static_cast<int>(lambda_abs.size()) < min_points)
        throw FitError("fit_power_law: fewer than " + std::to_string(min_points) + " points");
    const auto [lo, hi] = std::minmax_element(lambda_abs.begin(), lambda_abs.end());
    if (!(*lo > 0.0) || std::log10(*hi / *lo) < min_decades - 1e-12)
        throw FitError("fit_power_law: grid spans fewer than " + std::to_string(min_decades) +
                       " decades");
    PowerLawFit out;
    out.fit = fit_loglog(lambda_abs, amplitude);
    out.clean = out.fit.r2 >= r2_clean;
    return out;
}

} // namespace ffchain
