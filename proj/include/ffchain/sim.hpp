#pragma once

#include <vector>

#include "ffchain/fit.hpp"
#include "ffchain/ode.hpp"

namespace ffchain {

/// One measured row of a parameter sweep: per-cell orbit amplitudes and the
/// period estimate, after the transient was discarded.
struct AmplitudeRow {
    double lambda = 0.0;
    Eigen::VectorXd amplitude; ///< per cell, time-average of the cell modulus
    Eigen::VectorXd half_peak; ///< per cell, half peak-to-peak of the first coordinate
    double period = 0.0;
    double omega = 0.0;
    double transient = 0.0;
    IntegratorStats stats;
};

struct AmplitudeTable {
    int n = 0, d = 1;
    std::vector<AmplitudeRow> rows;
};

struct MeasureOptions {
    double tol = 1e-10;
    double transient_time = -1.0; ///< < 0: use 50 / |alpha1 * lambda|, capped
    double alpha1 = 1.0;          ///< eigenvalue crossing speed, sets the default transient
    double transient_cap = 1e7;
    double omega_hint = 1.0; ///< period scale of the measurement window
    int periods_average = 10;
    int samples_per_period = 256;
    int first_cell = -1; ///< -1: detect the first oscillating cell
};

/// Integrate past the transient, then estimate the period from upward zero
/// crossings of the first oscillating coordinate and average the cell moduli
/// over the last periods. Throws NoOrbitError when no crossings are found.
AmplitudeRow measure_orbit(const PolyResponse& f, double lambda, const Eigen::VectorXd& seed,
                           const MeasureOptions& opts);

/// Measure a whole grid; rows keep grid order. Independent lambdas may run
/// concurrently (max_threads <= 1 forces serial execution).
AmplitudeTable simulate_sweep(const PolyResponse& f, const std::vector<double>& lambdas,
                              const std::vector<Eigen::VectorXd>& seeds,
                              const MeasureOptions& opts, int max_threads = 1);

/// Per-cell power-law fits of a sweep table. Cells whose amplitudes are not
/// strictly positive across the grid are skipped (index list says which
/// cells were fitted).
struct SweepFit {
    std::vector<int> cells;
    std::vector<PowerLawFit> fits;
};
SweepFit sweep_and_fit(const AmplitudeTable& table, int min_points = 8, double min_decades = 3.0);

} // namespace ffchain
