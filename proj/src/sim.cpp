#include "ffchain/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ffchain {

namespace {

double cell_modulus(const Eigen::VectorXd& state, int d, int j) {
    return state.segment(j * d, d).norm();
}

/// Refine an upward zero crossing of coordinate `coord` inside [ta, tb].
double refine_crossing(const DensePath& path, int coord, double ta, double tb) {
    double fa = path.eval(ta)(coord);
    for (int it = 0; it < 80; ++it) {
        const double tm = 0.5 * (ta + tb);
        const double fm = path.eval(tm)(coord);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            ta = tm;
            fa = fm;
        } else {
            tb = tm;
        }
        if (tb - ta <= 1e-14 * std::max(1.0, std::abs(tb))) break;
    }
    return 0.5 * (ta + tb);
}

} // namespace

AmplitudeRow measure_orbit(const PolyResponse& f, double lambda, const Eigen::VectorXd& seed,
                           const MeasureOptions& opts) {
    const int n = f.n, d = f.d;
    AmplitudeRow row;
    row.lambda = lambda;

    const CompiledChainRhs rhs(f, lambda);
    const OdeRhs rhs_fn = [&rhs](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        rhs(t, y, dy);
    };
    OdeOptions oo;
    oo.abs_tol = oo.rel_tol = opts.tol;

    double transient = opts.transient_time;
    if (transient < 0.0) {
        const double rate = std::abs(opts.alpha1 * lambda);
        transient = rate > 0.0 ? std::min(50.0 / rate, opts.transient_cap) : opts.transient_cap;
    }
    row.transient = transient;

    Eigen::VectorXd y = seed;
    row.stats = integrate_adaptive(rhs_fn, 0.0, transient, y, oo);

    const double period_guess = 2.0 * M_PI / std::abs(opts.omega_hint);
    const double window = (opts.periods_average + 5) * period_guess;
    DensePath path;
    const IntegratorStats mstats = integrate_adaptive(
        rhs_fn, transient, transient + window, y, oo,
        [&path](const StepRecord& r) { path.push(r); });
    row.stats.steps += mstats.steps;
    row.stats.rejected += mstats.rejected;
    row.stats.tolerance = mstats.tolerance;
    row.stats.max_error_estimate = std::max(row.stats.max_error_estimate, mstats.max_error_estimate);

    // locate the first oscillating cell
    const double dt = period_guess / opts.samples_per_period;
    std::vector<double> cell_max(static_cast<std::size_t>(n) + 1, 0.0);
    for (double t = path.t_begin(); t <= path.t_end(); t += dt) {
        const Eigen::VectorXd s = path.eval(t);
        for (int j = 0; j <= n; ++j)
            cell_max[static_cast<std::size_t>(j)] =
                std::max(cell_max[static_cast<std::size_t>(j)], cell_modulus(s, d, j));
    }
    const double overall = *std::max_element(cell_max.begin(), cell_max.end());
    double seed_scale = 0.0;
    for (int j = 0; j <= n; ++j) seed_scale = std::max(seed_scale, seed.segment(j * d, d).norm());
    if (overall < std::max(1e-300, 1e-4 * seed_scale))
        throw NoOrbitError("measure_orbit: state decayed to the equilibrium");
    int c0 = opts.first_cell;
    if (c0 < 0) {
        for (int j = 0; j <= n; ++j)
            if (cell_max[static_cast<std::size_t>(j)] > 1e-8 * overall) {
                c0 = j;
                break;
            }
    }
    const int coord = c0 * d;

    // upward zero crossings of the leading coordinate
    std::vector<double> crossings;
    double tprev = path.t_begin();
    double vprev = path.eval(tprev)(coord);
    for (double t = tprev + dt; t <= path.t_end(); t += dt) {
        const double v = path.eval(t)(coord);
        if (vprev < 0.0 && v >= 0.0) crossings.push_back(refine_crossing(path, coord, tprev, t));
        tprev = t;
        vprev = v;
    }
    if (crossings.size() < 3)
        throw NoOrbitError("measure_orbit: no oscillation detected (" +
                           std::to_string(crossings.size()) + " crossings)");

    const int intervals =
        std::min<int>(opts.periods_average, static_cast<int>(crossings.size()) - 1);
    const double t_last = crossings.back();
    const double t_first = crossings[crossings.size() - 1 - static_cast<std::size_t>(intervals)];
    row.period = (t_last - t_first) / intervals;
    row.omega = 2.0 * M_PI / row.period;

    // guard against mistaking a decaying or growing spiral for an orbit
    auto modulus_avg_near = [&](double tc) {
        double acc = 0.0;
        const int pts = 64;
        for (int i = 0; i < pts; ++i)
            acc += cell_modulus(path.eval(tc + i * row.period / pts), d, c0);
        return acc / pts;
    };
    const double head = modulus_avg_near(std::max(path.t_begin(), t_first - row.period));
    const double tail = modulus_avg_near(t_last - row.period);
    if (!(head > 0.0) || !(tail > 0.0) || std::abs(std::log(tail / head)) > 0.5)
        throw NoOrbitError("measure_orbit: amplitude is not stationary over the window");

    // time averages over the last periods_average periods
    const double t_end = t_last;
    const double t_begin = std::max(path.t_begin(), t_end - opts.periods_average * row.period);
    const int samples = opts.periods_average * opts.samples_per_period;
    const double h = (t_end - t_begin) / samples;
    row.amplitude = Eigen::VectorXd::Zero(n + 1);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n + 1, std::numeric_limits<double>::infinity());
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(n + 1, -std::numeric_limits<double>::infinity());
    for (int i = 0; i <= samples; ++i) {
        const double t = t_begin + i * h;
        const Eigen::VectorXd s = path.eval(t);
        const double w = (i == 0 || i == samples) ? 0.5 : 1.0;
        for (int j = 0; j <= n; ++j) {
            row.amplitude(j) += w * cell_modulus(s, d, j);
            lo(j) = std::min(lo(j), s(j * d));
            hi(j) = std::max(hi(j), s(j * d));
        }
    }
    row.amplitude /= samples;
    row.half_peak = 0.5 * (hi - lo);
    return row;
}

AmplitudeTable simulate_sweep(const PolyResponse& f, const std::vector<double>& lambdas,
                              const std::vector<Eigen::VectorXd>& seeds,
                              const MeasureOptions& opts, int max_threads) {
    if (lambdas.size() != seeds.size())
        throw ShapeError("simulate_sweep: one seed per lambda required");
    AmplitudeTable table;
    table.n = f.n;
    table.d = f.d;
    table.rows.resize(lambdas.size());

    const int workers = std::max(1, std::min<int>(max_threads, static_cast<int>(lambdas.size())));
    std::exception_ptr first_error;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= lambdas.size() || failed.load()) return;
            try {
                table.rows[i] = measure_orbit(f, lambdas[i], seeds[i], opts);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);
    return table;
}

SweepFit sweep_and_fit(const AmplitudeTable& table, int min_points, double min_decades) {
    SweepFit out;
    if (table.rows.empty()) throw FitError("sweep_and_fit: empty table");
    const int cells = static_cast<int>(table.rows.front().amplitude.size());
    std::vector<double> la;
    for (const auto& r : table.rows) la.push_back(std::abs(r.lambda));
    for (int j = 0; j < cells; ++j) {
        std::vector<double> amp;
        bool positive = true;
        for (const auto& r : table.rows) {
            if (!(r.amplitude(j) > 0.0)) positive = false;
            amp.push_back(r.amplitude(j));
        }
        if (!positive) continue;
        out.cells.push_back(j);
        out.fits.push_back(fit_power_law(la, amp, min_points, min_decades));
    }
    return out;
}

} // namespace ffchain
