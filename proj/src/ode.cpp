#include "ffchain/ode.hpp"

#include <algorithm>
#include <cmath>

namespace ffchain {

Eigen::VectorXd StepRecord::eval(double t) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
}

Eigen::VectorXd DensePath::eval(double t) const {
    if (records_.empty()) throw std::runtime_error("DensePath: empty");
    auto it = std::lower_bound(records_.begin(), records_.end(), t,
                               [](const StepRecord& r, double tv) { return r.t1 < tv; });
    if (it == records_.end()) --it;
    return it->eval(t);
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

} // namespace

IntegratorStats integrate_adaptive(const OdeRhs& rhs, double t0, double t_end, Eigen::VectorXd& y,
                                   const OdeOptions& opts, const StepObserver& observer) {
    IntegratorStats stats;
    stats.tolerance = std::max(opts.abs_tol, opts.rel_tol);
    const Eigen::Index dim = y.size();
    Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    Eigen::VectorXd ytmp(dim), ynew(dim), err(dim);

    double t = t0;
    const double direction = t_end >= t0 ? 1.0 : -1.0;
    rhs(t, y, k1);

    double h = opts.initial_step;
    if (h == 0.0) {
        const double ynorm = y.cwiseAbs().maxCoeff() + opts.abs_tol;
        const double fnorm = k1.cwiseAbs().maxCoeff();
        h = fnorm > 0 ? 0.01 * ynorm / fnorm : 1e-4;
        h = std::min(h, std::abs(t_end - t0));
        h = std::max(h, 1e-12);
    }
    h *= direction;

    double err_prev = 1.0;
    while (direction * (t_end - t) > 0) {
        if (opts.max_step > 0.0) h = direction * std::min(std::abs(h), opts.max_step);
        if (direction * (t + h - t_end) > 0) h = t_end - t;
        if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw StiffnessError("integrate_adaptive: step size underflow at t=" + std::to_string(t));
        if (stats.steps + stats.rejected > opts.max_steps)
            throw StiffnessError("integrate_adaptive: step budget exhausted");

        ytmp = y + h * (A21 * k1);
        rhs(t + C2 * h, ytmp, k2);
        ytmp = y + h * (A31 * k1 + A32 * k2);
        rhs(t + C3 * h, ytmp, k3);
        ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
        rhs(t + C4 * h, ytmp, k4);
        ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        rhs(t + C5 * h, ytmp, k5);
        ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        rhs(t + h, ynew, k7);
        err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

        double scaled = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double sc = opts.abs_tol +
                              opts.rel_tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            const double e = err(i) / sc;
            scaled += e * e;
        }
        scaled = std::sqrt(scaled / static_cast<double>(dim));

        if (scaled <= 1.0) {
            StepRecord rec;
            rec.t0 = t;
            rec.t1 = t + h;
            if (observer) {
                rec.y0 = y;
                rec.f0 = k1;
                rec.y1 = ynew;
                rec.f1 = k7;
            }
            t += h;
            y = ynew;
            k1 = k7; // first-same-as-last
            ++stats.steps;
            stats.max_error_estimate = std::max(stats.max_error_estimate, scaled);
            if (observer) observer(rec);
            const double grow = 0.9 * std::pow(std::max(scaled, 1e-10), -0.17) *
                                std::pow(std::max(err_prev, 1e-10), 0.04);
            h *= std::clamp(grow, 0.2, 5.0);
            err_prev = std::max(scaled, 1e-10);
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(scaled, -0.2));
        }
    }
    return stats;
}

CompiledChainRhs::CompiledChainRhs(const PolyResponse& f, double lambda) : n_(f.n), d_(f.d) {
    const PolyResponse fixed = poly_fix_lambda(f, lambda);
    for (const auto& [m, c] : fixed.terms) {
        Term t;
        t.coeff = static_cast<int>(coeffs_.size());
        for (int i = 0; i < d_; ++i) coeffs_.push_back(c(i));
        t.begin = static_cast<int>(factors_.size());
        for (std::size_t v = 0; v < m.state.size(); ++v)
            if (m.state[v] > 0) factors_.emplace_back(static_cast<int>(v), m.state[v]);
        t.end = static_cast<int>(factors_.size());
        terms_.push_back(t);
    }
    args_.assign(static_cast<std::size_t>((n_ + 1) * d_), 0.0);
}

void CompiledChainRhs::operator()(double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
    for (int j = 0; j <= n_; ++j) {
        for (int i = 0; i <= n_; ++i) {
            const int src = std::max(j - i, 0) * d_;
            for (int k = 0; k < d_; ++k) args_[static_cast<std::size_t>(i * d_ + k)] = y(src + k);
        }
        double* out = dy.data() + static_cast<std::ptrdiff_t>(j) * d_;
        for (int k = 0; k < d_; ++k) out[k] = 0.0;
        for (const Term& t : terms_) {
            double p = 1.0;
            for (int fi = t.begin; fi < t.end; ++fi) {
                const double v = args_[static_cast<std::size_t>(factors_[static_cast<std::size_t>(fi)].first)];
                for (int e = 0; e < factors_[static_cast<std::size_t>(fi)].second; ++e) p *= v;
            }
            const double* c = coeffs_.data() + t.coeff;
            for (int k = 0; k < d_; ++k) out[k] += c[k] * p;
        }
    }
}

Trajectory integrate(const PolyResponse& f, const Eigen::VectorXd& x0, double lambda, double t0,
                     double t1, double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw std::invalid_argument("integrate: tolerance must lie in [1e-13, 1e-6]");
    Trajectory traj;
    traj.n = f.n;
    traj.d = f.d;
    const CompiledChainRhs rhs(f, lambda);
    OdeOptions opts;
    opts.abs_tol = opts.rel_tol = tol;
    Eigen::VectorXd y = x0;
    traj.times.push_back(t0);
    traj.states.push_back(y);
    traj.stats = integrate_adaptive(
        [&rhs](double t, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) { rhs(t, yy, dy); }, t0,
        t1, y, opts, [&traj](const StepRecord& r) {
            traj.times.push_back(r.t1);
            traj.states.push_back(r.y1);
        });
    return traj;
}

} // namespace ffchain
