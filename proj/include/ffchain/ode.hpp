#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ffchain/poly.hpp"

namespace ffchain {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double initial_step = 0.0; ///< 0 = heuristic
    double max_step = 0.0;     ///< 0 = unbounded
    std::uint64_t max_steps = 4'000'000'000ULL;
};

struct IntegratorStats {
    std::uint64_t steps = 0;
    std::uint64_t rejected = 0;
    double tolerance = 0.0;
    double max_error_estimate = 0.0; ///< largest accepted scaled error (<= 1)
};

/// One accepted step with endpoint derivatives; supports cubic Hermite
/// interpolation inside [t0, t1].
struct StepRecord {
    double t0 = 0.0, t1 = 0.0;
    Eigen::VectorXd y0, f0, y1, f1;
    Eigen::VectorXd eval(double t) const;
};

/// Sorted accepted steps over one integration window.
class DensePath {
public:
    void push(const StepRecord& r) { records_.push_back(r); }
    Eigen::VectorXd eval(double t) const;
    double t_begin() const { return records_.empty() ? 0.0 : records_.front().t0; }
    double t_end() const { return records_.empty() ? 0.0 : records_.back().t1; }
    const std::vector<StepRecord>& records() const { return records_; }

private:
    std::vector<StepRecord> records_;
};

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;
using StepObserver = std::function<void(const StepRecord&)>;

/// Adaptive embedded Runge-Kutta 5(4) pair with PI step-size control.
/// Throws StiffnessError on step underflow.
IntegratorStats integrate_adaptive(const OdeRhs& rhs, double t0, double t_end, Eigen::VectorXd& y,
                                   const OdeOptions& opts, const StepObserver& observer = {});

/// Response function compiled against a fixed parameter value for fast
/// repeated evaluation of the chain vector field. One instance per thread.
class CompiledChainRhs {
public:
    CompiledChainRhs(const PolyResponse& f, double lambda);
    void operator()(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) const;
    int dim() const { return (n_ + 1) * d_; }

private:
    int n_ = 0, d_ = 1;
    struct Term {
        int coeff = 0;  ///< offset into coeffs_ (d_ values)
        int begin = 0, end = 0; ///< factor range
    };
    std::vector<Term> terms_;
    std::vector<std::pair<int, int>> factors_; ///< (argument index, exponent)
    std::vector<double> coeffs_;
    mutable std::vector<double> args_;
};

struct Trajectory {
    int n = 0, d = 1;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    IntegratorStats stats;
};

/// Integrate the chain equations, storing every accepted step.
Trajectory integrate(const PolyResponse& f, const Eigen::VectorXd& x0, double lambda, double t0,
                     double t1, double tol);

} // namespace ffchain
