#pragma once

#include <vector>

#include "ffchain/fit.hpp"
#include "ffchain/network.hpp"
#include "ffchain/poly.hpp"

namespace ffchain {

/// Scalar nondegeneracy report for the d = 1 steady bifurcation. The four
/// conditions: the coefficient sum is nonzero, the slot-0 coefficient crosses
/// zero at nonzero speed, the first feed coefficient is nonzero, and the
/// second derivative along the slot-0 direction is nonzero.
struct SteadyGenericity {
    bool preconditions_ok = false;
    std::string message;
    double coeff_sum = 0.0;      ///< a_0(0) + ... + a_n(0)
    double a0_prime = 0.0;       ///< d a_0 / d lambda at 0
    double a1 = 0.0;             ///< a_1(0)
    double second_deriv = 0.0;   ///< d^2 f / d X_0^2 at the origin
    bool cond_sum = false, cond_crossing = false, cond_feed = false, cond_quadratic = false;
    bool pass = false;
};

struct SteadySample {
    double lambda = 0.0;          ///< signed parameter value
    Eigen::VectorXd x;            ///< n+1 cell values
    Eigen::VectorXd eigenvalues;  ///< diagonal of the lower-triangular linearization
    double residual = 0.0;        ///< max |f| over cells
};

struct SteadyBranch {
    int r = 1;             ///< synchrony index: cells 0..r-1 pinned at zero
    int terminal_sign = 1; ///< sign of the last cell's leading coefficient
    int lambda_side = 1;
    std::vector<SteadySample> samples;
    std::vector<double> kappa_theory; ///< per cell r..n
    std::vector<FitResult> kappa_fit; ///< per cell r..n
};

struct SteadyOptions {
    double newton_residual = 1e-12;
    int max_iterations = 50;
    double trust_factor = 10.0;
    double genericity_tol = 1e-10;
};

SteadyGenericity genericity_check_1d(const PolyResponse& f, double tol = 1e-10);

/// All 2n steady branches over a grid of |lambda| values, solved cell by
/// cell in rescaled variables. Throws BranchError on Newton failure of a
/// solve that must succeed; infeasible discarded-sign solves are not fatal.
std::vector<SteadyBranch> solve_steady_branches(const PolyResponse& f,
                                                const std::vector<double>& lambda_abs_grid,
                                                const SteadyOptions& opts = {});

/// Asymptotics of the linearization diagonal along a branch: fitted exponent
/// per diagonal entry of the solved cells, plus a hyperbolicity flag.
struct SteadyEigenReport {
    std::vector<FitResult> eigen_exponent_fit; ///< per cell r..n
    std::vector<double> kappa_theory;
    bool hyperbolic = false;
    bool exponents_ok = false; ///< within rel_tol of theory
};
SteadyEigenReport steady_eigen_report(const SteadyBranch& branch, double rel_tol = 0.05);

/// Attempt the discarded sign choice at cell r+1 and report whether the
/// following cell's solve fails as expected (divergence or no convergence).
/// Requires r <= n - 2.
bool probe_discarded_sign(const PolyResponse& f, int r, double lambda_abs,
                          const SteadyOptions& opts = {});

} // namespace ffchain
