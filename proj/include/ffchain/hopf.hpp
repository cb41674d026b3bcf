#pragma once

#include <vector>

#include "ffchain/fit.hpp"
#include "ffchain/poly.hpp"

namespace ffchain {

/// Normal-form data of the oscillatory bifurcation, read symbolically from
/// a rotation-invariant response in complex form.
struct HopfCoefficients {
    double omega0 = 0.0; ///< rotation frequency of the slot-0 coefficient
    Complex alpha{0, 0}; ///< lambda-slope of the slot-0 coefficient
    Complex beta{0, 0};  ///< slot-1 coefficient at lambda = 0
    Complex C{0, 0};     ///< cubic self-coupling coefficient
    Mat coeff_sum0;      ///< sum of all slot coefficients at lambda = 0, as 2 x 2
    bool rotation_form = false; ///< slot-0 coefficient is a pure rotation at lambda = 0
    bool cond_persistence = false;
    bool cond_crossing = false;
    bool cond_nilpotency = false;
    bool cond_nonlinearity = false;
    bool pass = false;
};

struct HopfSample {
    double lambda = 0.0;
    double omega = 0.0;
    std::vector<Complex> B; ///< amplitudes of the oscillating cells, first one real > 0
    double residual = 0.0;  ///< max relative-equilibrium residual over all cells
    std::vector<Complex> B_consecutive; ///< pre-polish ladder solution
    double omega_consecutive = 0.0;
    double residual_consecutive = 0.0;
    std::vector<Complex> block_eigenvalues; ///< 2 per diagonal block of the orbit linearization
    bool stable = false;
    bool hyperbolic = false;
};

struct HopfBranch {
    int n = 0;
    int r = 1;
    int lambda_side = 1;
    std::vector<HopfSample> samples;
    std::vector<double> kappa_theory; ///< (1/2) 3^{-(i-1)} per oscillating cell
    std::vector<FitResult> kappa_fit;
    FitResult omega_fit; ///< omega against lambda, linear
    bool stable = false; ///< verdict over all samples
};

struct HopfOptions {
    double newton_residual = 1e-12;
    int max_iterations = 50;
    double trust_factor = 10.0;
    double genericity_tol = 1e-10;
    bool polish = true;
    int force_lambda_side = 0; ///< 0 = use the admissible side
};

/// Read frequency, crossing slope, feed coefficient and cubic coefficient
/// off a rotation-invariant complex response. Throws InvarianceError when
/// the symbolic invariance check fails; genericity failures are flagged.
HopfCoefficients extract_hopf_coefficients(const ComplexPoly& f, double tol = 1e-10);

/// Admissible parameter side: alpha_1 * lambda / Re C < 0.
int hopf_lambda_side(const HopfCoefficients& c);

/// Solve the least-synchronous branch (r = 1) over a grid of |lambda|
/// values: the first cell by a rescaled scalar solve, downstream cells by
/// rescaled 2D Newton seeded from the cubic balance, then a global polish
/// of the coupled system. Throws SideError off the admissible side and
/// BranchError on solver failure.
HopfBranch solve_hopf_branch(const ComplexPoly& f, const std::vector<double>& lambda_abs_grid,
                             const HopfOptions& opts = {});

/// The r-th branch from the solved one: r-1 leading cells pinned at zero,
/// amplitude list truncated. Residuals are re-verified by substitution.
HopfBranch branch_family(const HopfBranch& base, int r, const ComplexPoly& f,
                         double residual_tol = 1e-10);

/// Max residual of f(args) - i omega z over all cells of the branch state.
double relative_equilibrium_residual(const ComplexPoly& f, int r, const std::vector<Complex>& B,
                                     double omega, double lambda);

/// Diagonal blocks of the orbit linearization: the full coefficient sum,
/// r-1 copies of the slot-0 coefficient, then the cubic-dominated blocks
/// v -> 2 C |B_j|^2 v + C B_j^2 conj(v).
struct StabilityBlocks {
    std::vector<Mat> blocks;
    std::vector<Complex> eigenvalues; ///< 2 per block, block order
    bool stable = false;
    bool hyperbolic = false;
};
StabilityBlocks stability_blocks(const ComplexPoly& f, int r, const std::vector<Complex>& B,
                                 double lambda);

/// Rotate all amplitudes by a common phase so the first is real positive.
/// Returns the phase that was applied.
double gauge_fix(std::vector<Complex>& B);

/// Linear slot coefficient of the complex response at a parameter value,
/// as a real 2 x 2 matrix.
Mat linear_matrix_at(const ComplexPoly& f, int slot, double lambda);

} // namespace ffchain
