#pragma once

#include <vector>

#include "ffchain/poly.hpp"

namespace ffchain {

/// Chain state: n+1 cells of dimension d, stored flat cell-major.
struct ChainState {
    int n = 0;
    int d = 1;
    Eigen::VectorXd x;

    ChainState() = default;
    ChainState(int n_, int d_) : n(n_), d(d_), x(Eigen::VectorXd::Zero((n_ + 1) * d_)) {}
    Eigen::VectorBlock<Eigen::VectorXd> cell(int j) { return x.segment(j * d, d); }
    Eigen::VectorBlock<const Eigen::VectorXd> cell(int j) const { return x.segment(j * d, d); }
};

/// Structural index map of the chain: sigma_i(j) = max(j - i, 0).
int sigma(int i, int j, int n);

/// Argument tuple of cell j: slot i reads cell sigma_i(j). Gathers a flat
/// (n+1)*d argument vector from a flat state.
Eigen::VectorXd gather_args(const Eigen::VectorXd& state, int n, int d, int j);

/// The shift action on argument tuples: (A_i X)_j = X_{min(j+i, n)}.
Eigen::VectorXd apply_A_sigma(const Eigen::VectorXd& args, int n, int d, int i);

/// Chain vector field built from a response function: component j is f
/// evaluated on the sigma-shuffled arguments of cell j.
Eigen::VectorXd eval_gamma(const PolyResponse& f, const Eigen::VectorXd& state, double lambda);
ChainState eval_gamma(const PolyResponse& f, const ChainState& state, double lambda);

/// Exact Jacobian of the chain vector field at a state.
Mat gamma_jacobian(const PolyResponse& f, const Eigen::VectorXd& state, double lambda);

/// Structural bracket on response functions:
/// [f,g](X) = sum_i D_i f(X) g(A_i X) - D_i g(X) f(A_i X), computed
/// symbolically. Throws DegreeOverflowError above the degree cap.
PolyResponse sigma_bracket(const PolyResponse& f, const PolyResponse& g, int degree_cap = 6);

/// Index shift of a solution: (x_0, x_1, ..., x_n) -> (x_0, x_0, x_1, ..., x_{n-1}).
Eigen::VectorXd shift_state(const Eigen::VectorXd& state, int n, int d);
std::vector<Eigen::VectorXd> shift_solution(const std::vector<Eigen::VectorXd>& states, int n, int d);

/// Numeric check of the rotation symmetry
/// f(e^{is} X_0, ..., e^{is} X_{n-1}, 0) = e^{is} f(X_0, ..., X_{n-1}, 0)
/// at random arguments (d = 2). Returns the largest relative violation.
double rotation_invariance_residual(const PolyResponse& f, int num_samples, std::uint64_t seed);

/// Symbolic check on the complex view: every term not touching the last cell
/// must have z-degree minus conjugate-degree equal to one.
bool is_rotation_invariant(const ComplexPoly& f);

} // namespace ffchain
