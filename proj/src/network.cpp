#include "ffchain/network.hpp"

#include <cmath>
#include <random>

namespace ffchain {

int sigma(int i, int j, int n) {
    if (i < 0 || i > n || j < 0 || j > n) throw ShapeError("sigma: index out of range");
    return std::max(j - i, 0);
}

Eigen::VectorXd gather_args(const Eigen::VectorXd& state, int n, int d, int j) {
    Eigen::VectorXd args((n + 1) * d);
    for (int i = 0; i <= n; ++i)
        args.segment(i * d, d) = state.segment(sigma(i, j, n) * d, d);
    return args;
}

Eigen::VectorXd apply_A_sigma(const Eigen::VectorXd& args, int n, int d, int i) {
    if (i < 0 || i > n) throw ShapeError("apply_A_sigma: index out of range");
    if (args.size() != (n + 1) * d) throw ShapeError("apply_A_sigma: bad tuple length");
    Eigen::VectorXd out((n + 1) * d);
    for (int j = 0; j <= n; ++j)
        out.segment(j * d, d) = args.segment(std::min(j + i, n) * d, d);
    return out;
}

Eigen::VectorXd eval_gamma(const PolyResponse& f, const Eigen::VectorXd& state, double lambda) {
    if (state.size() != f.num_vars()) throw ShapeError("eval_gamma: bad state length");
    Eigen::VectorXd out(f.num_vars());
    for (int j = 0; j <= f.n; ++j)
        out.segment(j * f.d, f.d) = poly_eval(f, gather_args(state, f.n, f.d, j), lambda);
    return out;
}

ChainState eval_gamma(const PolyResponse& f, const ChainState& state, double lambda) {
    if (state.n != f.n || state.d != f.d) throw ShapeError("eval_gamma: state shape mismatch");
    ChainState out(f.n, f.d);
    out.x = eval_gamma(f, state.x, lambda);
    return out;
}

Mat gamma_jacobian(const PolyResponse& f, const Eigen::VectorXd& state, double lambda) {
    const int n = f.n, d = f.d;
    Mat jac = Mat::Zero((n + 1) * d, (n + 1) * d);
    // cache slot partials of f once
    std::vector<PolyResponse> partials;
    partials.reserve(static_cast<std::size_t>((n + 1) * d));
    for (int v = 0; v < (n + 1) * d; ++v) partials.push_back(poly_partial(f, v));
    for (int j = 0; j <= n; ++j) {
        const Eigen::VectorXd args = gather_args(state, n, d, j);
        for (int i = 0; i <= n; ++i) {
            const int k = sigma(i, j, n); // slot i of cell j reads cell k
            for (int b = 0; b < d; ++b) {
                const Eigen::VectorXd col = poly_eval(partials[static_cast<std::size_t>(i * d + b)], args, lambda);
                jac.block(j * d, k * d + b, d, 1) += col;
            }
        }
    }
    return jac;
}

PolyResponse sigma_bracket(const PolyResponse& f, const PolyResponse& g, int degree_cap) {
    if (f.n != g.n || f.d != g.d) throw ShapeError("sigma_bracket: shapes differ");
    const int n = f.n, d = f.d;
    PolyResponse out(n, d);
    for (int i = 0; i <= n; ++i) {
        const PolyResponse gs = poly_compose_shift(g, i);
        const PolyResponse fs = poly_compose_shift(f, i);
        for (int b = 0; b < d; ++b) {
            out += poly_mul_component(poly_partial(f, i * d + b), gs, b);
            out += poly_mul_component(poly_partial(g, i * d + b), fs, b) * -1.0;
        }
    }
    out.prune(1e-14);
    if (out.max_state_degree() > degree_cap)
        throw DegreeOverflowError("sigma_bracket: result degree " +
                                  std::to_string(out.max_state_degree()) + " exceeds cap " +
                                  std::to_string(degree_cap));
    return out;
}

Eigen::VectorXd shift_state(const Eigen::VectorXd& state, int n, int d) {
    if (state.size() != (n + 1) * d) throw ShapeError("shift_state: bad state length");
    Eigen::VectorXd out((n + 1) * d);
    out.segment(0, d) = state.segment(0, d);
    for (int j = 1; j <= n; ++j) out.segment(j * d, d) = state.segment((j - 1) * d, d);
    return out;
}

std::vector<Eigen::VectorXd> shift_solution(const std::vector<Eigen::VectorXd>& states, int n, int d) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(shift_state(s, n, d));
    return out;
}

double rotation_invariance_residual(const PolyResponse& f, int num_samples, std::uint64_t seed) {
    if (f.d != 2) throw ShapeError("rotation_invariance_residual: requires d = 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    double worst = 0.0;
    for (int s = 0; s < num_samples; ++s) {
        Eigen::VectorXd args = Eigen::VectorXd::Zero(f.num_vars());
        for (int j = 0; j < f.n; ++j) {
            args(2 * j) = dist(rng);
            args(2 * j + 1) = dist(rng);
        }
        // last slot pinned at zero
        const double lambda = 0.3 * dist(rng);
        const double th = angle(rng);
        const double c = std::cos(th), sn = std::sin(th);
        Eigen::VectorXd rotated = args;
        for (int j = 0; j < f.n; ++j) {
            rotated(2 * j) = c * args(2 * j) - sn * args(2 * j + 1);
            rotated(2 * j + 1) = sn * args(2 * j) + c * args(2 * j + 1);
        }
        const Eigen::Vector2d lhs = poly_eval(f, rotated, lambda);
        const Eigen::Vector2d v = poly_eval(f, args, lambda);
        const Eigen::Vector2d rhs(c * v(0) - sn * v(1), sn * v(0) + c * v(1));
        const double scale = std::max(1.0, rhs.norm());
        worst = std::max(worst, (lhs - rhs).norm() / scale);
    }
    return worst;
}

bool is_rotation_invariant(const ComplexPoly& f) {
    const auto last = static_cast<std::size_t>(f.n);
    for (const auto& [m, c] : f.terms) {
        if (std::abs(c) == 0.0) continue;
        if (m.z[last] > 0 || m.zc[last] > 0) continue; // unconstrained on the last slot
        int weight = 0;
        for (std::size_t j = 0; j < last; ++j) weight += m.z[j] - m.zc[j];
        if (weight != 1) return false;
    }
    return true;
}

} // namespace ffchain
