#include "ffchain/steady.hpp"

#include <cmath>

namespace ffchain {

namespace {

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

/// Coefficients of the univariate slice q(x) = f(x, lower...; lambda) where
/// slot 0 holds the unknown of cell j and slots i >= 1 read the already
/// solved cells sigma_i(j).
std::vector<double> cell_poly(const PolyResponse& f, int j, const Eigen::VectorXd& cells,
                              double lambda) {
    std::vector<double> coef;
    for (const auto& [m, c] : f.terms) {
        double factor = c(0);
        for (int e = 0; e < m.lambda; ++e) factor *= lambda;
        for (int i = 1; i <= f.n; ++i) {
            const int src = std::max(j - i, 0);
            for (int e = 0; e < m.state[static_cast<std::size_t>(i)]; ++e) factor *= cells(src);
        }
        const int k = m.state[0];
        if (static_cast<int>(coef.size()) <= k) coef.resize(static_cast<std::size_t>(k) + 1, 0.0);
        coef[static_cast<std::size_t>(k)] += factor;
    }
    return coef;
}

double horner(const std::vector<double>& coef, double x) {
    double v = 0.0;
    for (std::size_t k = coef.size(); k-- > 0;) v = v * x + coef[k];
    return v;
}

double horner_deriv(const std::vector<double>& coef, double x) {
    double v = 0.0;
    for (std::size_t k = coef.size(); k-- > 1;) v = v * x + static_cast<double>(k) * coef[k];
    return v;
}

struct NewtonOutcome {
    double x = 0.0;
    double residual = 0.0;
    bool converged = false;
    bool left_trust = false;
};

/// Damped-free 1D Newton on a polynomial, in whatever rescaled variable the
/// caller chose. Trust ball guards against chasing a root that is not there.
NewtonOutcome newton_1d(const std::vector<double>& coef, double seed, double trust_radius,
                        int max_iter) {
    NewtonOutcome out;
    double x = seed;
    for (int it = 0; it < max_iter; ++it) {
        const double v = horner(coef, x);
        const double dv = horner_deriv(coef, x);
        if (dv == 0.0) break;
        const double step = v / dv;
        x -= step;
        if (std::abs(x - seed) > trust_radius) {
            out.left_trust = true;
            out.x = x;
            return out;
        }
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) {
            out.converged = true;
            break;
        }
    }
    out.x = x;
    out.residual = std::abs(horner(coef, x));
    return out;
}

/// Rescale q(mu * y) / mu^pow into coefficients over y.
std::vector<double> rescale_poly(const std::vector<double>& coef, double mu, int pow) {
    std::vector<double> out(coef.size(), 0.0);
    double mu_k = 1.0;
    for (std::size_t k = 0; k < coef.size(); ++k) {
        out[k] = coef[k] * mu_k;
        mu_k *= mu;
    }
    double scale = 1.0;
    for (int p = 0; p < pow; ++p) scale *= mu;
    for (auto& c : out) c /= scale;
    return out;
}

struct SolveContext {
    double a0p = 0.0; ///< slope of the slot-0 coefficient in lambda
    double a1 = 0.0;
    double c2 = 0.0; ///< coefficient of X_0^2 (half the second derivative)
};

/// Solve the nontrivial root of cell r: f(x, 0, ..., 0; lambda)/x = 0 in the
/// variable y = x / |lambda|.
NewtonOutcome solve_first_cell(const PolyResponse& f, int r, double lambda,
                               const SolveContext& ctx, const SteadyOptions& opts) {
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(f.n + 1);
    std::vector<double> coef = cell_poly(f, r, zeros, lambda);
    // divide out the trivial root x = 0
    coef.erase(coef.begin());
    const double mu = std::abs(lambda);
    const std::vector<double> scaled = rescale_poly(coef, mu, 1);
    const double seed = -(ctx.a0p / ctx.c2) * sign_of(lambda);
    return newton_1d(scaled, seed, opts.trust_factor * std::max(1.0, std::abs(seed)),
                     opts.max_iterations);
}

/// Solve cell j given solved cells 0..j-1, in the variable y = x / mu with
/// mu = |lambda|^{kappa}, kappa = 1/2^{j-r}. `sign` picks the square root.
NewtonOutcome solve_next_cell(const PolyResponse& f, int j, int r, const Eigen::VectorXd& cells,
                              double lambda, int sign, const SolveContext& ctx,
                              const SteadyOptions& opts, bool* seed_real = nullptr) {
    const double kappa = std::pow(0.5, j - r);
    const double mu = std::pow(std::abs(lambda), kappa);
    const std::vector<double> coef = cell_poly(f, j, cells, lambda);
    const std::vector<double> scaled = rescale_poly(coef, mu, 2);
    const double y_prev = cells(j - 1) / (mu * mu);
    const double radicand = -(ctx.a1 * y_prev) / ctx.c2;
    if (seed_real) *seed_real = radicand > 0.0;
    const double mag = std::sqrt(std::abs(radicand));
    const double seed = sign * mag;
    return newton_1d(scaled, seed, opts.trust_factor * std::max(1.0, mag), opts.max_iterations);
}

Eigen::VectorXd branch_eigenvalues(const PolyResponse& f, const PolyResponse& d0f,
                                   const Eigen::VectorXd& cells, double lambda) {
    const int n = f.n;
    Eigen::VectorXd eigs(n + 1);
    // cell 0: derivative along the synchronous diagonal at the origin
    double sum = 0.0;
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(n + 1);
    for (int i = 0; i <= n; ++i) sum += poly_eval(poly_partial(f, i), zeros, lambda)(0);
    eigs(0) = sum;
    for (int j = 1; j <= n; ++j) {
        Eigen::VectorXd args(n + 1);
        for (int i = 0; i <= n; ++i) args(i) = cells(std::max(j - i, 0));
        eigs(j) = poly_eval(d0f, args, lambda)(0);
    }
    return eigs;
}

double branch_residual(const PolyResponse& f, const Eigen::VectorXd& cells, double lambda) {
    Eigen::VectorXd state(f.n + 1);
    state = cells;
    return eval_gamma(f, state, lambda).cwiseAbs().maxCoeff();
}

} // namespace

SteadyGenericity genericity_check_1d(const PolyResponse& f, double tol) {
    SteadyGenericity g;
    if (f.d != 1) {
        g.message = "cell dimension must be 1";
        return g;
    }
    if (!f.pinned_origin()) {
        g.message = "response does not vanish at the origin";
        return g;
    }
    const double a0 = linear_coefficient(f, 0, 0)(0, 0);
    if (std::abs(a0) > tol) {
        g.message = "slot-0 coefficient nonzero at lambda = 0";
        return g;
    }
    g.preconditions_ok = true;
    for (int i = 0; i <= f.n; ++i) g.coeff_sum += linear_coefficient(f, i, 0)(0, 0);
    g.a0_prime = linear_coefficient(f, 0, 1)(0, 0);
    g.a1 = f.n >= 1 ? linear_coefficient(f, 1, 0)(0, 0) : 0.0;
    // second derivative along slot 0 at the origin
    Monomial q = f.blank();
    q.state[0] = 2;
    const auto it = f.terms.find(q);
    g.second_deriv = 2.0 * (it != f.terms.end() ? it->second(0) : 0.0);
    g.cond_sum = std::abs(g.coeff_sum) > tol;
    g.cond_crossing = std::abs(g.a0_prime) > tol;
    g.cond_feed = std::abs(g.a1) > tol;
    g.cond_quadratic = std::abs(g.second_deriv) > tol;
    g.pass = g.cond_sum && g.cond_crossing && g.cond_feed && g.cond_quadratic;
    return g;
}

std::vector<SteadyBranch> solve_steady_branches(const PolyResponse& f,
                                                const std::vector<double>& lambda_abs_grid,
                                                const SteadyOptions& opts) {
    const SteadyGenericity g = genericity_check_1d(f, opts.genericity_tol);
    if (!g.pass)
        throw BranchError("solve_steady_branches: genericity check failed" +
                          (g.message.empty() ? std::string() : ": " + g.message));
    const int n = f.n;
    SolveContext ctx{g.a0_prime, g.a1, g.second_deriv / 2.0};
    const PolyResponse d0f = poly_partial(f, 0);
    const int side_main = sign_of(ctx.a0p * ctx.a1);
    const int interior_sign = -sign_of(ctx.a1 / ctx.c2);

    std::vector<SteadyBranch> branches;
    for (int r = 1; r <= n; ++r) {
        const bool terminal_only = (r == n);
        for (int variant = 0; variant < 2; ++variant) {
            SteadyBranch br;
            br.r = r;
            br.lambda_side = terminal_only ? (variant == 0 ? 1 : -1) : side_main;
            br.terminal_sign = terminal_only ? 0 : (variant == 0 ? 1 : -1);
            for (int i = 1; i <= n - r + 1; ++i) br.kappa_theory.push_back(std::pow(0.5, i - 1));

            for (const double la : lambda_abs_grid) {
                const double lambda = br.lambda_side * la;
                Eigen::VectorXd cells = Eigen::VectorXd::Zero(n + 1);
                const NewtonOutcome first = solve_first_cell(f, r, lambda, ctx, opts);
                if (!first.converged || first.left_trust)
                    throw BranchError("steady branch r=" + std::to_string(r) +
                                      ": cell solve failed at lambda=" + std::to_string(lambda));
                cells(r) = first.x * std::abs(lambda);
                for (int j = r + 1; j <= n; ++j) {
                    const int sgn = (j == n) ? br.terminal_sign : interior_sign;
                    bool seed_real = true;
                    const NewtonOutcome next =
                        solve_next_cell(f, j, r, cells, lambda, sgn, ctx, opts, &seed_real);
                    if (!seed_real || !next.converged || next.left_trust)
                        throw BranchError("steady branch r=" + std::to_string(r) + ": cell " +
                                          std::to_string(j) + " solve failed at lambda=" +
                                          std::to_string(lambda));
                    const double kappa = std::pow(0.5, j - r);
                    cells(j) = next.x * std::pow(std::abs(lambda), kappa);
                }
                SteadySample s;
                s.lambda = lambda;
                s.x = cells;
                s.residual = branch_residual(f, cells, lambda);
                if (s.residual > opts.newton_residual)
                    throw BranchError("steady branch r=" + std::to_string(r) + ": residual " +
                                      std::to_string(s.residual) + " at lambda=" +
                                      std::to_string(lambda));
                s.eigenvalues = branch_eigenvalues(f, d0f, cells, lambda);
                br.samples.push_back(std::move(s));
            }
            if (terminal_only && !br.samples.empty())
                br.terminal_sign = sign_of(br.samples.front().x(n));

            // per-cell scaling fits over the grid
            for (int j = r; j <= n; ++j) {
                std::vector<double> la, amp;
                for (const auto& s : br.samples) {
                    la.push_back(std::abs(s.lambda));
                    amp.push_back(std::abs(s.x(j)));
                }
                if (br.samples.size() >= 2) br.kappa_fit.push_back(fit_loglog(la, amp));
            }
            branches.push_back(std::move(br));
        }
    }
    return branches;
}

SteadyEigenReport steady_eigen_report(const SteadyBranch& branch, double rel_tol) {
    SteadyEigenReport rep;
    rep.kappa_theory = branch.kappa_theory;
    rep.hyperbolic = true;
    const int n = static_cast<int>(branch.samples.front().x.size()) - 1;
    for (const auto& s : branch.samples)
        for (int j = 0; j <= n; ++j)
            if (s.eigenvalues(j) == 0.0) rep.hyperbolic = false;
    rep.exponents_ok = true;
    for (int j = branch.r; j <= n; ++j) {
        std::vector<double> la, mag;
        for (const auto& s : branch.samples) {
            la.push_back(std::abs(s.lambda));
            mag.push_back(std::abs(s.eigenvalues(j)));
        }
        const FitResult fr = fit_loglog(la, mag);
        const double want = branch.kappa_theory[static_cast<std::size_t>(j - branch.r)];
        if (std::abs(fr.slope - want) > rel_tol * want) rep.exponents_ok = false;
        rep.eigen_exponent_fit.push_back(fr);
    }
    return rep;
}

bool probe_discarded_sign(const PolyResponse& f, int r, double lambda_abs,
                          const SteadyOptions& opts) {
    const SteadyGenericity g = genericity_check_1d(f, opts.genericity_tol);
    if (!g.pass) throw BranchError("probe_discarded_sign: genericity check failed");
    const int n = f.n;
    if (r > n - 2) throw ShapeError("probe_discarded_sign: needs r <= n - 2");
    SolveContext ctx{g.a0_prime, g.a1, g.second_deriv / 2.0};
    const int side = sign_of(ctx.a0p * ctx.a1);
    const int good_sign = -sign_of(ctx.a1 / ctx.c2);
    const double lambda = side * lambda_abs;

    Eigen::VectorXd cells = Eigen::VectorXd::Zero(n + 1);
    const NewtonOutcome first = solve_first_cell(f, r, lambda, ctx, opts);
    if (!first.converged) throw BranchError("probe_discarded_sign: first cell failed");
    cells(r) = first.x * std::abs(lambda);

    // take the discarded sign at cell r+1, then try to continue
    const NewtonOutcome wrong = solve_next_cell(f, r + 1, r, cells, lambda, -good_sign, ctx, opts);
    if (!wrong.converged) return true; // already stuck
    const double kappa = std::pow(0.5, 1);
    cells(r + 1) = wrong.x * std::pow(std::abs(lambda), kappa);
    bool seed_real = true;
    const NewtonOutcome next =
        solve_next_cell(f, r + 2, r, cells, lambda, good_sign, ctx, opts, &seed_real);
    return !seed_real || !next.converged || next.left_trust;
}

} // namespace ffchain
