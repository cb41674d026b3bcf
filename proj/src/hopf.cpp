#include "ffchain/hopf.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ffchain/network.hpp"

namespace ffchain {

namespace {

double kappa_hopf(int i) { return 0.5 * std::pow(3.0, -(i - 1)); }

std::vector<Complex> branch_cells(int n, int r, const std::vector<Complex>& B) {
    std::vector<Complex> z(static_cast<std::size_t>(n) + 1, Complex(0, 0));
    for (std::size_t i = 0; i < B.size(); ++i) z[static_cast<std::size_t>(r) + i] = B[i];
    return z;
}

std::vector<Complex> cell_args(const std::vector<Complex>& z, int n, int j) {
    std::vector<Complex> args(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) args[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(std::max(j - i, 0))];
    return args;
}

Eigen::Vector2cd block_eigenvalues_2x2(const Mat& m) {
    const double tr = m.trace();
    const double det = m.determinant();
    const Complex disc = std::sqrt(Complex(tr * tr / 4.0 - det, 0.0));
    return {Complex(tr / 2.0, 0.0) + disc, Complex(tr / 2.0, 0.0) - disc};
}

} // namespace

Mat linear_matrix_at(const ComplexPoly& f, int slot, double lambda) {
    Mat m = Mat::Zero(2, 2);
    double lp = 1.0;
    for (int e = 0; e <= 4; ++e) {
        Complex p, q;
        complex_linear(f, slot, e, p, q);
        if (p != 0.0 || q != 0.0) m += lp * realify(p, q);
        lp *= lambda;
    }
    return m;
}

HopfCoefficients extract_hopf_coefficients(const ComplexPoly& f, double tol) {
    if (!is_rotation_invariant(f))
        throw InvarianceError("extract_hopf_coefficients: response is not rotation invariant");
    HopfCoefficients c;
    Complex p0, q0;
    complex_linear(f, 0, 0, p0, q0);
    c.omega0 = p0.imag();
    c.rotation_form = std::abs(p0.real()) <= tol && std::abs(q0) <= tol && std::abs(c.omega0) > tol;

    Complex pl, ql;
    complex_linear(f, 0, 1, pl, ql);
    c.alpha = pl;
    Complex p1, q1;
    if (f.n >= 1) complex_linear(f, 1, 0, p1, q1);
    c.beta = p1;

    CMonomial cubic = f.blank();
    cubic.z[0] = 2;
    cubic.zc[0] = 1;
    const auto it = f.terms.find(cubic);
    c.C = it != f.terms.end() ? it->second : Complex(0, 0);

    c.coeff_sum0 = Mat::Zero(2, 2);
    for (int i = 0; i <= f.n; ++i) {
        Complex p, q;
        complex_linear(f, i, 0, p, q);
        c.coeff_sum0 += realify(p, q);
    }
    c.cond_persistence = std::abs(c.coeff_sum0.determinant()) > tol;
    c.cond_crossing = std::abs(c.alpha.real()) > tol;
    c.cond_nilpotency = std::abs(c.beta.real()) > tol;
    c.cond_nonlinearity = std::abs(c.C.real()) > tol;
    c.pass = c.rotation_form && c.cond_persistence && c.cond_crossing && c.cond_nilpotency &&
             c.cond_nonlinearity;
    return c;
}

int hopf_lambda_side(const HopfCoefficients& c) {
    return (-c.C.real() / c.alpha.real()) >= 0.0 ? 1 : -1;
}

double relative_equilibrium_residual(const ComplexPoly& f, int r, const std::vector<Complex>& B,
                                     double omega, double lambda) {
    const std::vector<Complex> z = branch_cells(f.n, r, B);
    double worst = 0.0;
    for (int j = 0; j <= f.n; ++j) {
        const Complex resid =
            cpoly_eval(f, cell_args(z, f.n, j), lambda) - Complex(0, omega) * z[static_cast<std::size_t>(j)];
        worst = std::max(worst, std::abs(resid));
    }
    return worst;
}

double gauge_fix(std::vector<Complex>& B) {
    if (B.empty() || B[0] == Complex(0, 0)) return 0.0;
    const double phase = -std::arg(B[0]);
    const Complex rot = std::polar(1.0, phase);
    for (auto& b : B) b *= rot;
    B[0] = Complex(std::abs(B[0]), 0.0); // kill rounding in the gauge slot
    return phase;
}

namespace {

struct LadderContext {
    const ComplexPoly& f;
    const ComplexPoly& fz0;  ///< d/dZ_0
    const ComplexPoly& fzc0; ///< d/d conj(Z_0)
    const HopfCoefficients& coeffs;
    const HopfOptions& opts;
};

/// First oscillating cell: solve Re[f(rho,0,...)/rho] = 0 in y = rho/mu with
/// mu = |lambda|^{1/2}, then read the frequency off the imaginary part.
void solve_first_cell(const LadderContext& ctx, double lambda, double& rho, double& omega) {
    const double mu = std::sqrt(std::abs(lambda));
    const int n = ctx.f.n;
    const double seed = std::sqrt(std::abs(ctx.coeffs.alpha.real() / ctx.coeffs.C.real()));
    double y = seed;
    std::vector<Complex> args(static_cast<std::size_t>(n) + 1, Complex(0, 0));
    bool converged = false;
    for (int it = 0; it < ctx.opts.max_iterations; ++it) {
        args[0] = Complex(mu * y, 0.0);
        const double val = cpoly_eval(ctx.f, args, lambda).real() / (mu * mu * mu);
        const double dval =
            (cpoly_eval(ctx.fz0, args, lambda) + cpoly_eval(ctx.fzc0, args, lambda)).real() /
            (mu * mu);
        if (dval == 0.0) break;
        const double step = val / dval;
        y -= step;
        if (std::abs(y - seed) > ctx.opts.trust_factor * std::max(1.0, seed))
            throw BranchError("hopf ladder: first cell left trust region at lambda=" +
                              std::to_string(lambda));
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(y))) {
            converged = true;
            break;
        }
    }
    if (!converged || !(y > 0.0))
        throw BranchError("hopf ladder: first cell failed at lambda=" + std::to_string(lambda));
    rho = mu * y;
    args[0] = Complex(rho, 0.0);
    omega = (cpoly_eval(ctx.f, args, lambda) / rho).imag();
}

/// Downstream cell k >= 2: rescaled 2D Newton on
/// f(B, B_{k-1}, ..., B_1, 0, ...) - i omega B = 0, seeded from the cubic
/// balance C |z|^2 z = -beta B_{k-1}.
Complex solve_down_cell(const LadderContext& ctx, int k, const std::vector<Complex>& B,
                        double omega, double lambda) {
    const int n = ctx.f.n;
    const double mu = std::pow(std::abs(lambda), kappa_hopf(k));
    const double mu3 = mu * mu * mu;
    const Complex prev = B[static_cast<std::size_t>(k) - 2];
    const Complex target = -ctx.coeffs.beta * prev / ctx.coeffs.C;
    const double mag = std::cbrt(std::abs(target));
    const Complex seed = std::polar(mag, std::arg(target)) / mu;

    std::vector<Complex> z(static_cast<std::size_t>(n) + 1, Complex(0, 0));
    for (int j = 1; j < k; ++j) z[static_cast<std::size_t>(j)] = B[static_cast<std::size_t>(j) - 1];

    Complex w = seed;
    bool converged = false;
    for (int it = 0; it < ctx.opts.max_iterations; ++it) {
        z[static_cast<std::size_t>(k)] = mu * w;
        const std::vector<Complex> args = cell_args(z, n, k);
        const Complex val = (cpoly_eval(ctx.f, args, lambda) - Complex(0, omega) * z[static_cast<std::size_t>(k)]) / mu3;
        const Complex hz = (cpoly_eval(ctx.fz0, args, lambda) - Complex(0, omega)) / (mu * mu);
        const Complex hzb = cpoly_eval(ctx.fzc0, args, lambda) / (mu * mu);
        Mat jac(2, 2);
        jac << (hz + hzb).real(), -(hz - hzb).imag(), (hz + hzb).imag(), (hz - hzb).real();
        Eigen::Vector2d rhs(-val.real(), -val.imag());
        const Eigen::Vector2d step = jac.fullPivLu().solve(rhs);
        w += Complex(step(0), step(1));
        if (std::abs(w - seed) > ctx.opts.trust_factor * std::max(1.0, std::abs(seed)))
            throw BranchError("hopf ladder: cell " + std::to_string(k) +
                              " left trust region at lambda=" + std::to_string(lambda));
        if (step.norm() <= 1e-15 * std::max(1.0, std::abs(w))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw BranchError("hopf ladder: cell " + std::to_string(k) +
                          " did not converge at lambda=" + std::to_string(lambda));
    return mu * w;
}

/// One Newton pass on the coupled system of all cells with the first
/// amplitude gauge-fixed real. Unknowns: rho, omega, Re/Im of B_2..B_n.
void polish_system(const ComplexPoly& f, std::vector<ComplexPoly> const& fz,
                   std::vector<ComplexPoly> const& fzc, std::vector<Complex>& B, double& omega,
                   double lambda, const HopfOptions& opts) {
    const int n = f.n;
    const int m = static_cast<int>(B.size());
    const int dim = 2 * m;
    Eigen::VectorXd scale_col(dim);
    scale_col(0) = std::max(std::abs(B[0]), 1e-300);
    scale_col(1) = 1.0;
    for (int j = 2; j <= m; ++j) {
        const double s = std::max(std::abs(B[static_cast<std::size_t>(j) - 1]), 1e-300);
        scale_col(2 * j - 2) = s;
        scale_col(2 * j - 1) = s;
    }

    for (int it = 0; it < opts.max_iterations; ++it) {
        const std::vector<Complex> z = branch_cells(n, 1, B);
        Eigen::VectorXd resid(dim);
        Mat jac = Mat::Zero(dim, dim);
        for (int k = 1; k <= m; ++k) {
            const std::vector<Complex> args = cell_args(z, n, k);
            const Complex ck = cpoly_eval(f, args, lambda) - Complex(0, omega) * z[static_cast<std::size_t>(k)];
            resid(2 * k - 2) = ck.real();
            resid(2 * k - 1) = ck.imag();
            // omega column
            const Complex dw = Complex(0, -1) * z[static_cast<std::size_t>(k)];
            jac(2 * k - 2, 1) = dw.real();
            jac(2 * k - 1, 1) = dw.imag();
            for (int j = 1; j <= k; ++j) {
                const int slot = k - j;
                Complex hz = cpoly_eval(fz[static_cast<std::size_t>(slot)], args, lambda);
                const Complex hzb = cpoly_eval(fzc[static_cast<std::size_t>(slot)], args, lambda);
                if (j == k) hz -= Complex(0, omega);
                if (j == 1) {
                    const Complex col = hz + hzb; // B_1 is real
                    jac(2 * k - 2, 0) = col.real();
                    jac(2 * k - 1, 0) = col.imag();
                } else {
                    jac(2 * k - 2, 2 * j - 2) = (hz + hzb).real();
                    jac(2 * k - 2, 2 * j - 1) = -(hz - hzb).imag();
                    jac(2 * k - 1, 2 * j - 2) = (hz + hzb).imag();
                    jac(2 * k - 1, 2 * j - 1) = (hz - hzb).real();
                }
            }
        }
        if (resid.cwiseAbs().maxCoeff() <= 0.01 * opts.newton_residual) return;
        Mat scaled = jac;
        for (int c = 0; c < dim; ++c) scaled.col(c) *= scale_col(c);
        const Eigen::VectorXd y = scaled.fullPivLu().solve(-resid);
        const Eigen::VectorXd delta = scale_col.asDiagonal() * y;
        B[0] += Complex(delta(0), 0.0);
        omega += delta(1);
        for (int j = 2; j <= m; ++j)
            B[static_cast<std::size_t>(j) - 1] += Complex(delta(2 * j - 2), delta(2 * j - 1));
        if (delta.cwiseAbs().maxCoeff() <= 1e-16) return;
    }
}

} // namespace

StabilityBlocks stability_blocks(const ComplexPoly& f, int r, const std::vector<Complex>& B,
                                 double lambda) {
    StabilityBlocks out;
    const int n = f.n;
    Mat sum = Mat::Zero(2, 2);
    for (int i = 0; i <= n; ++i) sum += linear_matrix_at(f, i, lambda);
    out.blocks.push_back(sum);
    const Mat a0 = linear_matrix_at(f, 0, lambda);
    for (int i = 1; i < r; ++i) out.blocks.push_back(a0);
    Complex p0, q0;
    complex_linear(f, 0, 0, p0, q0);
    CMonomial cubic = f.blank();
    cubic.z[0] = 2;
    cubic.zc[0] = 1;
    const auto it = f.terms.find(cubic);
    const Complex C = it != f.terms.end() ? it->second : Complex(0, 0);
    for (const Complex& b : B) {
        const double m2 = std::norm(b);
        out.blocks.push_back(realify(2.0 * C * m2, C * b * b));
    }
    out.stable = true;
    out.hyperbolic = true;
    for (const Mat& blk : out.blocks) {
        const Eigen::Vector2cd ev = block_eigenvalues_2x2(blk);
        for (int i = 0; i < 2; ++i) {
            out.eigenvalues.push_back(ev(i));
            if (!(ev(i).real() < 0.0)) out.stable = false;
            if (ev(i).real() == 0.0) out.hyperbolic = false;
        }
    }
    return out;
}

HopfBranch solve_hopf_branch(const ComplexPoly& f, const std::vector<double>& lambda_abs_grid,
                             const HopfOptions& opts) {
    const HopfCoefficients coeffs = extract_hopf_coefficients(f, opts.genericity_tol);
    if (!coeffs.pass) throw BranchError("solve_hopf_branch: genericity conditions not met");
    const int n = f.n;
    if (n < 1) throw ShapeError("solve_hopf_branch: chain needs at least two cells");

    HopfBranch br;
    br.n = n;
    br.r = 1;
    br.lambda_side = opts.force_lambda_side != 0 ? opts.force_lambda_side : hopf_lambda_side(coeffs);
    for (int i = 1; i <= n; ++i) br.kappa_theory.push_back(kappa_hopf(i));

    const ComplexPoly fz0 = cpoly_partial_z(f, 0);
    const ComplexPoly fzc0 = cpoly_partial_zc(f, 0);
    std::vector<ComplexPoly> fz, fzc;
    for (int s = 0; s <= n; ++s) {
        fz.push_back(cpoly_partial_z(f, s));
        fzc.push_back(cpoly_partial_zc(f, s));
    }
    const LadderContext ctx{f, fz0, fzc0, coeffs, opts};

    for (const double la : lambda_abs_grid) {
        const double lambda = br.lambda_side * la;
        if (coeffs.alpha.real() * lambda / coeffs.C.real() >= 0.0)
            throw SideError("solve_hopf_branch: lambda on the inadmissible side");
        HopfSample s;
        s.lambda = lambda;
        double rho = 0.0, omega = 0.0;
        solve_first_cell(ctx, lambda, rho, omega);
        std::vector<Complex> B{Complex(rho, 0.0)};
        for (int k = 2; k <= n; ++k) B.push_back(solve_down_cell(ctx, k, B, omega, lambda));
        s.B_consecutive = B;
        s.omega_consecutive = omega;
        s.residual_consecutive = relative_equilibrium_residual(f, 1, B, omega, lambda);

        if (opts.polish) polish_system(f, fz, fzc, B, omega, lambda, opts);
        gauge_fix(B);
        s.B = B;
        s.omega = omega;
        s.residual = relative_equilibrium_residual(f, 1, B, omega, lambda);
        if (s.residual > opts.newton_residual)
            throw BranchError("solve_hopf_branch: residual " + std::to_string(s.residual) +
                              " at lambda=" + std::to_string(lambda));

        const StabilityBlocks blocks = stability_blocks(f, 1, B, lambda);
        s.block_eigenvalues = blocks.eigenvalues;
        s.stable = blocks.stable;
        s.hyperbolic = blocks.hyperbolic;
        br.samples.push_back(std::move(s));
    }

    for (int i = 1; i <= n; ++i) {
        std::vector<double> la, amp;
        for (const auto& s : br.samples) {
            la.push_back(std::abs(s.lambda));
            amp.push_back(std::abs(s.B[static_cast<std::size_t>(i) - 1]));
        }
        if (br.samples.size() >= 2) br.kappa_fit.push_back(fit_loglog(la, amp));
    }
    if (br.samples.size() >= 2) {
        std::vector<double> lam, om;
        for (const auto& s : br.samples) {
            lam.push_back(s.lambda);
            om.push_back(s.omega);
        }
        br.omega_fit = fit_linear(lam, om);
    }
    br.stable = !br.samples.empty();
    for (const auto& s : br.samples) br.stable = br.stable && s.stable;
    return br;
}

HopfBranch branch_family(const HopfBranch& base, int r, const ComplexPoly& f,
                         double residual_tol) {
    if (r < 1 || r > base.n) throw ShapeError("branch_family: r out of range");
    HopfBranch br;
    br.n = base.n;
    br.r = r;
    br.lambda_side = base.lambda_side;
    const int m = base.n - r + 1;
    for (int i = 1; i <= m; ++i) br.kappa_theory.push_back(kappa_hopf(i));
    for (const auto& s0 : base.samples) {
        HopfSample s;
        s.lambda = s0.lambda;
        s.omega = s0.omega;
        s.omega_consecutive = s0.omega_consecutive;
        s.B.assign(s0.B.begin(), s0.B.begin() + m);
        s.B_consecutive.assign(s0.B_consecutive.begin(), s0.B_consecutive.begin() + m);
        s.residual = relative_equilibrium_residual(f, r, s.B, s.omega, s.lambda);
        s.residual_consecutive =
            relative_equilibrium_residual(f, r, s.B_consecutive, s.omega_consecutive, s.lambda);
        if (s.residual > residual_tol)
            throw BranchError("branch_family: residual " + std::to_string(s.residual) +
                              " above tolerance at lambda=" + std::to_string(s.lambda));
        const StabilityBlocks blocks = stability_blocks(f, r, s.B, s.lambda);
        s.block_eigenvalues = blocks.eigenvalues;
        s.stable = blocks.stable;
        s.hyperbolic = blocks.hyperbolic;
        br.samples.push_back(std::move(s));
    }
    for (int i = 1; i <= m; ++i) {
        std::vector<double> la, amp;
        for (const auto& s : br.samples) {
            la.push_back(std::abs(s.lambda));
            amp.push_back(std::abs(s.B[static_cast<std::size_t>(i) - 1]));
        }
        if (br.samples.size() >= 2) br.kappa_fit.push_back(fit_loglog(la, amp));
    }
    if (br.samples.size() >= 2) {
        std::vector<double> lam, om;
        for (const auto& s : br.samples) {
            lam.push_back(s.lambda);
            om.push_back(s.omega);
        }
        br.omega_fit = fit_linear(lam, om);
    }
    br.stable = !br.samples.empty();
    for (const auto& s : br.samples) br.stable = br.stable && s.stable;
    return br;
}

} // namespace ffchain
