#include <doctest.h>

#include "ffchain/hopf.hpp"
#include "ffchain/network.hpp"
#include "ffchain/sim.hpp"
#include "ffchain/steady.hpp"
#include "test_helpers.hpp"

using namespace ffchain;

namespace {

/// Single planar cell rotating at unit speed.
PolyResponse rotation_cell() {
    PolyResponse f(0, 2);
    Mat rot(2, 2);
    rot << 0, -1, 1, 0;
    f.add_linear(0, rot, 0);
    return f;
}

Eigen::VectorXd hopf_seed(const HopfSample& s, int n, double factor) {
    Eigen::VectorXd seed = Eigen::VectorXd::Zero((n + 1) * 2);
    for (std::size_t i = 0; i < s.B.size(); ++i) {
        const Complex b = factor * s.B[i];
        const int cell = n - static_cast<int>(s.B.size()) + 1 + static_cast<int>(i);
        seed(2 * cell) = b.real();
        seed(2 * cell + 1) = b.imag();
    }
    return seed;
}

} // namespace

TEST_SUITE("sim") {

TEST_CASE("integrator basics") {
    SUBCASE("zero field keeps the state constant") {
        PolyResponse f(1, 1);
        Eigen::VectorXd x0(2);
        x0 << 0.3, -0.7;
        const Trajectory tr = integrate(f, x0, 0.0, 0.0, 5.0, 1e-10);
        CHECK((tr.states.back() - x0).norm() == 0.0);
        CHECK(tr.stats.max_error_estimate <= 1.0);
        for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
    }
    SUBCASE("unit rotation returns after one turn") {
        Eigen::VectorXd x0(2);
        x0 << 1.0, 0.0;
        const Trajectory tr = integrate(rotation_cell(), x0, 0.0, 0.0, 2 * M_PI, 1e-12);
        CHECK((tr.states.back() - x0).norm() <= 1e-9);
    }
    SUBCASE("radius drift over a thousand turns stays below 1e-8") {
        Eigen::VectorXd x0(2);
        x0 << 1.0, 0.0;
        const CompiledChainRhs rhs(rotation_cell(), 0.0);
        OdeOptions opts;
        opts.abs_tol = opts.rel_tol = 1e-12;
        Eigen::VectorXd y = x0;
        integrate_adaptive(
            [&rhs](double t, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) { rhs(t, yy, dy); },
            0.0, 1000 * 2 * M_PI, y, opts);
        CHECK(std::abs(y.norm() - 1.0) <= 1e-8);
    }
    SUBCASE("tolerance outside the supported window is rejected") {
        PolyResponse f(0, 1);
        const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
        CHECK_THROWS_AS(integrate(f, x0, 0.0, 0.0, 1.0, 1e-3), std::invalid_argument);
        CHECK_THROWS_AS(integrate(f, x0, 0.0, 0.0, 1.0, 1e-14), std::invalid_argument);
    }
    SUBCASE("finite-time blowup raises the stiffness error") {
        PolyResponse f(0, 1);
        Monomial m = f.blank();
        m.state[0] = 2;
        f.add_term(m, Eigen::VectorXd::Constant(1, 1.0));
        Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 1.0);
        CHECK_THROWS_AS(integrate(f, x0, 0.0, 0.0, 2.0, 1e-10), StiffnessError);
    }
}

TEST_CASE("single-cell limit cycle radius") {
    // planar normal form with unit crossing speed and cubic damping
    ComplexPoly f(0);
    f.add_linear(0, Complex(0, 1), 0.0, 0);
    f.add_linear(0, Complex(1, 0), 0.0, 1);
    CMonomial cubic = f.blank();
    cubic.z[0] = 2;
    cubic.zc[0] = 1;
    f.add_term(cubic, Complex(-1, 0));
    const PolyResponse fr = to_real(f);
    Eigen::VectorXd seed(2);
    seed << 0.05, 0.0;
    MeasureOptions opts;
    opts.tol = 1e-12;
    opts.alpha1 = 1.0;
    opts.omega_hint = 1.0;
    opts.first_cell = 0;
    const AmplitudeRow row = measure_orbit(fr, 0.01, seed, opts);
    CHECK(row.amplitude(0) == doctest::Approx(0.1).epsilon(1e-4));
    CHECK(row.omega == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("measured amplitudes match the ladder solver") {
    const ComplexPoly fbar =
        testing::hopf_reference(2, 1.0, Complex(1, 1), Complex(1, 0), Complex(-1, 0),
                                Complex(-2, 0));
    const PolyResponse f = to_real(fbar);
    const HopfBranch br = solve_hopf_branch(fbar, {1e-3});
    const HopfSample& sol = br.samples.front();
    MeasureOptions opts;
    opts.tol = 1e-10;
    opts.alpha1 = 1.0;
    opts.omega_hint = 1.0;
    const AmplitudeRow row = measure_orbit(f, sol.lambda, hopf_seed(sol, 2, 1.1), opts);
    for (int c = 1; c <= 2; ++c) {
        const double predicted = std::abs(sol.B[static_cast<std::size_t>(c) - 1]);
        CHECK(std::abs(row.amplitude(c) - predicted) <= 0.01 * predicted);
    }
    CHECK(std::abs(row.omega - sol.omega) <= 1e-4);
    // half peak-to-peak of a circular orbit agrees with the modulus
    CHECK(row.half_peak(1) == doctest::Approx(row.amplitude(1)).epsilon(1e-3));
}

TEST_CASE("leading zero cells are invariant") {
    const ComplexPoly fbar = testing::hopf_reference_n3();
    const PolyResponse f = to_real(fbar);
    const HopfBranch base = solve_hopf_branch(fbar, {1e-3});
    const HopfBranch b2 = branch_family(base, 2, fbar);
    const HopfSample& sol = b2.samples.front();
    MeasureOptions opts;
    opts.tol = 1e-10;
    opts.alpha1 = 1.0;
    opts.omega_hint = 1.0;
    opts.transient_time = 2000.0; // the r = 2 state is unstable only within cell 1
    opts.first_cell = 2;
    const AmplitudeRow row = measure_orbit(f, sol.lambda, hopf_seed(sol, 3, 1.1), opts);
    CHECK(row.amplitude(0) <= 1e-8);
    CHECK(row.amplitude(1) <= 1e-8);
    CHECK(row.amplitude(2) > 1e-3);
}

TEST_CASE("wrong parameter side has no orbit") {
    const ComplexPoly fbar =
        testing::hopf_reference(1, 1.0, Complex(1, 1), Complex(1, 0), Complex(-1, 0),
                                Complex(0, 0));
    const PolyResponse f = to_real(fbar);
    Eigen::VectorXd seed(4);
    seed << 0.0, 0.0, 0.02, 0.0;
    MeasureOptions opts;
    opts.tol = 1e-10;
    opts.alpha1 = 1.0;
    opts.omega_hint = 1.0;
    CHECK_THROWS_AS(measure_orbit(f, -1e-3, seed, opts), NoOrbitError);
}

TEST_CASE("power-law fitting") {
    SUBCASE("exact synthetic law is recovered to machine precision") {
        AmplitudeTable table;
        table.n = 0;
        table.d = 1;
        for (int i = 0; i < 10; ++i) {
            AmplitudeRow r;
            r.lambda = std::pow(10.0, -8.0 + i * 0.5);
            r.amplitude = Eigen::VectorXd::Constant(1, std::pow(r.lambda, 1.0 / 6));
            r.half_peak = r.amplitude;
            table.rows.push_back(r);
        }
        const SweepFit fit = sweep_and_fit(table);
        REQUIRE(fit.fits.size() == 1);
        CHECK(std::abs(fit.fits[0].fit.slope - 1.0 / 6) <= 1e-12);
        CHECK(fit.fits[0].fit.r2 == doctest::Approx(1.0));
        CHECK(fit.fits[0].clean);
        CHECK(fit.fits[0].fit.slope_stderr <= 1e-12);
    }
    SUBCASE("grid guards") {
        AmplitudeTable table;
        table.n = 0;
        table.d = 1;
        for (int i = 0; i < 4; ++i) {
            AmplitudeRow r;
            r.lambda = std::pow(10.0, -6.0 + i);
            r.amplitude = Eigen::VectorXd::Constant(1, r.lambda);
            table.rows.push_back(r);
        }
        CHECK_THROWS_AS(sweep_and_fit(table), FitError); // too few points
        AmplitudeTable narrow;
        narrow.n = 0;
        narrow.d = 1;
        for (int i = 0; i < 9; ++i) {
            AmplitudeRow r;
            r.lambda = 1e-6 * (1 + i * 0.1); // far below three decades
            r.amplitude = Eigen::VectorXd::Constant(1, r.lambda);
            narrow.rows.push_back(r);
        }
        CHECK_THROWS_AS(sweep_and_fit(narrow), FitError);
    }
    SUBCASE("zero cells are skipped") {
        AmplitudeTable table;
        table.n = 1;
        table.d = 1;
        for (int i = 0; i < 9; ++i) {
            AmplitudeRow r;
            r.lambda = std::pow(10.0, -7.0 + i * 0.5);
            r.amplitude = Eigen::VectorXd::Zero(2);
            r.amplitude(1) = std::sqrt(r.lambda);
            table.rows.push_back(r);
        }
        const SweepFit fit = sweep_and_fit(table);
        REQUIRE(fit.cells.size() == 1);
        CHECK(fit.cells[0] == 1);
        CHECK(std::abs(fit.fits[0].fit.slope - 0.5) <= 1e-12);
    }
}

TEST_CASE("steady branch samples feed the fitter") {
    const PolyResponse f = testing::steady_reference_n3();
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i)
        grid.push_back(std::exp(std::log(1e-8) * (1 - i / 19.0) + std::log(1e-4) * (i / 19.0)));
    const auto branches = solve_steady_branches(f, grid);
    for (const auto& br : branches) {
        if (br.r != 1 || br.terminal_sign != 1) continue;
        AmplitudeTable table;
        table.n = 3;
        table.d = 1;
        for (const auto& s : br.samples) {
            AmplitudeRow row;
            row.lambda = s.lambda;
            row.amplitude = s.x.cwiseAbs();
            table.rows.push_back(row);
        }
        const SweepFit fit = sweep_and_fit(table);
        REQUIRE(fit.cells == std::vector<int>{1, 2, 3});
        CHECK(fit.fits[0].fit.slope == doctest::Approx(1.0).epsilon(0.02));
        CHECK(fit.fits[1].fit.slope == doctest::Approx(0.5).epsilon(0.02));
        CHECK(fit.fits[2].fit.slope == doctest::Approx(0.25).epsilon(0.02));
        for (const auto& pw : fit.fits) CHECK(pw.clean);
    }
}

TEST_CASE("stability verdicts are visible in simulation") {
    const ComplexPoly fbar = testing::hopf_reference_n3();
    const PolyResponse f = to_real(fbar);
    const double lambda = 1e-2;
    const HopfBranch base = solve_hopf_branch(fbar, {lambda});
    const HopfSample& sol = base.samples.front();
    const double period = 2 * M_PI / sol.omega;

    SUBCASE("attracting branch pulls back a radial kick") {
        MeasureOptions opts;
        opts.tol = 1e-10;
        opts.alpha1 = 1.0;
        opts.omega_hint = sol.omega;
        opts.transient_time = 100 * period;
        const AmplitudeRow row = measure_orbit(f, lambda, hopf_seed(sol, 3, 1.01), opts);
        for (int c = 1; c <= 3; ++c) {
            const double predicted = std::abs(sol.B[static_cast<std::size_t>(c) - 1]);
            CHECK(std::abs(row.amplitude(c) - predicted) <= 1e-3 * predicted);
        }
    }
    SUBCASE("repelling branch amplifies a kick in the pinned cell") {
        const HopfBranch b2 = branch_family(base, 2, fbar);
        const HopfSample& s2 = b2.samples.front();
        Eigen::VectorXd seed = hopf_seed(s2, 3, 1.0);
        seed(2) = 1e-4; // cell 1 perturbation off the invariant subspace
        const CompiledChainRhs rhs(f, lambda);
        OdeOptions oo;
        oo.abs_tol = oo.rel_tol = 1e-10;
        Eigen::VectorXd y = seed;
        integrate_adaptive(
            [&rhs](double t, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) { rhs(t, yy, dy); },
            0.0, 100 * period, y, oo);
        CHECK(y.segment(2, 2).norm() > 10 * 1e-4);
    }
}

TEST_CASE("small symmetry-breaking terms leave the orbit in place") {
    const ComplexPoly fbar =
        testing::hopf_reference(2, 1.0, Complex(1, 1), Complex(1, 0), Complex(-1, 0),
                                Complex(-2, 0));
    const PolyResponse f = to_real(fbar);
    ComplexPoly perturbed = fbar;
    CMonomial bad = perturbed.blank();
    bad.zc[0] = 2;
    perturbed.add_term(bad, Complex(1e-3, 0));
    CHECK_FALSE(is_rotation_invariant(perturbed));
    const PolyResponse fp = to_real(perturbed);

    const HopfBranch br = solve_hopf_branch(fbar, {1e-3});
    const HopfSample& sol = br.samples.front();
    MeasureOptions opts;
    opts.tol = 1e-10;
    opts.alpha1 = 1.0;
    opts.omega_hint = 1.0;
    const AmplitudeRow clean = measure_orbit(f, sol.lambda, hopf_seed(sol, 2, 1.1), opts);
    const AmplitudeRow rough = measure_orbit(fp, sol.lambda, hopf_seed(sol, 2, 1.1), opts);
    for (int c = 1; c <= 2; ++c) {
        CHECK(std::abs(rough.amplitude(c) - clean.amplitude(c)) <= 0.01 * clean.amplitude(c));
    }
}

TEST_CASE("shifted trajectories still solve the equations") {
    const ComplexPoly fbar = testing::hopf_reference_n3();
    const PolyResponse f = to_real(fbar);
    const double lambda = 1e-2;
    const HopfBranch base = solve_hopf_branch(fbar, {lambda});
    const Eigen::VectorXd seed = hopf_seed(base.samples.front(), 3, 1.0);

    const CompiledChainRhs rhs(f, lambda);
    OdeOptions oo;
    oo.abs_tol = oo.rel_tol = 1e-12;
    DensePath path;
    Eigen::VectorXd y = seed;
    integrate_adaptive(
        [&rhs](double t, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) { rhs(t, yy, dy); }, 0.0,
        30.0, y, oo, [&path](const StepRecord& r) { path.push(r); });

    // five-point numerical derivative of the shifted states vs the field
    const double h = 1e-2;
    double worst = 0.0;
    for (double t = 5.0; t <= 25.0; t += 1.7) {
        auto shifted = [&](double tt) { return shift_state(path.eval(tt), 3, 2); };
        const Eigen::VectorXd deriv =
            (-shifted(t + 2 * h) + 8 * shifted(t + h) - 8 * shifted(t - h) + shifted(t - 2 * h)) /
            (12 * h);
        const Eigen::VectorXd field = eval_gamma(f, shifted(t), lambda);
        worst = std::max(worst, (deriv - field).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("parallel sweep keeps grid order and values") {
    const ComplexPoly fbar =
        testing::hopf_reference(1, 1.0, Complex(1, 1), Complex(1, 0), Complex(-1, 0),
                                Complex(0, 0));
    const PolyResponse f = to_real(fbar);
    const std::vector<double> grid{1e-3, 2e-3, 4e-3, 8e-3};
    const HopfBranch br = solve_hopf_branch(fbar, grid);
    std::vector<double> lambdas;
    std::vector<Eigen::VectorXd> seeds;
    for (const auto& s : br.samples) {
        lambdas.push_back(s.lambda);
        seeds.push_back(hopf_seed(s, 1, 1.1));
    }
    MeasureOptions opts;
    opts.tol = 1e-9;
    opts.alpha1 = 1.0;
    opts.omega_hint = 1.0;
    const AmplitudeTable serial = simulate_sweep(f, lambdas, seeds, opts, 1);
    const AmplitudeTable parallel = simulate_sweep(f, lambdas, seeds, opts, 4);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].lambda == parallel.rows[i].lambda);
        CHECK((serial.rows[i].amplitude - parallel.rows[i].amplitude).norm() == 0.0);
    }
}

} // TEST_SUITE
