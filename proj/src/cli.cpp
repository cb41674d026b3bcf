#include "ffchain/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ffchain/config.hpp"
#include "ffchain/format.hpp"
#include "ffchain/network.hpp"
#include "ffchain/normform.hpp"
#include "ffchain/output.hpp"

namespace ffchain {

namespace {

struct GenericityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    double lambda_min = 0.0, lambda_max = 0.0;
    int lambda_points = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool json_stdout = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_config = true) {
    auto* copt = cmd->add_option("--config", a.config_path, "configuration file");
    if (needs_config) copt->required();
    cmd->add_option("--out", a.out_dir, "output directory (overrides config)");
    cmd->add_option("--lambda-min", a.lambda_min, "grid override");
    cmd->add_option("--lambda-max", a.lambda_max, "grid override");
    cmd->add_option("--lambda-points", a.lambda_points, "grid override");
    cmd->add_option("--tol", a.tol, "tolerance override");
    cmd->add_option("--seed", a.seed, "seed override")->each([&a](const std::string&) {
        a.seed_set = true;
    });
    cmd->add_flag("--json", a.json_stdout, "print the summary JSON to stdout");
    cmd->add_flag("--quiet", a.quiet, "suppress progress lines");
}

RunConfig load_config(const CommonArgs& a, std::string& text) {
    try {
        text = read_file(a.config_path);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
    RunConfig cfg = parse_config(text);
    if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
    if (a.lambda_min > 0) cfg.lambda_min = a.lambda_min;
    if (a.lambda_max > 0) cfg.lambda_max = a.lambda_max;
    if (a.lambda_points > 0) cfg.lambda_points = a.lambda_points;
    if (a.tol > 0) cfg.tol = a.tol;
    if (a.seed_set) cfg.seed = a.seed;
    return cfg;
}

int thread_cap() {
    if (const char* env = std::getenv("FFCHAIN_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

Json json_mat(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Json json_ring(const RingElement& e) {
    Json coeffs = Json::array();
    for (const Mat& c : e.coeffs) coeffs.push_back(json_mat(c));
    return Json{{"n", e.n}, {"d", e.d}, {"coeffs", coeffs}};
}

Json json_complex(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

void emit(const CommonArgs& a, const Json& summary, const std::string& line) {
    if (a.json_stdout)
        std::cout << summary.dump(2) << "\n";
    else if (!a.quiet)
        std::cout << line << "\n";
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::string& config_text,
                    std::chrono::steady_clock::time_point start) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file(cfg.out_dir + "/manifest.json",
               make_manifest(command, config_text, cfg.seed, wall).dump(2) + "\n");
}

// ---------------------------------------------------------------------- ring

int cmd_verify_ring(int n, int dim, int trials, std::uint64_t seed, const CommonArgs& a) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_n(1, n), pick_d(1, dim);
    double hom = 0.0, assoc = 0.0, jacobi = 0.0;
    bool filtration_ok = true, nilpotent_ok = true;
    for (int t = 0; t < trials; ++t) {
        const int nn = pick_n(rng), dd = pick_d(rng);
        const RingElement A = random_ring_element(nn, dd, rng);
        const RingElement B = random_ring_element(nn, dd, rng);
        const RingElement C = random_ring_element(nn, dd, rng);

        const Mat lhs = to_matrix(ring_mul(A, B));
        const Mat rhs = to_matrix(A) * to_matrix(B);
        const double scale = std::max(1.0, to_matrix(A).norm() * to_matrix(B).norm());
        hom = std::max(hom, (lhs - rhs).cwiseAbs().maxCoeff() / scale);

        const RingElement ab_c = ring_mul(ring_mul(A, B), C);
        const RingElement a_bc = ring_mul(A, ring_mul(B, C));
        assoc = std::max(assoc, (ab_c - a_bc).max_abs() /
                                    std::max(1.0, A.max_abs() * B.max_abs() * C.max_abs()));

        const RingElement jac = ring_bracket(A, ring_bracket(B, C)) +
                                ring_bracket(B, ring_bracket(C, A)) +
                                ring_bracket(C, ring_bracket(A, B));
        jacobi = std::max(jacobi, jac.max_abs() / std::max(1.0, A.max_abs() * B.max_abs() *
                                                                    C.max_abs()));

        const int da = filtration_degree(A), db = filtration_degree(B);
        const int dab = filtration_degree(ring_mul(A, B));
        if (dab < std::min(da + db, nn)) filtration_ok = false;

        // nilpotent basis elements: power ceil(n/i) of b*mu_i vanishes exactly
        for (int i = 1; i <= nn - 1; ++i) {
            const RingElement g = RingElement::mu_term(random_mat(dd, rng), i, nn);
            RingElement p = g;
            const int reps = (nn + i - 1) / i;
            for (int k = 1; k < reps; ++k) p = ring_mul(p, g);
            if (p.max_abs() != 0.0) nilpotent_ok = false;
        }
    }
    const bool pass = hom <= 1e-12 && assoc <= 1e-12 && jacobi <= 1e-12 && filtration_ok &&
                      nilpotent_ok;
    Json j{{"trials", trials},
           {"max_n", n},
           {"max_dim", dim},
           {"seed", seed},
           {"max_homomorphism_residual", hom},
           {"max_associativity_residual", assoc},
           {"max_jacobi_residual", jacobi},
           {"filtration_ok", filtration_ok},
           {"mu_nilpotency_exact", nilpotent_ok},
           {"pass", pass}};
    if (!a.out_dir.empty()) write_file(a.out_dir + "/verify_ring.json", j.dump(2) + "\n");
    emit(a, j, std::string("verify-ring: ") + (pass ? "pass" : "FAIL") +
                   " (max homomorphism residual " + fmt17(hom) + ")");
    return pass ? 0 : 3;
}

// ---------------------------------------------------------------- normal form

int cmd_normal_form(const CommonArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    std::string text;
    const RunConfig cfg = load_config(a, text);
    const PolyResponse f = build_response(cfg);
    const RingElement lin = linear_ring(f, 0);
    const SNDecomposition sn = almost_normal_form(lin);
    const MultiplicityReport mult = multiplicity_check(lin);

    Json gens = Json::array();
    for (const Mat& g : sn.generators) gens.push_back(json_mat(g));
    Json mult_entries = Json::array();
    for (const auto& e : mult.entries)
        mult_entries.push_back(Json{{"eigenvalue", json_complex(e.eigenvalue)},
                                    {"multiplicity", e.multiplicity},
                                    {"pass", e.pass}});
    Json j{{"input", json_ring(lin)},
           {"abar", json_ring(sn.abar)},
           {"s_part", json_ring(sn.s_part)},
           {"n_part", json_ring(sn.n_part)},
           {"generators", gens},
           {"semisimple_certified", sn.semisimple_certified},
           {"commutator_residual", sn.commutator_residual},
           {"multiplicity", Json{{"required", mult.required}, {"pass", mult.pass},
                                 {"entries", mult_entries}}}};
    write_file(cfg.out_dir + "/normal_form.json", j.dump(2) + "\n");
    write_manifest(cfg, "normal-form", text, start);
    emit(a, j, "normal-form: commutator residual " + fmt17(sn.commutator_residual));
    return 0;
}

// --------------------------------------------------------------------- steady

std::string sign_letter(int s) { return s >= 0 ? "p" : "m"; }

Json json_genericity(const SteadyGenericity& g) {
    return Json{{"preconditions_ok", g.preconditions_ok},
                {"message", g.message},
                {"coeff_sum", g.coeff_sum},
                {"a0_prime", g.a0_prime},
                {"a1", g.a1},
                {"second_derivative", g.second_deriv},
                {"cond_sum", g.cond_sum},
                {"cond_crossing", g.cond_crossing},
                {"cond_feed", g.cond_feed},
                {"cond_quadratic", g.cond_quadratic},
                {"pass", g.pass}};
}

int cmd_steady(const CommonArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    std::string text;
    const RunConfig cfg = load_config(a, text);
    const PolyResponse f = build_response(cfg);
    if (cfg.d != 1) throw GenericityFailure("steady pipeline requires d = 1");
    const SteadyGenericity gen = genericity_check_1d(f);
    if (!gen.pass) {
        std::ostringstream msg;
        msg << "steady genericity failed:";
        if (!gen.preconditions_ok) msg << " " << gen.message << ";";
        if (!gen.cond_sum) msg << " coefficient sum a_0(0)+...+a_n(0) vanishes;";
        if (!gen.cond_crossing) msg << " crossing speed d a_0/d lambda (0) vanishes;";
        if (!gen.cond_feed) msg << " feed coefficient a_1(0) vanishes;";
        if (!gen.cond_quadratic) msg << " quadratic coefficient d2f/dX0^2 vanishes;";
        throw GenericityFailure(msg.str());
    }
    SteadyOptions opts;
    const std::vector<SteadyBranch> branches = solve_steady_branches(f, lambda_grid(cfg), opts);

    Json jb = Json::array();
    for (const auto& br : branches) {
        const std::string name = "steady_r" + std::to_string(br.r) + "_sign" +
                                 sign_letter(br.terminal_sign) + "_side" +
                                 sign_letter(br.lambda_side) + ".csv";
        write_file(cfg.out_dir + "/" + name, csv_steady_branch(br));
        Json j = json_steady_branch(br);
        const SteadyEigenReport er = steady_eigen_report(br);
        j["file"] = name;
        j["hyperbolic"] = er.hyperbolic;
        j["eigen_exponents_ok"] = er.exponents_ok;
        Json efits = Json::array();
        for (const auto& fr : er.eigen_exponent_fit) efits.push_back(json_fit(fr));
        j["eigen_exponent_fit"] = efits;
        jb.push_back(j);
    }
    Json j{{"genericity", json_genericity(gen)},
           {"branch_count", branches.size()},
           {"branches", jb}};
    write_file(cfg.out_dir + "/steady_summary.json", j.dump(2) + "\n");
    write_manifest(cfg, "steady", text, start);
    emit(a, j, "steady: " + std::to_string(branches.size()) + " branches written to " + cfg.out_dir);
    return 0;
}

// ----------------------------------------------------------------------- hopf

Json json_hopf_coeffs(const HopfCoefficients& c) {
    return Json{{"omega0", c.omega0},
                {"alpha", json_complex(c.alpha)},
                {"beta", json_complex(c.beta)},
                {"C", json_complex(c.C)},
                {"coeff_sum0", json_mat(c.coeff_sum0)},
                {"rotation_form", c.rotation_form},
                {"cond_persistence", c.cond_persistence},
                {"cond_crossing", c.cond_crossing},
                {"cond_nilpotency", c.cond_nilpotency},
                {"cond_nonlinearity", c.cond_nonlinearity},
                {"pass", c.pass}};
}

void require_hopf_genericity(const HopfCoefficients& coeffs) {
    if (coeffs.pass) return;
    std::ostringstream msg;
    msg << "hopf genericity failed:";
    if (!coeffs.rotation_form) msg << " slot-0 coefficient is not a pure rotation;";
    if (!coeffs.cond_persistence) msg << " persistence condition (coefficient sum invertible) fails;";
    if (!coeffs.cond_crossing) msg << " eigenvalue crossing condition (d tr a_0/d lambda != 0) fails;";
    if (!coeffs.cond_nilpotency) msg << " nilpotency condition (tr a_1(0) != 0) fails;";
    if (!coeffs.cond_nonlinearity) msg << " nonlinearity condition (Re C != 0) fails;";
    throw GenericityFailure(msg.str());
}

Json json_hopf_samples(const HopfBranch& br) {
    Json arr = Json::array();
    for (const auto& s : br.samples) {
        Json bs = Json::array(), bc = Json::array();
        for (const Complex& b : s.B) bs.push_back(json_complex(b));
        for (const Complex& b : s.B_consecutive) bc.push_back(json_complex(b));
        arr.push_back(Json{{"lambda", s.lambda},
                           {"omega", s.omega},
                           {"B", bs},
                           {"residual", s.residual},
                           {"omega_consecutive", s.omega_consecutive},
                           {"B_consecutive", bc},
                           {"residual_consecutive", s.residual_consecutive},
                           {"stable", s.stable},
                           {"hyperbolic", s.hyperbolic}});
    }
    return arr;
}

int cmd_hopf(const CommonArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    std::string text;
    const RunConfig cfg = load_config(a, text);
    if (cfg.d != 2) throw GenericityFailure("hopf pipeline requires d = 2");
    const ComplexPoly fbar = build_complex_response(cfg);
    const HopfCoefficients coeffs = extract_hopf_coefficients(fbar);
    require_hopf_genericity(coeffs);

    HopfOptions opts;
    const HopfBranch base = solve_hopf_branch(fbar, lambda_grid(cfg), opts);
    Json jb = Json::array();
    for (int r = 1; r <= cfg.n; ++r) {
        const HopfBranch br = r == 1 ? base : branch_family(base, r, fbar);
        const std::string name = "hopf_r" + std::to_string(r) + ".csv";
        write_file(cfg.out_dir + "/" + name, csv_hopf_branch(br));
        Json j = json_hopf_branch(br);
        j["file"] = name;
        j["samples_detail"] = json_hopf_samples(br);
        jb.push_back(j);
    }
    Json j{{"coefficients", json_hopf_coeffs(coeffs)},
           {"lambda_side", base.lambda_side},
           {"branch_count", cfg.n},
           {"branches", jb}};
    write_file(cfg.out_dir + "/hopf_summary.json", j.dump(2) + "\n");
    write_manifest(cfg, "hopf", text, start);
    emit(a, j, "hopf: " + std::to_string(cfg.n) + " branches written to " + cfg.out_dir);
    return 0;
}

// ------------------------------------------------------------------- simulate

int cmd_simulate(const CommonArgs& a, double single_lambda) {
    const auto start = std::chrono::steady_clock::now();
    std::string text;
    const RunConfig cfg = load_config(a, text);
    if (cfg.d != 2) throw GenericityFailure("simulate pipeline requires d = 2");
    const ComplexPoly fbar = build_complex_response(cfg);
    const PolyResponse f = build_response(cfg);
    const HopfCoefficients coeffs = extract_hopf_coefficients(fbar);
    require_hopf_genericity(coeffs);

    std::vector<double> grid =
        single_lambda > 0 ? std::vector<double>{single_lambda} : lambda_grid(cfg);
    HopfOptions hopts;
    const HopfBranch base = solve_hopf_branch(fbar, grid, hopts);

    std::vector<double> lambdas;
    std::vector<Eigen::VectorXd> seeds;
    for (const auto& s : base.samples) {
        lambdas.push_back(s.lambda);
        Eigen::VectorXd seed = Eigen::VectorXd::Zero((cfg.n + 1) * 2);
        for (int j = 1; j <= cfg.n; ++j) {
            const Complex b = 1.1 * s.B[static_cast<std::size_t>(j) - 1];
            seed(2 * j) = b.real();
            seed(2 * j + 1) = b.imag();
        }
        seeds.push_back(seed);
    }
    MeasureOptions mopts;
    mopts.tol = cfg.tol;
    mopts.alpha1 = coeffs.alpha.real();
    mopts.omega_hint = coeffs.omega0;
    const AmplitudeTable table = simulate_sweep(f, lambdas, seeds, mopts, thread_cap());
    write_file(cfg.out_dir + "/amplitudes.csv", csv_amplitude_table(table));

    Json j{{"rows", table.rows.size()}};
    Json comparison = Json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const auto& sol = base.samples[i];
        Json cells = Json::array();
        for (int c = 1; c <= cfg.n; ++c) {
            const double predicted = std::abs(sol.B[static_cast<std::size_t>(c) - 1]);
            const double measured = row.amplitude(c);
            cells.push_back(Json{{"cell", c},
                                 {"predicted", predicted},
                                 {"measured", measured},
                                 {"rel_error", std::abs(measured - predicted) /
                                                   std::max(predicted, 1e-300)}});
        }
        comparison.push_back(Json{{"lambda", row.lambda},
                                  {"omega_measured", row.omega},
                                  {"omega_predicted", sol.omega},
                                  {"cells", cells}});
    }
    j["comparison"] = comparison;
    try {
        const SweepFit fits = sweep_and_fit(table);
        Json jf = Json::array();
        for (std::size_t k = 0; k < fits.cells.size(); ++k) {
            Json one = json_fit(fits.fits[k].fit);
            one["cell"] = fits.cells[k];
            one["clean"] = fits.fits[k].clean;
            jf.push_back(one);
        }
        j["fits"] = jf;
    } catch (const FitError&) {
        j["fits"] = nullptr; // grid too small for a power-law fit
    }
    write_file(cfg.out_dir + "/sim_summary.json", j.dump(2) + "\n");
    write_manifest(cfg, "simulate", text, start);
    emit(a, j, "simulate: " + std::to_string(table.rows.size()) + " rows written to " + cfg.out_dir);
    return 0;
}

// ------------------------------------------------------------------------ fit

int cmd_fit(const std::string& input, const CommonArgs& a) {
    const std::string text = read_file(input);
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("fit: empty input " + input);
    std::vector<std::string> cols;
    {
        std::istringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    int ncells = 0;
    while (ncells < static_cast<int>(cols.size()) - 1 &&
           cols[static_cast<std::size_t>(ncells) + 1] == "a" + std::to_string(ncells))
        ++ncells;
    if (cols.empty() || cols[0] != "lambda" || ncells == 0)
        throw ParseError("fit: expected header lambda,a0,...");
    AmplitudeTable table;
    table.n = ncells - 1;
    table.d = 1;
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string item;
        std::vector<double> vals;
        while (std::getline(ls, item, ',')) {
            try {
                vals.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ParseError("fit: bad number at line " + std::to_string(line_no));
            }
        }
        if (static_cast<int>(vals.size()) < 1 + ncells)
            throw ParseError("fit: short row at line " + std::to_string(line_no));
        AmplitudeRow row;
        row.lambda = vals[0];
        row.amplitude = Eigen::VectorXd(ncells);
        for (int c = 0; c < ncells; ++c) row.amplitude(c) = vals[static_cast<std::size_t>(c) + 1];
        row.half_peak = Eigen::VectorXd::Zero(ncells);
        table.rows.push_back(std::move(row));
    }
    const SweepFit fits = sweep_and_fit(table);
    Json jf = Json::array();
    for (std::size_t k = 0; k < fits.cells.size(); ++k) {
        Json one = json_fit(fits.fits[k].fit);
        one["cell"] = fits.cells[k];
        one["clean"] = fits.fits[k].clean;
        jf.push_back(one);
    }
    Json j{{"input", input}, {"fits", jf}};
    if (!a.out_dir.empty()) write_file(a.out_dir + "/fit.json", j.dump(2) + "\n");
    emit(a, j, "fit: " + std::to_string(fits.cells.size()) + " cells fitted");
    return 0;
}

// --------------------------------------------------------------------- report

int cmd_report(const CommonArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    std::string text;
    RunConfig cfg = load_config(a, text);
    Json j;
    if (cfg.pipeline == "steady" || cfg.d == 1) {
        const int rc = cmd_steady(a);
        if (rc != 0) return rc;
        j["steady_summary"] = Json::parse(read_file(cfg.out_dir + "/steady_summary.json"));
    } else {
        const int rc = cmd_hopf(a);
        if (rc != 0) return rc;
        j["hopf_summary"] = Json::parse(read_file(cfg.out_dir + "/hopf_summary.json"));
        // simulation cross-check at the two largest grid values
        CommonArgs sim_args = a;
        sim_args.quiet = true;
        sim_args.json_stdout = false;
        const std::vector<double> grid = lambda_grid(cfg);
        const double hi = grid.back();
        const double lo = grid.size() > 1 ? grid[grid.size() - 2] : hi;
        RunConfig sub = cfg;
        sub.lambda_min = lo;
        sub.lambda_max = hi;
        sub.lambda_points = grid.size() > 1 ? 2 : 1;
        const std::string sub_text = print_config(sub);
        const std::string sub_path = cfg.out_dir + "/_report_sim.cfg";
        write_file(sub_path, sub_text);
        sim_args.config_path = sub_path;
        const int src = cmd_simulate(sim_args, 0.0);
        if (src != 0) return src;
        j["simulation_cross_check"] = Json::parse(read_file(cfg.out_dir + "/sim_summary.json"));
    }
    write_file(cfg.out_dir + "/report.json", j.dump(2) + "\n");
    write_manifest(cfg, "report", text, start);
    emit(a, j, "report written to " + cfg.out_dir + "/report.json");
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"feed-forward chain bifurcation toolkit"};
    app.require_subcommand(1);

    CommonArgs vr_args;
    int vr_n = 4, vr_dim = 2, vr_trials = 1000;
    std::uint64_t vr_seed = 42;
    auto* vr = app.add_subcommand("verify-ring", "randomized ring property checks");
    vr->add_option("--n", vr_n, "max tail index");
    vr->add_option("--dim", vr_dim, "max cell dimension");
    vr->add_option("--trials", vr_trials, "number of random trials");
    vr->add_option("--seed", vr_seed, "random seed");
    vr->add_option("--out", vr_args.out_dir, "output directory");
    vr->add_flag("--json", vr_args.json_stdout, "print JSON to stdout");
    vr->add_flag("--quiet", vr_args.quiet, "suppress progress lines");

    CommonArgs nf_args, st_args, hp_args, sim_args, fit_args, rep_args;
    auto* nf = app.add_subcommand("normal-form", "linear almost normal form and SN split");
    add_common(nf, nf_args);
    auto* st = app.add_subcommand("steady", "steady branches and scaling fits");
    add_common(st, st_args);
    auto* hp = app.add_subcommand("hopf", "oscillatory branches and stability");
    add_common(hp, hp_args);
    auto* sim = app.add_subcommand("simulate", "direct integration and orbit measurement");
    add_common(sim, sim_args);
    double sim_lambda = 0.0;
    sim->add_option("--lambda", sim_lambda, "measure a single parameter value");
    auto* fit = app.add_subcommand("fit", "power-law fit of an amplitude table");
    std::string fit_input;
    fit->add_option("--input", fit_input, "amplitude CSV")->required();
    fit->add_option("--out", fit_args.out_dir, "output directory");
    fit->add_flag("--json", fit_args.json_stdout, "print JSON to stdout");
    fit->add_flag("--quiet", fit_args.quiet, "suppress progress lines");
    auto* rep = app.add_subcommand("report", "full pipeline with cross-validation");
    add_common(rep, rep_args);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return 0;
        }
        std::cerr << "argument error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (vr->parsed()) return cmd_verify_ring(vr_n, vr_dim, vr_trials, vr_seed, vr_args);
        if (nf->parsed()) return cmd_normal_form(nf_args);
        if (st->parsed()) return cmd_steady(st_args);
        if (hp->parsed()) return cmd_hopf(hp_args);
        if (sim->parsed()) return cmd_simulate(sim_args, sim_lambda);
        if (fit->parsed()) return cmd_fit(fit_input, fit_args);
        if (rep->parsed()) return cmd_report(rep_args);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const GenericityFailure& e) {
        std::cerr << "genericity error: " << e.what() << "\n";
        return 2;
    } catch (const InvarianceError& e) {
        std::cerr << "genericity error: " << e.what() << "\n";
        return 2;
    } catch (const StiffnessError& e) {
        std::cerr << "integrator error: " << e.what() << "\n";
        return 4;
    } catch (const NoOrbitError& e) {
        std::cerr << "integrator error: " << e.what() << "\n";
        return 4;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace ffchain
