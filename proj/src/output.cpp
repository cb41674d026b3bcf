#include "ffchain/output.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffchain/format.hpp"

namespace ffchain {

const char* const kVersion = "0.1.0";

std::string csv_steady_branch(const SteadyBranch& branch) {
    std::ostringstream out;
    const int cells = branch.samples.empty() ? 0 : static_cast<int>(branch.samples.front().x.size());
    out << "lambda";
    for (int j = 0; j < cells; ++j) out << ",x" << j;
    for (int j = 0; j < cells; ++j) out << ",eig_re_" << j;
    for (int j = 0; j < cells; ++j) out << ",eig_im_" << j;
    out << "\n";
    for (const auto& s : branch.samples) {
        out << fmt17(s.lambda);
        for (int j = 0; j < cells; ++j) out << ',' << fmt17(s.x(j));
        for (int j = 0; j < cells; ++j) out << ',' << fmt17(s.eigenvalues(j));
        for (int j = 0; j < cells; ++j) out << ",0";
        out << "\n";
    }
    return out.str();
}

std::string csv_hopf_branch(const HopfBranch& branch) {
    std::ostringstream out;
    const int m = branch.n - branch.r + 1;
    const int blocks = branch.n + 1;
    out << "lambda,omega";
    for (int i = 1; i <= m; ++i) out << ",B" << i << "_re,B" << i << "_im";
    for (int k = 0; k < 2 * blocks; ++k) out << ",eig" << k << "_re,eig" << k << "_im";
    out << "\n";
    for (const auto& s : branch.samples) {
        out << fmt17(s.lambda) << ',' << fmt17(s.omega);
        for (int i = 0; i < m; ++i)
            out << ',' << fmt17(s.B[static_cast<std::size_t>(i)].real()) << ','
                << fmt17(s.B[static_cast<std::size_t>(i)].imag());
        for (const Complex& e : s.block_eigenvalues)
            out << ',' << fmt17(e.real()) << ',' << fmt17(e.imag());
        out << "\n";
    }
    return out.str();
}

std::string csv_amplitude_table(const AmplitudeTable& table) {
    std::ostringstream out;
    out << "lambda";
    for (int j = 0; j <= table.n; ++j) out << ",a" << j;
    out << ",period,t_transient,omega";
    for (int j = 0; j <= table.n; ++j) out << ",hp" << j;
    out << "\n";
    for (const auto& r : table.rows) {
        out << fmt17(r.lambda);
        for (int j = 0; j <= table.n; ++j) out << ',' << fmt17(r.amplitude(j));
        out << ',' << fmt17(r.period) << ',' << fmt17(r.transient) << ',' << fmt17(r.omega);
        for (int j = 0; j <= table.n; ++j) out << ',' << fmt17(r.half_peak(j));
        out << "\n";
    }
    return out.str();
}

Json json_fit(const FitResult& fit) {
    return Json{{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"r2", fit.r2},
                {"slope_stderr", fit.slope_stderr},
                {"points", fit.points}};
}

Json json_steady_branch(const SteadyBranch& branch) {
    Json j{{"r", branch.r},
           {"terminal_sign", branch.terminal_sign},
           {"lambda_side", branch.lambda_side},
           {"samples", branch.samples.size()},
           {"kappa_theory", branch.kappa_theory}};
    Json fits = Json::array();
    for (std::size_t i = 0; i < branch.kappa_fit.size(); ++i) {
        Json f = json_fit(branch.kappa_fit[i]);
        f["cell"] = branch.r + static_cast<int>(i);
        fits.push_back(f);
    }
    j["kappa_fit"] = fits;
    double max_resid = 0.0;
    for (const auto& s : branch.samples) max_resid = std::max(max_resid, s.residual);
    j["max_residual"] = max_resid;
    return j;
}

Json json_hopf_branch(const HopfBranch& branch) {
    Json j{{"r", branch.r},
           {"lambda_side", branch.lambda_side},
           {"samples", branch.samples.size()},
           {"kappa_theory", branch.kappa_theory},
           {"stable", branch.stable},
           {"omega_fit", json_fit(branch.omega_fit)}};
    Json fits = Json::array();
    for (std::size_t i = 0; i < branch.kappa_fit.size(); ++i) {
        Json f = json_fit(branch.kappa_fit[i]);
        f["cell"] = branch.r + static_cast<int>(i);
        fits.push_back(f);
    }
    j["kappa_fit"] = fits;
    double max_resid = 0.0, max_resid_consec = 0.0;
    bool hyperbolic = true;
    for (const auto& s : branch.samples) {
        max_resid = std::max(max_resid, s.residual);
        max_resid_consec = std::max(max_resid_consec, s.residual_consecutive);
        hyperbolic = hyperbolic && s.hyperbolic;
    }
    j["max_residual"] = max_resid;
    j["max_residual_consecutive"] = max_resid_consec;
    j["hyperbolic"] = hyperbolic;
    return j;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json make_manifest(const std::string& command, const std::string& config_text,
                   std::uint64_t seed, double wall_seconds) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_text)));
    return Json{{"command", command},
                {"config_hash", hash},
                {"version", kVersion},
                {"seed", seed},
                {"wall_time_s", wall_seconds}};
}

} // namespace ffchain
