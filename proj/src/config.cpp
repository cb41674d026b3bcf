#include "ffchain/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ffchain/format.hpp"

namespace ffchain {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw ParseError("config line " + std::to_string(line_no) + ": " + what);
}

Mat parse_matrix(const std::string& text, int d, int line_no) {
    std::vector<std::vector<double>> rows;
    std::istringstream rs(text);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<double> vals;
        std::istringstream cs(row);
        std::string item;
        while (std::getline(cs, item, ',')) {
            try {
                std::size_t used = 0;
                const std::string t = trim(item);
                const double v = std::stod(t, &used);
                if (used != t.size()) throw std::invalid_argument("trailing");
                vals.push_back(v);
            } catch (const std::exception&) {
                fail(line_no, "bad matrix entry '" + trim(item) + "'");
            }
        }
        rows.push_back(vals);
    }
    if (static_cast<int>(rows.size()) != d) fail(line_no, "matrix must have " + std::to_string(d) + " rows");
    Mat m(d, d);
    for (int r = 0; r < d; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != d)
            fail(line_no, "matrix row must have " + std::to_string(d) + " entries");
        for (int c = 0; c < d; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return m;
}

std::string print_matrix(const Mat& m) {
    std::ostringstream out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) out << "; ";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ", ";
            out << fmt17(m(r, c));
        }
    }
    return out.str();
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.linear.clear();

    enum class Section { None, System, Linear, Nonlinear, Run };
    Section section = Section::None;
    int linear_slot = -1;
    bool have_system = false;
    std::vector<std::pair<int, std::string>> nonlinear_lines;
    std::vector<std::tuple<int, int, int, std::string>> linear_entries; // line, slot, power, text

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            const std::string name = line.substr(1, line.size() - 2);
            if (name == "system") {
                section = Section::System;
            } else if (name.rfind("linear.", 0) == 0) {
                section = Section::Linear;
                try {
                    linear_slot = std::stoi(name.substr(7));
                } catch (const std::exception&) {
                    fail(line_no, "bad linear section index");
                }
                if (!have_system) fail(line_no, "[system] must precede linear sections");
                if (linear_slot < 0 || linear_slot > cfg.n)
                    fail(line_no, "linear slot " + std::to_string(linear_slot) + " outside 0.." +
                                      std::to_string(cfg.n));
            } else if (name == "nonlinear") {
                section = Section::Nonlinear;
                if (!have_system) fail(line_no, "[system] must precede [nonlinear]");
            } else if (name == "run") {
                section = Section::Run;
            } else {
                fail(line_no, "unknown section [" + name + "]");
            }
            continue;
        }

        if (section == Section::Nonlinear) {
            nonlinear_lines.emplace_back(line_no, line);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        switch (section) {
        case Section::System: {
            try {
                if (key == "n")
                    cfg.n = std::stoi(value);
                else if (key == "d")
                    cfg.d = std::stoi(value);
                else if (key == "pipeline")
                    cfg.pipeline = value;
                else
                    fail(line_no, "unknown system key '" + key + "'");
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                fail(line_no, "bad value for '" + key + "'");
            }
            if (cfg.n < 0 || cfg.n > 64) fail(line_no, "n out of range");
            if (cfg.d < 1 || cfg.d > 8) fail(line_no, "d out of range");
            have_system = true;
            break;
        }
        case Section::Linear: {
            int power = -1;
            if (key == "c0") power = 0;
            else if (key == "c1") power = 1;
            else if (key == "c2") power = 2;
            else fail(line_no, "linear keys are c0, c1, c2");
            linear_entries.emplace_back(line_no, linear_slot, power, value);
            break;
        }
        case Section::Run: {
            try {
                if (key == "lambda_min") cfg.lambda_min = std::stod(value);
                else if (key == "lambda_max") cfg.lambda_max = std::stod(value);
                else if (key == "lambda_points") cfg.lambda_points = std::stoi(value);
                else if (key == "spacing") cfg.spacing = value;
                else if (key == "tol") cfg.tol = std::stod(value);
                else if (key == "seed") cfg.seed = std::stoull(value);
                else if (key == "out") cfg.out_dir = value;
                else fail(line_no, "unknown run key '" + key + "'");
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                fail(line_no, "bad value for '" + key + "'");
            }
            break;
        }
        default:
            fail(line_no, "key outside any section");
        }
    }

    if (!have_system) throw ParseError("config: missing [system] section");
    cfg.linear.assign(static_cast<std::size_t>(cfg.n) + 1,
                      {Mat::Zero(cfg.d, cfg.d), Mat::Zero(cfg.d, cfg.d), Mat::Zero(cfg.d, cfg.d)});
    for (const auto& [ln, slot, power, value] : linear_entries) {
        if (slot < 0 || slot > cfg.n) fail(ln, "linear slot outside 0..n");
        cfg.linear[static_cast<std::size_t>(slot)][static_cast<std::size_t>(power)] =
            parse_matrix(value, cfg.d, ln);
    }

    cfg.nonlinear_real = PolyResponse(cfg.n, cfg.d);
    cfg.nonlinear_complex = ComplexPoly(cfg.n);
    bool saw_real = false, saw_complex = false;
    for (const auto& [ln, line] : nonlinear_lines) {
        const bool complex_line = line.find('Z') != std::string::npos;
        try {
            if (complex_line) {
                if (cfg.d != 2) fail(ln, "complex terms require d = 2");
                parse_complex_term(line, cfg.nonlinear_complex);
                saw_complex = true;
            } else {
                parse_real_term(line, cfg.nonlinear_real);
                saw_real = true;
            }
        } catch (const ParseError& e) {
            fail(ln, e.what());
        }
    }
    if (saw_real && saw_complex)
        throw ParseError("config: mixed X- and Z-form nonlinear terms are not supported");
    cfg.nonlinear_is_complex = saw_complex;

    if (!(cfg.lambda_min > 0.0) || !(cfg.lambda_max >= cfg.lambda_min))
        throw ParseError("config: need 0 < lambda_min <= lambda_max");
    if (cfg.lambda_points < 1) throw ParseError("config: lambda_points must be >= 1");
    if (cfg.spacing != "log" && cfg.spacing != "linear")
        throw ParseError("config: spacing must be 'log' or 'linear'");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string print_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[system]\n";
    out << "n = " << cfg.n << "\n";
    out << "d = " << cfg.d << "\n";
    out << "pipeline = " << cfg.pipeline << "\n";
    for (int i = 0; i <= cfg.n; ++i) {
        const auto& slot = cfg.linear[static_cast<std::size_t>(i)];
        const bool any = slot[0].cwiseAbs().maxCoeff() > 0 || slot[1].cwiseAbs().maxCoeff() > 0 ||
                         slot[2].cwiseAbs().maxCoeff() > 0;
        if (!any) continue;
        out << "\n[linear." << i << "]\n";
        for (int p = 0; p <= 2; ++p) {
            if (slot[static_cast<std::size_t>(p)].cwiseAbs().maxCoeff() == 0 && p > 0) continue;
            out << "c" << p << " = " << print_matrix(slot[static_cast<std::size_t>(p)]) << "\n";
        }
    }
    const std::string nl = cfg.nonlinear_is_complex ? print_cpoly_text(cfg.nonlinear_complex)
                                                    : print_poly_text(cfg.nonlinear_real);
    if (!nl.empty()) {
        out << "\n[nonlinear]\n" << nl;
    }
    out << "\n[run]\n";
    out << "lambda_min = " << fmt17(cfg.lambda_min) << "\n";
    out << "lambda_max = " << fmt17(cfg.lambda_max) << "\n";
    out << "lambda_points = " << cfg.lambda_points << "\n";
    out << "spacing = " << cfg.spacing << "\n";
    out << "tol = " << fmt17(cfg.tol) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "out = " << cfg.out_dir << "\n";
    return out.str();
}

PolyResponse build_response(const RunConfig& cfg) {
    PolyResponse f(cfg.n, cfg.d);
    for (int i = 0; i <= cfg.n; ++i)
        for (int p = 0; p <= 2; ++p) {
            const Mat& a = cfg.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
            if (a.cwiseAbs().maxCoeff() > 0) f.add_linear(i, a, p);
        }
    if (cfg.nonlinear_is_complex)
        f += to_real(cfg.nonlinear_complex);
    else
        f += cfg.nonlinear_real;
    f.prune(0.0);
    return f;
}

ComplexPoly build_complex_response(const RunConfig& cfg) {
    if (cfg.d != 2) throw ShapeError("build_complex_response: requires d = 2");
    ComplexPoly f(cfg.n);
    for (int i = 0; i <= cfg.n; ++i)
        for (int p = 0; p <= 2; ++p) {
            const Mat& a = cfg.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
            if (a.cwiseAbs().maxCoeff() == 0) continue;
            Complex pp, qq;
            complexify(a, pp, qq);
            f.add_linear(i, pp, qq, p);
        }
    if (cfg.nonlinear_is_complex)
        f += cfg.nonlinear_complex;
    else
        f += to_complex(cfg.nonlinear_real);
    f.prune(0.0);
    return f;
}

std::vector<double> lambda_grid(const RunConfig& cfg) {
    std::vector<double> grid;
    if (cfg.lambda_points == 1) {
        grid.push_back(cfg.lambda_min);
        return grid;
    }
    for (int i = 0; i < cfg.lambda_points; ++i) {
        const double t = static_cast<double>(i) / (cfg.lambda_points - 1);
        if (cfg.spacing == "log")
            grid.push_back(std::exp(std::log(cfg.lambda_min) * (1 - t) + std::log(cfg.lambda_max) * t));
        else
            grid.push_back(cfg.lambda_min * (1 - t) + cfg.lambda_max * t);
    }
    return grid;
}

} // namespace ffchain
