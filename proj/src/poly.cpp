#include "ffchain/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "ffchain/format.hpp"

namespace ffchain {

int Monomial::state_degree() const {
    int s = 0;
    for (auto e : state) s += e;
    return s;
}

int CMonomial::degree() const {
    int s = 0;
    for (auto e : z) s += e;
    for (auto e : zc) s += e;
    return s;
}

void PolyResponse::add_term(const Monomial& m, const Eigen::VectorXd& coeff) {
    if (static_cast<int>(m.state.size()) != num_vars())
        throw ShapeError("add_term: monomial arity does not match response shape");
    if (coeff.size() != d) throw ShapeError("add_term: coefficient length != d");
    auto it = terms.find(m);
    if (it == terms.end())
        terms.emplace(m, coeff);
    else
        it->second += coeff;
}

void PolyResponse::add_linear(int slot, const Mat& a, int lambda_exp) {
    if (slot < 0 || slot > n) throw ShapeError("add_linear: slot out of range");
    if (a.rows() != d || a.cols() != d) throw ShapeError("add_linear: matrix size != d");
    for (int c = 0; c < d; ++c) {
        Monomial m = blank();
        m.state[static_cast<std::size_t>(slot * d + c)] = 1;
        m.lambda = static_cast<std::uint8_t>(lambda_exp);
        add_term(m, a.col(c));
    }
}

PolyResponse& PolyResponse::operator+=(const PolyResponse& o) {
    if (n != o.n || d != o.d) throw ShapeError("polynomial shapes differ");
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
}

PolyResponse PolyResponse::operator+(const PolyResponse& o) const {
    PolyResponse r = *this;
    r += o;
    return r;
}

PolyResponse PolyResponse::operator-(const PolyResponse& o) const {
    PolyResponse r = *this;
    r += o * -1.0;
    return r;
}

PolyResponse PolyResponse::operator*(double s) const {
    PolyResponse r = *this;
    for (auto& [m, c] : r.terms) c *= s;
    return r;
}

double PolyResponse::max_coeff_norm() const {
    double v = 0.0;
    for (const auto& [m, c] : terms) v = std::max(v, c.cwiseAbs().maxCoeff());
    return v;
}

void PolyResponse::prune(double rel_tol) {
    const double cut = rel_tol * max_coeff_norm();
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->second.cwiseAbs().maxCoeff() <= cut)
            it = terms.erase(it);
        else
            ++it;
    }
}

bool PolyResponse::pinned_origin() const {
    for (const auto& [m, c] : terms)
        if (m.state_degree() == 0 && c.cwiseAbs().maxCoeff() > 0.0) return false;
    return true;
}

int PolyResponse::max_state_degree() const {
    int deg = 0;
    for (const auto& [m, c] : terms) deg = std::max(deg, m.state_degree());
    return deg;
}

Eigen::VectorXd poly_eval(const PolyResponse& f, const Eigen::VectorXd& args, double lambda) {
    if (args.size() != f.num_vars()) throw ShapeError("poly_eval: bad argument length");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(f.d);
    for (const auto& [m, c] : f.terms) {
        double p = 1.0;
        for (std::size_t v = 0; v < m.state.size(); ++v)
            for (int e = 0; e < m.state[v]; ++e) p *= args(static_cast<Eigen::Index>(v));
        for (int e = 0; e < m.lambda; ++e) p *= lambda;
        out += p * c;
    }
    return out;
}

PolyResponse poly_partial(const PolyResponse& f, int scalar_var) {
    if (scalar_var < 0 || scalar_var >= f.num_vars())
        throw ShapeError("poly_partial: variable out of range");
    PolyResponse r(f.n, f.d);
    const auto v = static_cast<std::size_t>(scalar_var);
    for (const auto& [m, c] : f.terms) {
        if (m.state[v] == 0) continue;
        Monomial dm = m;
        const double e = dm.state[v];
        dm.state[v] -= 1;
        r.add_term(dm, e * c);
    }
    return r;
}

PolyResponse poly_partial_lambda(const PolyResponse& f) {
    PolyResponse r(f.n, f.d);
    for (const auto& [m, c] : f.terms) {
        if (m.lambda == 0) continue;
        Monomial dm = m;
        const double e = dm.lambda;
        dm.lambda -= 1;
        r.add_term(dm, e * c);
    }
    return r;
}

PolyResponse poly_mul_component(const PolyResponse& a, const PolyResponse& b, int comp) {
    if (a.n != b.n || a.d != b.d) throw ShapeError("poly_mul_component: shapes differ");
    if (comp < 0 || comp >= b.d) throw ShapeError("poly_mul_component: bad component");
    PolyResponse r(a.n, a.d);
    for (const auto& [ma, ca] : a.terms) {
        for (const auto& [mb, cb] : b.terms) {
            const double s = cb(comp);
            if (s == 0.0) continue;
            Monomial m = ma;
            for (std::size_t v = 0; v < m.state.size(); ++v)
                m.state[v] = static_cast<std::uint8_t>(m.state[v] + mb.state[v]);
            m.lambda = static_cast<std::uint8_t>(m.lambda + mb.lambda);
            r.add_term(m, s * ca);
        }
    }
    return r;
}

PolyResponse poly_compose_shift(const PolyResponse& f, int shift) {
    if (shift < 0 || shift > f.n) throw ShapeError("poly_compose_shift: shift out of range");
    PolyResponse r(f.n, f.d);
    for (const auto& [m, c] : f.terms) {
        Monomial sm = r.blank();
        sm.lambda = m.lambda;
        for (int j = 0; j <= f.n; ++j) {
            const int target = std::min(j + shift, f.n);
            for (int k = 0; k < f.d; ++k)
                sm.state[static_cast<std::size_t>(target * f.d + k)] = static_cast<std::uint8_t>(
                    sm.state[static_cast<std::size_t>(target * f.d + k)] +
                    m.state[static_cast<std::size_t>(j * f.d + k)]);
        }
        r.add_term(sm, c);
    }
    return r;
}

PolyResponse poly_fix_lambda(const PolyResponse& f, double lambda) {
    PolyResponse r(f.n, f.d);
    for (const auto& [m, c] : f.terms) {
        double p = 1.0;
        for (int e = 0; e < m.lambda; ++e) p *= lambda;
        Monomial fixed = m;
        fixed.lambda = 0;
        r.add_term(fixed, p * c);
    }
    return r;
}

Mat linear_coefficient(const PolyResponse& f, int slot, int lambda_exp) {
    if (slot < 0 || slot > f.n) throw ShapeError("linear_coefficient: slot out of range");
    Mat a = Mat::Zero(f.d, f.d);
    for (const auto& [m, c] : f.terms) {
        if (m.lambda != lambda_exp || m.state_degree() != 1) continue;
        for (int k = 0; k < f.d; ++k) {
            if (m.state[static_cast<std::size_t>(slot * f.d + k)] == 1) a.col(k) += c;
        }
    }
    return a;
}

RingElement linear_ring(const PolyResponse& f, int lambda_exp) {
    RingElement e(f.n, f.d);
    for (int i = 0; i <= f.n; ++i) e.coeffs[static_cast<std::size_t>(i)] = linear_coefficient(f, i, lambda_exp);
    return e;
}

std::optional<std::pair<int, int>> grading_degree(const PolyResponse& f) {
    std::optional<std::pair<int, int>> grade;
    for (const auto& [m, c] : f.terms) {
        if (c.cwiseAbs().maxCoeff() == 0.0) continue;
        const std::pair<int, int> g{m.state_degree() - 1, static_cast<int>(m.lambda)};
        if (!grade)
            grade = g;
        else if (*grade != g)
            return std::nullopt;
    }
    return grade;
}

// --------------------------------------------------------------------------
// complex view
// --------------------------------------------------------------------------

void ComplexPoly::add_term(const CMonomial& m, Complex c) {
    if (static_cast<int>(m.z.size()) != n + 1 || static_cast<int>(m.zc.size()) != n + 1)
        throw ShapeError("ComplexPoly::add_term: monomial arity mismatch");
    auto it = terms.find(m);
    if (it == terms.end())
        terms.emplace(m, c);
    else
        it->second += c;
}

void ComplexPoly::add_linear(int slot, Complex p, Complex q, int lambda_exp) {
    if (slot < 0 || slot > n) throw ShapeError("ComplexPoly::add_linear: slot out of range");
    CMonomial m = blank();
    m.lambda = static_cast<std::uint8_t>(lambda_exp);
    if (p != 0.0) {
        CMonomial mz = m;
        mz.z[static_cast<std::size_t>(slot)] = 1;
        add_term(mz, p);
    }
    if (q != 0.0) {
        CMonomial mc = m;
        mc.zc[static_cast<std::size_t>(slot)] = 1;
        add_term(mc, q);
    }
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o) {
    if (n != o.n) throw ShapeError("ComplexPoly: shapes differ");
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
}

double ComplexPoly::max_coeff_abs() const {
    double v = 0.0;
    for (const auto& [m, c] : terms) v = std::max(v, std::abs(c));
    return v;
}

void ComplexPoly::prune(double rel_tol) {
    const double cut = rel_tol * max_coeff_abs();
    for (auto it = terms.begin(); it != terms.end();) {
        if (std::abs(it->second) <= cut)
            it = terms.erase(it);
        else
            ++it;
    }
}

Complex cpoly_eval(const ComplexPoly& f, const std::vector<Complex>& z, double lambda) {
    if (static_cast<int>(z.size()) != f.n + 1) throw ShapeError("cpoly_eval: bad argument length");
    Complex out = 0.0;
    for (const auto& [m, c] : f.terms) {
        Complex p = c;
        for (std::size_t j = 0; j < m.z.size(); ++j) {
            for (int e = 0; e < m.z[j]; ++e) p *= z[j];
            for (int e = 0; e < m.zc[j]; ++e) p *= std::conj(z[j]);
        }
        for (int e = 0; e < m.lambda; ++e) p *= lambda;
        out += p;
    }
    return out;
}

namespace {

ComplexPoly cpoly_partial_impl(const ComplexPoly& f, int slot, bool conjugate) {
    if (slot < 0 || slot > f.n) throw ShapeError("cpoly_partial: slot out of range");
    ComplexPoly r(f.n);
    const auto s = static_cast<std::size_t>(slot);
    for (const auto& [m, c] : f.terms) {
        const auto& exps = conjugate ? m.zc : m.z;
        if (exps[s] == 0) continue;
        CMonomial dm = m;
        const double e = exps[s];
        (conjugate ? dm.zc : dm.z)[s] -= 1;
        r.add_term(dm, e * c);
    }
    return r;
}

} // namespace

ComplexPoly cpoly_partial_z(const ComplexPoly& f, int slot) { return cpoly_partial_impl(f, slot, false); }
ComplexPoly cpoly_partial_zc(const ComplexPoly& f, int slot) { return cpoly_partial_impl(f, slot, true); }

ComplexPoly cpoly_partial_lambda(const ComplexPoly& f) {
    ComplexPoly r(f.n);
    for (const auto& [m, c] : f.terms) {
        if (m.lambda == 0) continue;
        CMonomial dm = m;
        const double e = dm.lambda;
        dm.lambda -= 1;
        r.add_term(dm, e * c);
    }
    return r;
}

void complex_linear(const ComplexPoly& f, int slot, int lambda_exp, Complex& p, Complex& q) {
    p = 0.0;
    q = 0.0;
    const auto s = static_cast<std::size_t>(slot);
    for (const auto& [m, c] : f.terms) {
        if (m.lambda != lambda_exp || m.degree() != 1) continue;
        if (m.z[s] == 1) p += c;
        if (m.zc[s] == 1) q += c;
    }
}

PolyResponse to_real(const ComplexPoly& f) {
    PolyResponse r(f.n, 2);
    for (const auto& [cm, coeff] : f.terms) {
        // expand coeff * prod_j (x+iy)^{a_j} (x-iy)^{b_j} into real monomials
        std::map<Monomial, Complex> acc;
        Monomial base = r.blank();
        base.lambda = cm.lambda;
        acc.emplace(base, coeff);
        for (int j = 0; j <= f.n; ++j) {
            const std::size_t xi = static_cast<std::size_t>(2 * j);
            const std::size_t yi = xi + 1;
            for (int rep = 0; rep < cm.z[static_cast<std::size_t>(j)] +
                                        cm.zc[static_cast<std::size_t>(j)];
                 ++rep) {
                const bool conj = rep >= cm.z[static_cast<std::size_t>(j)];
                const Complex iy = conj ? Complex(0, -1) : Complex(0, 1);
                std::map<Monomial, Complex> next;
                for (const auto& [m, c] : acc) {
                    Monomial mx = m;
                    mx.state[xi] += 1;
                    next[mx] += c;
                    Monomial my = m;
                    my.state[yi] += 1;
                    next[my] += c * iy;
                }
                acc.swap(next);
            }
        }
        for (const auto& [m, c] : acc) {
            Eigen::Vector2d v(c.real(), c.imag());
            r.add_term(m, v);
        }
    }
    r.prune(1e-15);
    return r;
}

ComplexPoly to_complex(const PolyResponse& f) {
    if (f.d != 2) throw ShapeError("to_complex: requires d = 2");
    ComplexPoly r(f.n);
    for (const auto& [m, coeff] : f.terms) {
        const Complex gamma(coeff(0), coeff(1));
        std::map<CMonomial, Complex> acc;
        CMonomial base = r.blank();
        base.lambda = m.lambda;
        acc.emplace(base, gamma);
        for (int j = 0; j <= f.n; ++j) {
            const std::size_t s = static_cast<std::size_t>(j);
            // x = (Z + Zc)/2, y = -i (Z - Zc)/2
            for (int rep = 0; rep < m.state[static_cast<std::size_t>(2 * j)]; ++rep) {
                std::map<CMonomial, Complex> next;
                for (const auto& [cm, c] : acc) {
                    CMonomial mz = cm;
                    mz.z[s] += 1;
                    next[mz] += 0.5 * c;
                    CMonomial mc = cm;
                    mc.zc[s] += 1;
                    next[mc] += 0.5 * c;
                }
                acc.swap(next);
            }
            for (int rep = 0; rep < m.state[static_cast<std::size_t>(2 * j + 1)]; ++rep) {
                std::map<CMonomial, Complex> next;
                for (const auto& [cm, c] : acc) {
                    CMonomial mz = cm;
                    mz.z[s] += 1;
                    next[mz] += Complex(0, -0.5) * c;
                    CMonomial mc = cm;
                    mc.zc[s] += 1;
                    next[mc] += Complex(0, 0.5) * c;
                }
                acc.swap(next);
            }
        }
        for (const auto& [cm, c] : acc) r.add_term(cm, c);
    }
    r.prune(1e-15);
    return r;
}

Mat realify(Complex p, Complex q) {
    Mat m(2, 2);
    // z -> p z + q conj(z) on (x, y) coordinates
    m << p.real() + q.real(), -p.imag() + q.imag(),
         p.imag() + q.imag(),  p.real() - q.real();
    return m;
}

void complexify(const Mat& m, Complex& p, Complex& q) {
    if (m.rows() != 2 || m.cols() != 2) throw ShapeError("complexify: need 2 x 2");
    p = Complex((m(0, 0) + m(1, 1)) / 2.0, (m(1, 0) - m(0, 1)) / 2.0);
    q = Complex((m(0, 0) - m(1, 1)) / 2.0, (m(1, 0) + m(0, 1)) / 2.0);
}

// --------------------------------------------------------------------------
// text format
// --------------------------------------------------------------------------

namespace {

struct Token {
    char kind = 0; // 'X', 'Z', 'L', '1'
    bool conj = false;
    int index = 0;
    int exp = 1;
};

std::vector<Token> tokenize_factors(const std::string& head, const std::string& line) {
    std::vector<Token> out;
    std::istringstream ss(head);
    std::string tok;
    while (ss >> tok) {
        Token t;
        std::size_t pos = 0;
        if (tok == "1") {
            t.kind = '1';
            out.push_back(t);
            continue;
        }
        if (tok[0] == 'X' || tok[0] == 'Z' || tok[0] == 'L')
            t.kind = tok[0];
        else
            throw ParseError("bad factor '" + tok + "' in term: " + line);
        pos = 1;
        std::size_t digits = pos;
        while (digits < tok.size() && std::isdigit(static_cast<unsigned char>(tok[digits]))) ++digits;
        if (t.kind != 'L') {
            if (digits == pos) throw ParseError("factor '" + tok + "' lacks an index: " + line);
            t.index = std::stoi(tok.substr(pos, digits - pos));
        }
        pos = digits;
        if (t.kind == 'Z' && pos < tok.size() && tok[pos] == 'c') {
            t.conj = true;
            ++pos;
        }
        if (pos < tok.size()) {
            if (tok[pos] != '^') throw ParseError("expected '^' in factor '" + tok + "': " + line);
            const std::string e = tok.substr(pos + 1);
            if (e.empty() || !std::all_of(e.begin(), e.end(), [](char ch) {
                    return std::isdigit(static_cast<unsigned char>(ch));
                }))
                throw ParseError("bad exponent in factor '" + tok + "': " + line);
            t.exp = std::stoi(e);
        }
        out.push_back(t);
    }
    return out;
}

std::vector<double> parse_coeff_tuple(const std::string& tail, const std::string& line) {
    const auto open = tail.find('(');
    const auto close = tail.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError("coefficient tuple must be parenthesized: " + line);
    std::vector<double> vals;
    std::string inner = tail.substr(open + 1, close - open - 1);
    std::istringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument("trailing");
            vals.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("bad coefficient value '" + item + "': " + line);
        }
    }
    if (vals.empty()) throw ParseError("empty coefficient tuple: " + line);
    return vals;
}

void split_term_line(const std::string& line, std::string& head, std::string& tail) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("term line lacks ':': " + line);
    head = line.substr(0, colon);
    tail = line.substr(colon + 1);
}

} // namespace

void parse_real_term(const std::string& line, PolyResponse& into) {
    std::string head, tail;
    split_term_line(line, head, tail);
    Monomial m = into.blank();
    for (const Token& t : tokenize_factors(head, line)) {
        if (t.kind == '1') continue;
        if (t.kind == 'Z') throw ParseError("complex factor in real term: " + line);
        if (t.kind == 'L') {
            m.lambda = static_cast<std::uint8_t>(m.lambda + t.exp);
        } else {
            if (t.index < 0 || t.index >= into.num_vars())
                throw ParseError("coordinate index out of range in: " + line);
            m.state[static_cast<std::size_t>(t.index)] =
                static_cast<std::uint8_t>(m.state[static_cast<std::size_t>(t.index)] + t.exp);
        }
    }
    const std::vector<double> vals = parse_coeff_tuple(tail, line);
    if (static_cast<int>(vals.size()) != into.d)
        throw ParseError("coefficient tuple length != cell dimension: " + line);
    Eigen::VectorXd c(into.d);
    for (int i = 0; i < into.d; ++i) c(i) = vals[static_cast<std::size_t>(i)];
    into.add_term(m, c);
}

void parse_complex_term(const std::string& line, ComplexPoly& into) {
    std::string head, tail;
    split_term_line(line, head, tail);
    CMonomial m = into.blank();
    for (const Token& t : tokenize_factors(head, line)) {
        if (t.kind == '1') continue;
        if (t.kind == 'X') throw ParseError("real factor in complex term: " + line);
        if (t.kind == 'L') {
            m.lambda = static_cast<std::uint8_t>(m.lambda + t.exp);
        } else {
            if (t.index < 0 || t.index > into.n)
                throw ParseError("cell index out of range in: " + line);
            auto& exps = t.conj ? m.zc : m.z;
            exps[static_cast<std::size_t>(t.index)] =
                static_cast<std::uint8_t>(exps[static_cast<std::size_t>(t.index)] + t.exp);
        }
    }
    const std::vector<double> vals = parse_coeff_tuple(tail, line);
    if (vals.size() != 2) throw ParseError("complex coefficient needs (re, im): " + line);
    into.add_term(m, Complex(vals[0], vals[1]));
}

std::string print_poly_text(const PolyResponse& f) {
    std::ostringstream out;
    for (const auto& [m, c] : f.terms) {
        std::ostringstream head;
        bool any = false;
        for (std::size_t v = 0; v < m.state.size(); ++v) {
            if (m.state[v] == 0) continue;
            if (any) head << ' ';
            head << 'X' << v << '^' << static_cast<int>(m.state[v]);
            any = true;
        }
        if (m.lambda > 0) {
            if (any) head << ' ';
            head << "L^" << static_cast<int>(m.lambda);
            any = true;
        }
        if (!any) head << '1';
        out << head.str() << " : (";
        for (int i = 0; i < f.d; ++i) out << (i ? ", " : "") << fmt17(c(i));
        out << ")\n";
    }
    return out.str();
}

std::string print_cpoly_text(const ComplexPoly& f) {
    std::ostringstream out;
    for (const auto& [m, c] : f.terms) {
        std::ostringstream head;
        bool any = false;
        for (std::size_t j = 0; j < m.z.size(); ++j) {
            if (m.z[j]) {
                if (any) head << ' ';
                head << 'Z' << j << '^' << static_cast<int>(m.z[j]);
                any = true;
            }
        }
        for (std::size_t j = 0; j < m.zc.size(); ++j) {
            if (m.zc[j]) {
                if (any) head << ' ';
                head << 'Z' << j << "c^" << static_cast<int>(m.zc[j]);
                any = true;
            }
        }
        if (m.lambda > 0) {
            if (any) head << ' ';
            head << "L^" << static_cast<int>(m.lambda);
            any = true;
        }
        if (!any) head << '1';
        out << head.str() << " : (" << fmt17(c.real()) << ", " << fmt17(c.imag()) << ")\n";
    }
    return out.str();
}

} // namespace ffchain
