#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffchain/errors.hpp"
#include "ffchain/ring.hpp"

namespace ffchain {

using Complex = std::complex<double>;

/// Exponent key of one polynomial term: one exponent per scalar state
/// coordinate (cell-major, (n+1)*d of them) plus the parameter exponent.
struct Monomial {
    std::vector<std::uint8_t> state;
    std::uint8_t lambda = 0;

    bool operator<(const Monomial& o) const {
        if (lambda != o.lambda) return lambda < o.lambda;
        return state < o.state;
    }
    bool operator==(const Monomial& o) const {
        return lambda == o.lambda && state == o.state;
    }
    int state_degree() const;
};

/// Sparse polynomial response function f: V^{n+1} x R -> V with V = R^d.
/// Terms map a monomial to the d-vector it contributes.
struct PolyResponse {
    int n = 0;
    int d = 1;
    std::map<Monomial, Eigen::VectorXd> terms;

    PolyResponse() = default;
    PolyResponse(int n_, int d_) : n(n_), d(d_) {}

    int num_vars() const { return (n + 1) * d; }
    Monomial blank() const {
        Monomial m;
        m.state.assign(static_cast<std::size_t>(num_vars()), 0);
        return m;
    }

    void add_term(const Monomial& m, const Eigen::VectorXd& coeff);
    /// Linear contribution a * X_slot * lambda^e (a is d x d).
    void add_linear(int slot, const Mat& a, int lambda_exp = 0);

    PolyResponse& operator+=(const PolyResponse& o);
    PolyResponse operator+(const PolyResponse& o) const;
    PolyResponse operator-(const PolyResponse& o) const;
    PolyResponse operator*(double s) const;

    double max_coeff_norm() const;
    /// Drop terms below rel_tol relative to the largest coefficient.
    void prune(double rel_tol = 1e-14);

    /// True when f(0; lambda) = 0 identically (every term touches the state).
    bool pinned_origin() const;
    int max_state_degree() const;
};

/// Evaluate at a flat argument vector of length (n+1)*d.
Eigen::VectorXd poly_eval(const PolyResponse& f, const Eigen::VectorXd& args, double lambda);

/// Component-wise partial derivative with respect to one scalar coordinate.
PolyResponse poly_partial(const PolyResponse& f, int scalar_var);
PolyResponse poly_partial_lambda(const PolyResponse& f);

/// Product of a vector-valued polynomial with one scalar component of
/// another: result = a * (component comp of b).
PolyResponse poly_mul_component(const PolyResponse& a, const PolyResponse& b, int comp);

/// Substitute args through the index shift X_j -> X_{min(j+i, n)}.
PolyResponse poly_compose_shift(const PolyResponse& f, int shift);

/// Specialize the parameter to a fixed value, folding lambda powers into
/// the coefficients.
PolyResponse poly_fix_lambda(const PolyResponse& f, double lambda);

/// d x d matrix of linear-in-state coefficients at one slot and lambda power:
/// entry (r, c) multiplies X_{slot, c} in component r.
Mat linear_coefficient(const PolyResponse& f, int slot, int lambda_exp = 0);

/// All slot coefficients at a lambda power, packed as a ring element.
RingElement linear_ring(const PolyResponse& f, int lambda_exp = 0);

/// Homogeneous grade (state degree k+1, parameter degree l), or nullopt for
/// mixed polynomials. Zero polynomials report nullopt as well.
std::optional<std::pair<int, int>> grading_degree(const PolyResponse& f);

// ---------------------------------------------------------------------------
// Complex view (d = 2): cells as complex numbers, monomials in Z_j and
// conjugates. Used by the Hopf pipeline.
// ---------------------------------------------------------------------------

struct CMonomial {
    std::vector<std::uint8_t> z;  ///< n+1 exponents of Z_j
    std::vector<std::uint8_t> zc; ///< n+1 exponents of conj(Z_j)
    std::uint8_t lambda = 0;

    bool operator<(const CMonomial& o) const {
        if (lambda != o.lambda) return lambda < o.lambda;
        if (z != o.z) return z < o.z;
        return zc < o.zc;
    }
    int degree() const;
};

struct ComplexPoly {
    int n = 0;
    std::map<CMonomial, Complex> terms;

    ComplexPoly() = default;
    explicit ComplexPoly(int n_) : n(n_) {}

    CMonomial blank() const {
        CMonomial m;
        m.z.assign(static_cast<std::size_t>(n) + 1, 0);
        m.zc.assign(static_cast<std::size_t>(n) + 1, 0);
        return m;
    }
    void add_term(const CMonomial& m, Complex c);
    /// Linear contribution (p Z_slot + q conj(Z_slot)) * lambda^e.
    void add_linear(int slot, Complex p, Complex q, int lambda_exp = 0);
    ComplexPoly& operator+=(const ComplexPoly& o);
    double max_coeff_abs() const;
    void prune(double rel_tol = 1e-14);
};

Complex cpoly_eval(const ComplexPoly& f, const std::vector<Complex>& z, double lambda);
ComplexPoly cpoly_partial_z(const ComplexPoly& f, int slot);
ComplexPoly cpoly_partial_zc(const ComplexPoly& f, int slot);
ComplexPoly cpoly_partial_lambda(const ComplexPoly& f);

/// Linear part at one slot and lambda power: f ~ p Z_slot + q conj(Z_slot).
void complex_linear(const ComplexPoly& f, int slot, int lambda_exp, Complex& p, Complex& q);

/// Exact change of coordinates between the two views (d = 2 only).
PolyResponse to_real(const ComplexPoly& f);
ComplexPoly to_complex(const PolyResponse& f);

/// Real 2 x 2 matrix of z -> p z + q conj(z).
Mat realify(Complex p, Complex q);
/// Complex pair (p, q) of a real 2 x 2 matrix acting on C = R^2.
void complexify(const Mat& m, Complex& p, Complex& q);

// ---------------------------------------------------------------------------
// Text format: one term per line, e.g. "X0^2 X1^1 L^1 : (c1, c2)" for the
// real view (Xk indexes scalar coordinates) and "Z0^2 Z0c^1 : (re, im)" for
// the complex view (Zj indexes cells, suffix c marks conjugates).
// ---------------------------------------------------------------------------

void parse_real_term(const std::string& line, PolyResponse& into);
void parse_complex_term(const std::string& line, ComplexPoly& into);
std::string print_poly_text(const PolyResponse& f);
std::string print_cpoly_text(const ComplexPoly& f);

} // namespace ffchain
