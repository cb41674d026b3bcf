#include "ffchain/ring.hpp"

#include <algorithm>
#include <cmath>

namespace ffchain {

RingElement::RingElement(int n_, int d_) : n(n_), d(d_) {
    if (n < 0 || d < 1) throw ShapeError("RingElement: need n >= 0 and d >= 1");
    coeffs.assign(static_cast<std::size_t>(n) + 1, Mat::Zero(d, d));
}

RingElement RingElement::zero(int n, int d) { return RingElement(n, d); }

RingElement RingElement::unit(int n, int d) {
    RingElement e(n, d);
    e.coeffs[0] = Mat::Identity(d, d);
    return e;
}

RingElement RingElement::term(const Mat& a, int i, int n) {
    if (a.rows() != a.cols()) throw ShapeError("RingElement::term: matrix not square");
    if (i < 0 || i > n) throw ShapeError("RingElement::term: slot index out of range");
    RingElement e(n, static_cast<int>(a.rows()));
    e.coeffs[static_cast<std::size_t>(i)] = a;
    return e;
}

RingElement RingElement::mu_term(const Mat& a, int i, int n) {
    if (i < 0 || i >= n) throw ShapeError("RingElement::mu_term: need 0 <= i < n");
    RingElement e = term(a, i, n);
    e.coeffs[static_cast<std::size_t>(n)] -= a;
    return e;
}

RingElement& RingElement::operator+=(const RingElement& other) {
    check_same_shape(*this, other);
    for (int i = 0; i <= n; ++i) coeffs[i] += other.coeffs[i];
    return *this;
}

RingElement& RingElement::operator-=(const RingElement& other) {
    check_same_shape(*this, other);
    for (int i = 0; i <= n; ++i) coeffs[i] -= other.coeffs[i];
    return *this;
}

RingElement RingElement::operator+(const RingElement& other) const {
    RingElement r = *this;
    r += other;
    return r;
}

RingElement RingElement::operator-(const RingElement& other) const {
    RingElement r = *this;
    r -= other;
    return r;
}

RingElement RingElement::operator*(double s) const {
    RingElement r = *this;
    for (auto& c : r.coeffs) c *= s;
    return r;
}

double RingElement::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs) m = std::max(m, c.cwiseAbs().maxCoeff());
    return m;
}

void check_same_shape(const RingElement& a, const RingElement& b) {
    if (a.n != b.n || a.d != b.d)
        throw ShapeError("ring operands disagree: (n=" + std::to_string(a.n) + ",d=" +
                         std::to_string(a.d) + ") vs (n=" + std::to_string(b.n) + ",d=" +
                         std::to_string(b.d) + ")");
}

RingElement ring_mul(const RingElement& a, const RingElement& b) {
    check_same_shape(a, b);
    RingElement r(a.n, a.d);
    for (int i = 0; i <= a.n; ++i) {
        for (int j = 0; j <= a.n; ++j) {
            const int m = std::min(i + j, a.n);
            r.coeffs[m] += a.coeffs[i] * b.coeffs[j];
        }
    }
    return r;
}

RingElement ring_bracket(const RingElement& a, const RingElement& b) {
    return ring_mul(a, b) - ring_mul(b, a);
}

int filtration_degree(const RingElement& a, double rel_tol) {
    const double scale = a.max_abs();
    const double cut = rel_tol * scale;
    for (int i = 0; i <= a.n; ++i) {
        if (a.coeffs[i].cwiseAbs().maxCoeff() > cut) return i;
    }
    return a.n + 1;
}

bool is_zero(const RingElement& a, double tol) {
    return a.max_abs() <= tol;
}

RingElement ring_exp_nilpotent(const RingElement& g) {
    // Nilpotent shape: in the mu basis the mu_0 part and the slot-n part
    // must vanish (so g = sum_{k>=1} b_k mu_k).
    const MuElement m = to_mu_basis(g);
    const double scale = std::max(1.0, g.max_abs());
    const double cut = 1e-12 * scale;
    if (m.coeffs[0].cwiseAbs().maxCoeff() > cut)
        throw ShapeError("ring_exp_nilpotent: mu_0 part must vanish");
    if (m.coeffs[static_cast<std::size_t>(g.n)].cwiseAbs().maxCoeff() > cut)
        throw ShapeError("ring_exp_nilpotent: slot-n part must vanish");

    RingElement sum = RingElement::unit(g.n, g.d);
    RingElement pow = RingElement::unit(g.n, g.d);
    for (int j = 1; j <= g.n; ++j) {
        pow = ring_mul(pow, g) * (1.0 / j);
        if (is_zero(pow, 0.0)) break; // powers of single mu terms cancel exactly
        sum += pow;
    }
    return sum;
}

Mat to_matrix(const RingElement& a) {
    const int n = a.n, d = a.d;
    Mat big = Mat::Zero(static_cast<Eigen::Index>(n + 1) * d, static_cast<Eigen::Index>(n + 1) * d);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const int k = std::max(j - i, 0);
            big.block(static_cast<Eigen::Index>(j) * d, static_cast<Eigen::Index>(k) * d, d, d) += a.coeffs[i];
        }
    }
    return big;
}

MuElement to_mu_basis(const RingElement& a) {
    MuElement m;
    m.n = a.n;
    m.d = a.d;
    m.coeffs = a.coeffs;
    Mat total = Mat::Zero(a.d, a.d);
    for (int i = 0; i <= a.n; ++i) total += a.coeffs[i];
    m.coeffs[static_cast<std::size_t>(a.n)] = total;
    return m;
}

RingElement from_mu_basis(const MuElement& m) {
    RingElement a(m.n, m.d);
    a.coeffs = m.coeffs;
    Mat lower = Mat::Zero(m.d, m.d);
    for (int i = 0; i < m.n; ++i) lower += m.coeffs[i];
    a.coeffs[static_cast<std::size_t>(m.n)] = m.coeffs[static_cast<std::size_t>(m.n)] - lower;
    return a;
}

Eigen::VectorXcd ring_spectrum(const RingElement& a) {
    // The realization is block lower triangular with diagonal blocks
    // (sum of all coefficients, a_0, ..., a_0), so its spectrum is exactly
    // the union of the block spectra. Solving the two d x d problems avoids
    // the eigenvalue scatter a dense solve suffers on defective clusters.
    Mat sum = Mat::Zero(a.d, a.d);
    for (const Mat& c : a.coeffs) sum += c;
    Eigen::EigenSolver<Mat> es_sum(sum, false);
    Eigen::EigenSolver<Mat> es0(a.coeffs[0], false);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(a.n + 1) * a.d);
    out.head(a.d) = es_sum.eigenvalues();
    for (int k = 0; k < a.n; ++k) out.segment(static_cast<Eigen::Index>(k + 1) * a.d, a.d) = es0.eigenvalues();
    return out;
}

Mat random_mat(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = dist(rng);
    return m;
}

RingElement random_ring_element(int n, int d, std::mt19937_64& rng) {
    RingElement e(n, d);
    for (int i = 0; i <= n; ++i) e.coeffs[i] = random_mat(d, rng);
    return e;
}

} // namespace ffchain
