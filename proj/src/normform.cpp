#include "ffchain/normform.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace ffchain {

Mat ad_operator(const Mat& a0) {
    const int d = static_cast<int>(a0.rows());
    Mat ad = Mat::Zero(d * d, d * d);
    // vec(a0*x) = (I kron a0) vec x,  vec(x*a0) = (a0^T kron I) vec x
    for (int j = 0; j < d; ++j)
        ad.block(j * d, j * d, d, d) += a0;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            ad.block(j * d, k * d, d, d).diagonal().array() -= a0(k, j);
    return ad;
}

namespace {

int svd_rank(const Mat& m, double rel_cut) {
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cut = rel_cut * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

} // namespace

bool is_semisimple(const Mat& a0, double rel_cut) {
    const Mat ad = ad_operator(a0);
    return svd_rank(ad, rel_cut) == svd_rank(ad * ad, rel_cut);
}

CommutantSplit commutant_decompose(const Mat& a0, const Mat& a, double rel_cut) {
    if (a0.rows() != a0.cols() || a.rows() != a.cols() || a0.rows() != a.rows())
        throw ShapeError("commutant_decompose: operands must be square and same size");
    const int d = static_cast<int>(a0.rows());
    const int dd = d * d;

    const Mat ad = ad_operator(a0);
    Eigen::JacobiSVD<Mat> svd(ad, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double cut = rel_cut * smax;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;

    if (svd_rank(ad * ad, rel_cut) != rank)
        throw SemisimplicityError("commutant_decompose: slot-0 coefficient is not semisimple");

    // The kernel/image split is oblique in general: solve for components in
    // the bases [ker | im] rather than projecting orthogonally.
    const Mat ker_basis = svd.matrixV().rightCols(dd - rank);
    const Mat im_basis = svd.matrixU().leftCols(rank);
    Mat basis(dd, dd);
    basis << ker_basis, im_basis;
    Eigen::FullPivLU<Mat> lu(basis);
    if (!lu.isInvertible())
        throw SemisimplicityError("commutant_decompose: kernel and image do not span");

    Eigen::VectorXd avec = Eigen::Map<const Eigen::VectorXd>(a.data(), dd);
    Eigen::VectorXd comps = lu.solve(avec);

    CommutantSplit out;
    Eigen::VectorXd kvec = ker_basis * comps.head(dd - rank);
    Eigen::VectorXd ivec = im_basis * comps.tail(rank);
    out.a_ker = Eigen::Map<Mat>(kvec.data(), d, d);
    out.a_im = Eigen::Map<Mat>(ivec.data(), d, d);

    // Minimum-norm b with [a0, b] = a_im, via the pseudoinverse.
    Eigen::VectorXd bvec = Eigen::VectorXd::Zero(dd);
    Eigen::VectorXd rhs = svd.matrixU().transpose() * ivec;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(dd);
    for (int i = 0; i < rank; ++i) y(i) = rhs(i) / sv(i);
    bvec = svd.matrixV() * y;
    out.b = Eigen::Map<Mat>(bvec.data(), d, d);
    return out;
}

SNDecomposition almost_normal_form(const RingElement& a, double residual_tol) {
    SNDecomposition out;
    const int n = a.n, d = a.d;
    const Mat a0 = a.coeffs[0];
    if (!is_semisimple(a0))
        throw SemisimplicityError("almost_normal_form: slot-0 coefficient is not semisimple");

    RingElement cur = a;
    RingElement p = RingElement::unit(n, d);
    RingElement pinv = RingElement::unit(n, d);
    for (int k = 1; k <= n - 1; ++k) {
        const CommutantSplit split = commutant_decompose(a0, cur.coeffs[k]);
        const RingElement g = RingElement::mu_term(split.b, k, n);
        const RingElement e = ring_exp_nilpotent(g);
        const RingElement einv = ring_exp_nilpotent(g * -1.0);
        cur = ring_mul(e, ring_mul(cur, einv));
        p = ring_mul(e, p);
        pinv = ring_mul(pinv, einv);
        out.generators.push_back(split.b);
    }

    const double scale = std::max(1.0, a0.norm() * std::max(1.0, cur.max_abs()));
    double resid = 0.0;
    for (int i = 1; i <= n - 1; ++i) {
        const Mat br = a0 * cur.coeffs[i] - cur.coeffs[i] * a0;
        resid = std::max(resid, br.cwiseAbs().maxCoeff());
    }
    out.commutator_residual = resid / scale;
    if (out.commutator_residual > residual_tol)
        throw NormFormError("almost_normal_form: commutator residual " +
                            std::to_string(out.commutator_residual) + " above tolerance");

    out.abar = cur;
    sn_split(cur, out.s_part, out.n_part, residual_tol);
    out.transform = p;
    out.transform_inv = pinv;

    Mat total = a0;
    for (int i = 1; i <= n; ++i) total += cur.coeffs[i];
    out.semisimple_certified = is_semisimple(total);
    return out;
}

void sn_split(const RingElement& abar, RingElement& s_part, RingElement& n_part,
              double residual_tol) {
    const int n = abar.n, d = abar.d;
    const Mat& a0 = abar.coeffs[0];
    const double scale = std::max(1.0, abar.max_abs()) * std::max(1.0, a0.norm());
    for (int i = 1; i <= n - 1; ++i) {
        const Mat br = a0 * abar.coeffs[i] - abar.coeffs[i] * a0;
        if (br.cwiseAbs().maxCoeff() > residual_tol * scale)
            throw NormFormError("sn_split: slot " + std::to_string(i) +
                                " does not commute with slot 0");
    }
    Mat tail = Mat::Zero(d, d);
    for (int i = 1; i <= n; ++i) tail += abar.coeffs[i];
    s_part = RingElement::term(a0, 0, n);
    s_part.coeffs[static_cast<std::size_t>(n)] += tail;
    n_part = abar - s_part; // keeps abar = s + n exact
}

MultiplicityReport multiplicity_check(const RingElement& a, double cluster_tol) {
    MultiplicityReport rep;
    rep.required = a.n;
    Eigen::EigenSolver<Mat> es0(a.coeffs[0], false);
    const Eigen::VectorXcd small = es0.eigenvalues();
    const Eigen::VectorXcd big = ring_spectrum(a);
    rep.pass = true;
    for (Eigen::Index i = 0; i < small.size(); ++i) {
        MultiplicityReport::Entry e;
        e.eigenvalue = small(i);
        for (Eigen::Index j = 0; j < big.size(); ++j)
            if (std::abs(big(j) - small(i)) <= cluster_tol) ++e.multiplicity;
        e.pass = e.multiplicity >= a.n;
        rep.pass = rep.pass && e.pass;
        rep.entries.push_back(e);
    }
    return rep;
}

bool spectra_match(Eigen::VectorXcd u, Eigen::VectorXcd v, double tol) {
    if (u.size() != v.size()) return false;
    std::vector<bool> used(static_cast<std::size_t>(v.size()), false);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index arg = -1;
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double dist = std::abs(u(i) - v(j));
            if (dist < best) {
                best = dist;
                arg = j;
            }
        }
        if (arg < 0 || best > tol) return false;
        used[static_cast<std::size_t>(arg)] = true;
    }
    return true;
}

} // namespace ffchain
