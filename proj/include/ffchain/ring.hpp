#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "ffchain/errors.hpp"

namespace ffchain {

using Mat = Eigen::MatrixXd;

/// Element of the chain coefficient ring: a formal sum of n+1 square matrix
/// coefficients, one per shift generator of the chain semigroup. Index 0 is
/// the unit slot, index n the absorbing slot. Multiplication folds indices
/// by i,j -> min(i+j, n).
struct RingElement {
    int n = 0; ///< tail index; the chain has n+1 cells
    int d = 0; ///< cell dimension
    std::vector<Mat> coeffs; ///< n+1 matrices, each d x d

    RingElement() = default;
    RingElement(int n_, int d_);

    static RingElement zero(int n, int d);
    /// Multiplicative unit: identity matrix in slot 0.
    static RingElement unit(int n, int d);
    /// Single-term element a * (slot i).
    static RingElement term(const Mat& a, int i, int n);
    /// Nilpotent basis element mu_i = (slot i) - (slot n) with coefficient a.
    static RingElement mu_term(const Mat& a, int i, int n);

    RingElement& operator+=(const RingElement& other);
    RingElement& operator-=(const RingElement& other);
    RingElement operator+(const RingElement& other) const;
    RingElement operator-(const RingElement& other) const;
    RingElement operator*(double s) const;

    /// Largest entry magnitude over all coefficients.
    double max_abs() const;
};

/// Same data as RingElement, but coefficients are taken with respect to the
/// basis mu_0, ..., mu_{n-1}, (slot n). The change of basis is triangular
/// with unit diagonal.
struct MuElement {
    int n = 0;
    int d = 0;
    std::vector<Mat> coeffs; ///< indices 0..n-1 hold mu_i parts, index n the slot-n part
};

void check_same_shape(const RingElement& a, const RingElement& b);

/// Ring product: result slot m collects all products a_i * b_j with
/// min(i+j, n) = m.
RingElement ring_mul(const RingElement& a, const RingElement& b);

/// Commutator a*b - b*a.
RingElement ring_bracket(const RingElement& a, const RingElement& b);

/// Smallest slot index with a nonzero coefficient, or n+1 for the zero
/// element. Zero detection is relative to the element's largest entry.
int filtration_degree(const RingElement& a, double rel_tol = 1e-12);

/// True when every coefficient is zero relative to `scale` (or absolutely
/// when scale <= 0 and the element itself is tiny).
bool is_zero(const RingElement& a, double tol = 1e-12);

/// Exponential of a nilpotent element supported on mu_1..mu_{n-1} (zero
/// mu_0 and slot-n parts in the mu basis). The series terminates because
/// powers climb the filtration. Throws ShapeError on a non-nilpotent shape.
RingElement ring_exp_nilpotent(const RingElement& g);

/// Faithful realization on the full chain state space: the block
/// lower-triangular matrix of size (n+1)d x (n+1)d whose row j picks up
/// coefficient i at block column max(j-i, 0).
Mat to_matrix(const RingElement& a);

MuElement to_mu_basis(const RingElement& a);
RingElement from_mu_basis(const MuElement& m);

/// Spectrum of the matrix realization.
Eigen::VectorXcd ring_spectrum(const RingElement& a);

/// Random dense element with standard normal entries (all slots filled).
RingElement random_ring_element(int n, int d, std::mt19937_64& rng);
Mat random_mat(int d, std::mt19937_64& rng);

} // namespace ffchain
