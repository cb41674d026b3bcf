#pragma once

#include <optional>
#include <vector>

#include "ffchain/ring.hpp"

namespace ffchain {

/// Split of a coefficient against the commutator action of a0:
/// a = a_ker + a_im with a_ker commuting with a0 and a_im = [a0, b].
struct CommutantSplit {
    Mat a_ker; ///< component commuting with a0
    Mat a_im;  ///< component in the image of the commutator action
    Mat b;     ///< minimum-norm solution of [a0, b] = a_im
};

/// Result of bringing a chain linearization into almost normal form and
/// splitting it into commuting semisimple-like and nilpotent parts.
struct SNDecomposition {
    RingElement abar;   ///< almost normal form, slot-0 coefficient unchanged
    RingElement s_part; ///< supported on slot 0 and slot n
    RingElement n_part; ///< supported on mu_1..mu_{n-1}; nilpotent
    std::vector<Mat> generators; ///< b_1..b_{n-1} used in the cleanup
    RingElement transform;       ///< accumulated conjugation P
    RingElement transform_inv;   ///< P^{-1}
    bool semisimple_certified = false; ///< a0 and a0 + sum of cleaned coefficients both semisimple
    double commutator_residual = 0.0;  ///< max |[a0, abar_i]| over i = 1..n-1, relative
};

/// Eigenvalue-multiplicity report for the matrix realization of a chain
/// linearization: each eigenvalue of the slot-0 coefficient must appear with
/// multiplicity >= n in the full spectrum.
struct MultiplicityReport {
    struct Entry {
        std::complex<double> eigenvalue; ///< eigenvalue of the slot-0 coefficient
        int multiplicity = 0;            ///< count in the full spectrum (clustered)
        bool pass = false;
    };
    std::vector<Entry> entries;
    int required = 0; ///< the chain tail index n
    bool pass = false;
};

/// Matrix of the commutator action x -> a0*x - x*a0 on vectorized d x d
/// matrices (column-major), a d^2 x d^2 operator.
Mat ad_operator(const Mat& a0);

/// Rank test for semisimplicity: rank(ad) == rank(ad^2) with singular-value
/// cutoff rel_cut * sigma_max.
bool is_semisimple(const Mat& a0, double rel_cut = 1e-10);

/// Decompose a against the kernel/image split of the commutator action of a0.
/// Throws SemisimplicityError when the split does not span (a0 not semisimple).
CommutantSplit commutant_decompose(const Mat& a0, const Mat& a, double rel_cut = 1e-10);

/// Iterative cleanup of slots 1..n-1 so they commute with the slot-0
/// coefficient, by conjugating with exponentials of nilpotent generators.
/// The slot-n coefficient is left as produced (never normalized).
SNDecomposition almost_normal_form(const RingElement& a, double residual_tol = 1e-10);

/// Split an already-cleaned element into its slot-0/slot-n part and its
/// mu-supported nilpotent part. Throws NormFormError when slots 1..n-1 do
/// not commute with slot 0.
void sn_split(const RingElement& abar, RingElement& s_part, RingElement& n_part,
              double residual_tol = 1e-10);

/// Count multiplicities of slot-0 eigenvalues inside the full spectrum.
MultiplicityReport multiplicity_check(const RingElement& a, double cluster_tol = 1e-8);

/// Greedy matching of two spectra; true when every eigenvalue of `u` pairs
/// with a distinct eigenvalue of `v` within tol.
bool spectra_match(Eigen::VectorXcd u, Eigen::VectorXcd v, double tol);

} // namespace ffchain
