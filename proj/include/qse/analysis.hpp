#pragma once

#include <array>

#include "qse/fock.hpp"

// State characterization: Wigner functions on grids, photon statistics,
// best-fit three-level superpositions, and cat-state overlaps.

namespace qse {

struct WignerGrid {
    Eigen::VectorXd x_axis, p_axis;
    Eigen::MatrixXd values;  // values(i, j) = W(x_axis[i], p_axis[j])
};

/// Fock-basis Laguerre kernel under the convention integral W dx dp = 1,
/// W_vacuum(0,0) = 1/pi.
WignerGrid wigner(const DensityMatrix& rho, const Eigen::VectorXd& x_axis,
                  const Eigen::VectorXd& p_axis);
double wigner_point(const DensityMatrix& rho, double x, double p);
Eigen::VectorXd linspace(double lo, double hi, int points);

struct PhotonStats {
    Eigen::VectorXd populations;  // p_n = rho_nn
    double mean;
};
PhotonStats photon_stats(const DensityMatrix& rho);

enum class FitConstraint { Free, A0Zero, A1Zero, A2Zero, PhasesEqual };

struct FitResult {
    Complex a0, a1, a2;  // unit-norm triple
    double fidelity;
    FitConstraint constraint;
};

/// Best superposition of |0>,|1>,|2> maximizing <psi|rho|psi>. Linear-subspace
/// constraints are exact eigenproblems of the corresponding sub-block;
/// PhasesEqual (all amplitudes sharing one phase) is a dense scan over the
/// nonnegative quarter-sphere refined by golden-section.
FitResult fit_eq2(const DensityMatrix& rho, FitConstraint constraint = FitConstraint::Free);

/// Rotate a fitted triple by the two gauge freedoms (global phase and phase-
/// space rotation) so that a0 and a1 are real-nonnegative; the remaining phase
/// of a2 is gauge-invariant content.
std::array<Complex, 3> gauge_fix_a01(Complex a0, Complex a1, Complex a2);

/// Normalized even cat (|alpha> + |-alpha>), even Fock components only.
FockVector even_cat(double alpha, int n_max);

double kitten_fidelity(const DensityMatrix& rho, double cat_alpha);
double kitten_fidelity(const FockVector& psi, double cat_alpha);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; reduces to
/// <psi|rho|psi> when sigma is pure.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qse
