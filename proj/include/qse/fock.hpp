#pragma once

#include <complex>
#include <Eigen/Dense>

// Truncated Fock-space linear algebra shared by every other module.
//
// Conventions, fixed globally:
//   - photon-number amplitudes are indexed n = 0..n_max
//   - quadrature operator Q_phi = (a e^{-i phi} + a^dag e^{i phi}) / sqrt(2),
//     so the vacuum quadrature variance is 1/2
//   - truncated coherent states are NOT renormalized; the norm deficit is
//     surfaced instead

namespace qse {

using Complex = std::complex<double>;
using FockVector = Eigen::VectorXcd;     // amplitudes over photon numbers
using DensityMatrix = Eigen::MatrixXcd;  // Hermitian, PSD, unit trace
using Operator = Eigen::MatrixXcd;

double factorial(int n);
double binomial(int n, int k);

struct CoherentState {
    FockVector amps;      // e^{-|alpha|^2/2} alpha^n / sqrt(n!), n = 0..n_max
    double norm_deficit;  // 1 - sum |amps[n]|^2 (weight lost to truncation)
};

CoherentState coherent_fock(Complex alpha, int n_max);

/// Unit-norm copy of v; throws std::invalid_argument("null state") on zero input.
FockVector normalize(const FockVector& v);

/// F = <psi| rho |psi>. psi must be normalized and match rho's dimension.
double fidelity(const DensityMatrix& rho, const FockVector& psi);

/// <n-1| a |n> = sqrt(n) on an (n_max+1)-dimensional truncation.
Operator annihilation(int n_max);

/// Q_phi = (a e^{-i phi} + a^dag e^{i phi}) / sqrt(2).
Operator quadrature_operator(double phi, int n_max);

DensityMatrix pure_density(const FockVector& psi);

// Pad (or truncate) to the dimension n_max + 1.
FockVector embed(const FockVector& psi, int n_max);
DensityMatrix embed(const DensityMatrix& rho, int n_max);

/// Throws std::invalid_argument if rho violates the density-matrix invariants
/// (Hermitian within 1e-12, eigenvalues >= -1e-10, trace 1 within 1e-10).
void validate_density(const DensityMatrix& rho);

}  // namespace qse
