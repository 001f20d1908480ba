#include "qse/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qse {

double factorial(int n) {
    static const auto table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        for (int k = 1; k <= 170; ++k) t[k] = t[k - 1] * k;
        return t;
    }();
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    if (n <= 170) return table[static_cast<std::size_t>(n)];
    return std::exp(std::lgamma(n + 1.0));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

CoherentState coherent_fock(Complex alpha, int n_max) {
    if (n_max < 2) throw std::invalid_argument("coherent_fock: n_max must be >= 2");
    FockVector amps(n_max + 1);
    Complex c = std::exp(-0.5 * std::norm(alpha));
    amps[0] = c;
    for (int n = 1; n <= n_max; ++n) {
        c *= alpha / std::sqrt(static_cast<double>(n));
        amps[n] = c;
    }
    return {amps, 1.0 - amps.squaredNorm()};
}

FockVector normalize(const FockVector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("null state");
    return v / norm;
}

double fidelity(const DensityMatrix& rho, const FockVector& psi) {
    if (rho.rows() != rho.cols() || rho.rows() != psi.size())
        throw std::invalid_argument("fidelity: dimension mismatch");
    return std::real(Complex(psi.adjoint() * rho * psi));
}

Operator annihilation(int n_max) {
    if (n_max < 1) throw std::invalid_argument("annihilation: n_max must be >= 1");
    Operator a = Operator::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Operator quadrature_operator(double phi, int n_max) {
    const Operator a = annihilation(n_max);
    const Complex e = std::exp(Complex(0, -phi));
    return (e * a + std::conj(e) * a.adjoint()) / std::sqrt(2.0);
}

DensityMatrix pure_density(const FockVector& psi) { return psi * psi.adjoint(); }

FockVector embed(const FockVector& psi, int n_max) {
    FockVector out = FockVector::Zero(n_max + 1);
    const int n = std::min<int>(psi.size(), n_max + 1);
    out.head(n) = psi.head(n);
    return out;
}

DensityMatrix embed(const DensityMatrix& rho, int n_max) {
    DensityMatrix out = DensityMatrix::Zero(n_max + 1, n_max + 1);
    const int n = std::min<int>(rho.rows(), n_max + 1);
    out.topLeftCorner(n, n) = rho.topLeftCorner(n, n);
    return out;
}

void validate_density(const DensityMatrix& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix: not square");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
        throw std::invalid_argument("density matrix: not Hermitian (deviation " +
                                    std::to_string(herm) + ")");
    const double tr = std::abs(rho.trace() - Complex(1.0));
    if (tr > 1e-10)
        throw std::invalid_argument("density matrix: trace differs from 1 by " +
                                    std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(0.5 * (rho + rho.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-10)
        throw std::invalid_argument("density matrix: negative eigenvalue " +
                                    std::to_string(min_eig));
}

}  // namespace qse
