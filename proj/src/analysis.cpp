#include "qse/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qse {

namespace {

constexpr double kPi = 3.14159265358979323846;

// L_n^k(x) for all n with n + k <= n_max, one k column at a time.
// L_0^k = 1, L_1^k = 1 + k - x, n L_n^k = (2n-1+k-x) L_{n-1}^k - (n-1+k) L_{n-2}^k.
void laguerre_column(int k, int n_top, double x, std::vector<double>& out) {
    out.resize(n_top + 1);
    if (n_top >= 0) out[0] = 1.0;
    if (n_top >= 1) out[1] = 1.0 + k - x;
    for (int n = 2; n <= n_top; ++n)
        out[n] = ((2.0 * n - 1.0 + k - x) * out[n - 1] - (n - 1.0 + k) * out[n - 2]) / n;
}

}  // namespace

double wigner_point(const DensityMatrix& rho, double x, double p) {
    const int dim = static_cast<int>(rho.rows());
    const double r2 = x * x + p * p;
    const double envelope = std::exp(-r2) / kPi;
    const Complex w = std::sqrt(2.0) * Complex(x, p);

    double value = 0.0;
    std::vector<double> lag;
    for (int k = 0; k < dim; ++k) {  // k = m - n >= 0
        laguerre_column(k, dim - 1 - k, 2.0 * r2, lag);
        const Complex wk = std::pow(w, k);
        for (int n = 0; n + k < dim; ++n) {
            const int m = n + k;
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            const double scale = sign * std::sqrt(factorial(n) / factorial(m));
            // W_{|n><m|} = (-1)^n/pi sqrt(n!/m!) (sqrt2 (x+ip))^{m-n} L_n^{m-n}(2r^2) e^{-r^2}
            const Complex kernel = scale * wk * lag[n] * envelope;
            if (k == 0)
                value += std::real(rho(n, n)) * std::real(kernel);
            else
                value += 2.0 * std::real(rho(n, m) * kernel);
        }
    }
    return value;
}

WignerGrid wigner(const DensityMatrix& rho, const Eigen::VectorXd& x_axis,
                  const Eigen::VectorXd& p_axis) {
    WignerGrid grid;
    grid.x_axis = x_axis;
    grid.p_axis = p_axis;
    grid.values.resize(x_axis.size(), p_axis.size());
    for (Eigen::Index i = 0; i < x_axis.size(); ++i)
        for (Eigen::Index j = 0; j < p_axis.size(); ++j)
            grid.values(i, j) = wigner_point(rho, x_axis[i], p_axis[j]);
    return grid;
}

Eigen::VectorXd linspace(double lo, double hi, int points) {
    return Eigen::VectorXd::LinSpaced(points, lo, hi);
}

PhotonStats photon_stats(const DensityMatrix& rho) {
    PhotonStats out;
    out.populations = rho.diagonal().real();
    out.mean = 0.0;
    for (Eigen::Index n = 0; n < out.populations.size(); ++n)
        out.mean += static_cast<double>(n) * out.populations[n];
    return out;
}

namespace {

FitResult from_vector(const Eigen::Vector3cd& a, double fid, FitConstraint c) {
    return {a[0], a[1], a[2], fid, c};
}

// Largest eigenpair of a Hermitian 3x3 block restricted to the index subset.
FitResult subspace_fit(const Eigen::Matrix3cd& block, const std::vector<int>& keep,
                       FitConstraint c) {
    const int k = static_cast<int>(keep.size());
    Eigen::MatrixXcd sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = block(keep[i], keep[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    const int top = k - 1;  // eigenvalues ascending
    Eigen::Vector3cd a = Eigen::Vector3cd::Zero();
    for (int i = 0; i < k; ++i) a[keep[i]] = es.eigenvectors()(i, top);
    return from_vector(a, es.eigenvalues()[top], c);
}

}  // namespace

FitResult fit_eq2(const DensityMatrix& rho, FitConstraint constraint) {
    if (rho.rows() < 3) throw std::invalid_argument("fit_eq2: need at least 3 Fock levels");
    Eigen::Matrix3cd block = rho.topLeftCorner(3, 3);
    block = 0.5 * (block + block.adjoint()).eval();

    switch (constraint) {
        case FitConstraint::Free:
            return subspace_fit(block, {0, 1, 2}, constraint);
        case FitConstraint::A0Zero:
            return subspace_fit(block, {1, 2}, constraint);
        case FitConstraint::A1Zero:
            return subspace_fit(block, {0, 2}, constraint);
        case FitConstraint::A2Zero:
            return subspace_fit(block, {0, 1}, constraint);
        case FitConstraint::PhasesEqual:
            break;
    }

    // Common-phase amplitudes: maximize r^T Re(block) r over r >= 0, |r| = 1.
    const Eigen::Matrix3d m = block.real();
    const auto value = [&](double t1, double t2) {
        Eigen::Vector3d r(std::cos(t1), std::sin(t1) * std::cos(t2), std::sin(t1) * std::sin(t2));
        return r.dot(m * r);
    };
    const int n_scan = 96;
    double best = -1e300, bt1 = 0, bt2 = 0;
    for (int i = 0; i <= n_scan; ++i) {
        for (int j = 0; j <= n_scan; ++j) {
            const double t1 = 0.5 * kPi * i / n_scan;
            const double t2 = 0.5 * kPi * j / n_scan;
            const double v = value(t1, t2);
            if (v > best) { best = v; bt1 = t1; bt2 = t2; }
        }
    }
    // Coordinate-wise golden-section refinement.
    const double inv_phi = 0.6180339887498949;
    const double step = 0.5 * kPi / n_scan;
    for (int round = 0; round < 4; ++round) {
        for (int axis = 0; axis < 2; ++axis) {
            double lo = (axis == 0 ? bt1 : bt2) - step;
            double hi = (axis == 0 ? bt1 : bt2) + step;
            lo = std::max(lo, 0.0);
            hi = std::min(hi, 0.5 * kPi);
            const auto f = [&](double t) { return axis == 0 ? -value(t, bt2) : -value(bt1, t); };
            double a = lo, b = hi;
            double c = b - (b - a) * inv_phi, d = a + (b - a) * inv_phi;
            double fc = f(c), fd = f(d);
            for (int it = 0; it < 60; ++it) {
                if (fc < fd) { b = d; d = c; fd = fc; c = b - (b - a) * inv_phi; fc = f(c); }
                else         { a = c; c = d; fc = fd; d = a + (b - a) * inv_phi; fd = f(d); }
            }
            (axis == 0 ? bt1 : bt2) = 0.5 * (a + b);
        }
    }
    best = value(bt1, bt2);
    Eigen::Vector3cd a(std::cos(bt1), std::sin(bt1) * std::cos(bt2),
                       std::sin(bt1) * std::sin(bt2));
    return from_vector(a, best, FitConstraint::PhasesEqual);
}

std::array<Complex, 3> gauge_fix_a01(Complex a0, Complex a1, Complex a2) {
    // a_n -> a_n e^{i(chi + n delta)}; pick chi, delta making a0, a1 real >= 0.
    double chi = 0.0, delta = 0.0;
    if (std::abs(a0) > 1e-12 && std::abs(a1) > 1e-12) {
        chi = -std::arg(a0);
        delta = -std::arg(a1) - chi;
    } else if (std::abs(a1) > 1e-12 && std::abs(a2) > 1e-12) {
        // vanishing a0: make a1 and a2 both real instead
        delta = std::arg(a1) - std::arg(a2);
        chi = -std::arg(a1) - delta;
    } else if (std::abs(a0) > 1e-12 && std::abs(a2) > 1e-12) {
        chi = -std::arg(a0);
        delta = 0.5 * (-std::arg(a2) - chi);
    } else {
        // at most one nonzero component; a global phase suffices
        const Complex dominant =
            std::abs(a0) >= std::abs(a1) && std::abs(a0) >= std::abs(a2)
                ? a0
                : (std::abs(a1) >= std::abs(a2) ? a1 : a2);
        if (std::abs(dominant) > 1e-12) chi = -std::arg(dominant);
    }
    const auto rot = [&](Complex a, int n) {
        return a * std::exp(Complex(0, chi + n * delta));
    };
    return {rot(a0, 0), rot(a1, 1), rot(a2, 2)};
}

FockVector even_cat(double alpha, int n_max) {
    if (alpha < 0.0) throw std::invalid_argument("even_cat: alpha must be >= 0");
    FockVector v = FockVector::Zero(n_max + 1);
    for (int n = 0; n <= n_max; n += 2)
        v[n] = std::pow(alpha, n) / std::sqrt(factorial(n));
    return normalize(v);
}

double kitten_fidelity(const DensityMatrix& rho, double cat_alpha) {
    const int n_max = static_cast<int>(rho.rows()) - 1;
    return fidelity(rho, even_cat(cat_alpha, n_max));
}

double kitten_fidelity(const FockVector& psi, double cat_alpha) {
    const FockVector cat = even_cat(cat_alpha, static_cast<int>(psi.size()) - 1);
    return std::norm(Complex(cat.adjoint() * psi));
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.rows() != sigma.rows()) throw std::invalid_argument("uhlmann: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(0.5 * (rho + rho.adjoint()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const DensityMatrix sqrt_rho =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    const DensityMatrix inner = sqrt_rho * sigma * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es2(0.5 * (inner + inner.adjoint()));
    double f = 0.0;
    for (Eigen::Index i = 0; i < es2.eigenvalues().size(); ++i)
        f += std::sqrt(std::max(0.0, es2.eigenvalues()[i]));
    return f * f;
}

}  // namespace qse
