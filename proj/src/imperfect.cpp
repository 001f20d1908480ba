#include "qse/imperfect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qse/rng.hpp"

namespace qse {

void ImperfectionConfig::validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta: must be in (0, 1]");
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi: must be in [0, 1]");
    if (!(dark_count_prob >= 0.0 && dark_count_prob < 1.0))
        throw std::invalid_argument("dark_count_prob: must be in [0, 1)");
    if (!(phase_drift_rate >= 0.0))
        throw std::invalid_argument("phase_drift_rate: must be >= 0");
    if (!(relative_phase_jitter >= 0.0))
        throw std::invalid_argument("relative_phase_jitter: must be >= 0");
}

std::vector<Eigen::MatrixXd> loss_kraus(double eta, int n_max) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta: must be in [0, 1]");
    const int dim = n_max + 1;
    std::vector<Eigen::MatrixXd> kraus;
    kraus.reserve(dim);
    for (int k = 0; k <= n_max; ++k) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
        for (int n = k; n <= n_max; ++n)
            A(n - k, n) = std::sqrt(binomial(n, k) * std::pow(eta, n - k) *
                                    std::pow(1.0 - eta, k));
        kraus.push_back(std::move(A));
    }
    return kraus;
}

DensityMatrix loss_channel(const DensityMatrix& rho, double eta) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("loss_channel: not square");
    const int n_max = static_cast<int>(rho.rows()) - 1;
    DensityMatrix out = DensityMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& A : loss_kraus(eta, n_max)) out += A * rho * A.transpose();
    return out;
}

namespace {

// Mean photon numbers of the mismatched (distinguishable) ancilla components
// arriving at each SPCM. Coherent light stays a product of coherent states
// through the 50/50 network: the component injected with the first ancilla
// reaches SPCM1 with half its intensity and SPCM2 with a quarter; the one
// injected with the second ancilla reaches only SPCM2, with half.
struct Background {
    double spcm1;
    double spcm2;
};

Background mismatch_background(Complex alpha, Complex beta, double xi) {
    const double ax2 = (1.0 - xi * xi) * std::norm(alpha);
    const double bx2 = (1.0 - xi * xi) * std::norm(beta);
    return {ax2 / 2.0, ax2 / 4.0 + bx2 / 2.0};
}

DetectorModel with_dark(const DetectorModel& det, double d) {
    DetectorModel out = det;
    out.dark_count_prob = std::max(out.dark_count_prob, d);
    return out;
}

}  // namespace

HeraldResult herald_signal_imperfect(Complex alpha, Complex beta, double gamma,
                                     const ImperfectionConfig& config, const DetectorModel& det,
                                     const HeraldOptions& opt) {
    config.validate();
    const Background bg = mismatch_background(alpha, beta, config.xi);
    return herald_signal_with_background(config.xi * alpha, config.xi * beta, gamma,
                                         with_dark(det, config.dark_count_prob), opt, bg.spcm1,
                                         bg.spcm2);
}

HeraldResult herald_singles_imperfect(Complex alpha, double gamma,
                                      const ImperfectionConfig& config, const DetectorModel& det,
                                      const HeraldOptions& opt) {
    config.validate();
    const double ax2 = (1.0 - config.xi * config.xi) * std::norm(alpha);
    return herald_singles_with_background(config.xi * alpha, gamma,
                                          with_dark(det, config.dark_count_prob), opt, ax2 / 2.0);
}

HeraldResult herald_spcm2_singles_imperfect(Complex alpha, Complex beta, double gamma,
                                            const ImperfectionConfig& config,
                                            const DetectorModel& det, const HeraldOptions& opt) {
    config.validate();
    const Background bg = mismatch_background(alpha, beta, config.xi);
    return herald_spcm2_singles(config.xi * alpha, config.xi * beta, gamma,
                                with_dark(det, config.dark_count_prob), opt, bg.spcm2);
}

double PhaseTrajectory::at(double t) const {
    if (times.empty()) throw std::invalid_argument("empty trajectory");
    if (t <= times.front()) return phases.front();
    if (t >= times.back()) return phases.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double f = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return phases[i - 1] + f * (phases[i] - phases[i - 1]);
}

PhaseTrajectory simulate_phase_drift(double rate, double duration, double step,
                                     std::uint64_t seed, double initial_phase) {
    if (!(step > 0.0)) throw std::invalid_argument("step: must be > 0");
    if (!(rate >= 0.0)) throw std::invalid_argument("rate: must be >= 0");
    if (!(duration >= 0.0)) throw std::invalid_argument("duration: must be >= 0");
    const std::size_t n = static_cast<std::size_t>(std::ceil(duration / step));
    PhaseTrajectory traj;
    traj.times.resize(n + 1);
    traj.phases.resize(n + 1);
    Rng rng(seed);
    const double sigma = rate * std::sqrt(step);
    double phi = initial_phase;
    for (std::size_t k = 0; k <= n; ++k) {
        traj.times[k] = static_cast<double>(k) * step;
        traj.phases[k] = phi;
        phi += sigma * rng.normal();
    }
    return traj;
}

}  // namespace qse
