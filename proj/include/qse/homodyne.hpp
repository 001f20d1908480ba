#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qse/fock.hpp"
#include "qse/imperfect.hpp"

// Simulated time-resolved homodyne acquisition: quadrature distributions,
// sampling, trigger streams, and LO-phase estimation from singles-triggered
// data. Quadrature values are normalized to vacuum variance 1/2.

namespace qse {

enum class Trigger { Coincidence, Spcm1, Spcm2 };

struct QuadratureRecord {
    double time;        // s
    double value;       // quadrature sample
    Trigger trigger;
    double true_phase;  // rad, simulation ground truth
    double est_phase;   // rad, NaN until estimated
};

struct AcquisitionDataset {
    std::vector<QuadratureRecord> records;  // time-ordered
    std::uint64_t seed = 0;
};

/// psi_n(q) = H_n(q) e^{-q^2/2} / (pi^{1/4} sqrt(2^n n!)).
double quad_wavefunction(int n, double q);

/// psi_0..psi_n_max at q, by upward recurrence.
Eigen::VectorXd quad_wavefunctions(int n_max, double q);

/// p(q | phi) = sum_{mn} rho_mn e^{i(n-m)phi} psi_m(q) psi_n(q).
double quad_pdf(const DensityMatrix& rho, double phi, double q);

// Inverse-CDF sampler on a cached fine grid. CDFs are cached per quantized
// phase bin (the quantum is 2*pi/phase_bins, far below every other phase
// error in the pipeline); sample_at builds the CDF for one exact phase.
class QuadratureSampler {
public:
    explicit QuadratureSampler(DensityMatrix rho, double q_min = -6.0, double q_max = 6.0,
                               int q_points = 4096, int phase_bins = 4096);

    double sample(double phi, double u01) const;     // quantized-phase cache path
    double sample_at(double phi, double u01) const;  // exact phase, single-entry cache

private:
    std::vector<double> build_cdf(double phi) const;
    double invert(const std::vector<double>& cdf, double u) const;

    Eigen::MatrixXcd harmonics_;  // row k: c_k(q) with p = c_0 + 2 Re sum_k e^{ik phi} c_k
    std::vector<double> grid_;
    int phase_bins_;
    mutable std::vector<std::vector<double>> cache_;
    mutable double exact_phi_ = 0.0;
    mutable std::vector<double> exact_cdf_;
};

/// count quadrature samples of rho at LO phase phi, keyed off seed. Deterministic.
std::vector<double> sample_quadrature(const DensityMatrix& rho, double phi, std::uint64_t seed,
                                      std::size_t count = 1);

struct Rates {
    double coincidence_hz = 100.0;  // primary (tomography) trigger stream
    double singles_hz = 5000.0;     // total singles rate, split evenly over SPCM1/SPCM2
};

/// Poisson trigger streams over [0, duration]; each record samples its
/// stream's state at the LO phase read from the drift trajectory.
AcquisitionDataset simulate_acquisition(const DensityMatrix& rho_primary, Trigger primary_tag,
                                        const DensityMatrix& rho_spcm1,
                                        const DensityMatrix& rho_spcm2, const Rates& rates,
                                        double duration, const PhaseTrajectory& drift,
                                        std::uint64_t seed);

/// Tr(rho a); the quadrature mean at LO phase phi is sqrt(2) Re(<a> e^{-i phi}).
Complex expect_a(const DensityMatrix& rho);

struct PhaseEstimateOptions {
    double window_s = 0.06;
    int min_records_per_window = 50;
    Complex envelope_a_spcm1;  // <a> of the SPCM1 singles state as measured (after loss)
    Complex envelope_a_spcm2;  // <a> of the SPCM2 singles state as measured
};

// Windowed means of the singles streams are inverted against the known
// envelopes m_s(phi) = sqrt(2)|a_s| cos(phi - arg a_s) by a dense scan plus
// golden-section refinement; near-tied minima are resolved by continuity
// across windows. The first window prefers the branch with
// sin(phi - arg a) >= 0 unless the mean's slope over the first three windows
// says otherwise (initial drift direction assumed non-negative). Every record
// then gets est_phase by linear interpolation between window centers.
void estimate_phase(AcquisitionDataset& dataset, const PhaseEstimateOptions& opts);

}  // namespace qse
