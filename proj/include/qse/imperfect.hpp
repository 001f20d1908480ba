#pragma once

#include <cstdint>
#include <vector>

#include "qse/network.hpp"

// Physical imperfection channels: linear loss, ancilla-idler mode mismatch,
// dark counts, and local-oscillator phase drift.

namespace qse {

struct ImperfectionConfig {
    double eta = 0.55;                 // overall signal/detection efficiency, (0,1]
    double xi = 1.0;                   // ancilla mode-match amplitude, [0,1]
    double dark_count_prob = 0.0;      // [0,1)
    double phase_drift_rate = 0.5;     // rad/s
    double relative_phase_jitter = 0;  // rad, static offset redrawn per run

    void validate() const;
};

std::vector<Eigen::MatrixXd> loss_kraus(double eta, int n_max);

/// Binomial photon loss: rho -> sum_k A_k rho A_k^dag. Trace preserving.
DensityMatrix loss_channel(const DensityMatrix& rho, double eta);

// Coincidence herald with mode mismatch and dark counts. Each ancilla is split
// into a matched component xi*amp that interferes on the network and an
// orthogonal component sqrt(1-xi^2)*amp that propagates to the same detectors
// as distinguishable background light. At xi = 1, d = 0 this reduces exactly
// to herald_signal. The overall efficiency eta and phase terms of the config
// are consumed by the acquisition layer, not here.
HeraldResult herald_signal_imperfect(Complex alpha, Complex beta, double gamma,
                                     const ImperfectionConfig& config, const DetectorModel& det,
                                     const HeraldOptions& opt = {});

/// Single-SPCM analogue of herald_signal_imperfect.
HeraldResult herald_singles_imperfect(Complex alpha, double gamma,
                                      const ImperfectionConfig& config, const DetectorModel& det,
                                      const HeraldOptions& opt = {});

/// SPCM2-only analogue (second singles trigger stream).
HeraldResult herald_spcm2_singles_imperfect(Complex alpha, Complex beta, double gamma,
                                            const ImperfectionConfig& config,
                                            const DetectorModel& det,
                                            const HeraldOptions& opt = {});

struct PhaseTrajectory {
    std::vector<double> times;   // s, strictly increasing
    std::vector<double> phases;  // rad

    /// Linear interpolation, clamped at both ends. Throws on an empty trajectory.
    double at(double t) const;
};

/// Wiener process: increments are N(0, (rate * sqrt(step))^2). Deterministic per seed.
PhaseTrajectory simulate_phase_drift(double rate, double duration, double step,
                                     std::uint64_t seed, double initial_phase = 0.0);

}  // namespace qse
