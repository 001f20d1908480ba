#pragma once

#include <optional>
#include <vector>

#include "qse/homodyne.hpp"

// Loss-corrected quadrature tomography: interval POVMs, histogramming, and
// the iterative maximum-likelihood (R rho R) reconstruction.

namespace qse {

using PovmElement = Eigen::MatrixXcd;

struct QInterval {
    double lo;  // may be -inf
    double hi;  // may be +inf
};

/// <m| Pi |n> = e^{i(m-n)phi} integral_I psi_m psi_n dq, the POVM element of an
/// ideal quadrature measurement at LO phase phi landing in the interval.
PovmElement quad_projector(QInterval interval, double phi, int n_max);

/// Loss-corrected element Pi_eta = sum_k A_k^dag Pi A_k with the binomial loss
/// Kraus operators; equals quad_projector at eta = 1.
PovmElement lossy_povm(QInterval interval, double phi, double eta, int n_max);

struct BinnedData {
    int phase_bin_count = 0;
    int q_bin_count = 0;  // interior bins; two tail bins are appended
    double q_min = 0.0, q_max = 0.0;
    std::vector<std::vector<std::int64_t>> counts;  // [phase][q], q index 0 and q_bin_count+1 are tails
    std::int64_t total = 0;

    int q_bins_total() const { return q_bin_count + 2; }
    double phase_center(int i) const;
    QInterval q_interval(int j) const;
};

struct BinOptions {
    int phase_bins = 12;
    int q_bins = 64;
    double q_min = -5.0, q_max = 5.0;
    bool use_true_phase = false;  // oracle mode
    std::optional<Trigger> trigger_filter;
};

BinnedData bin_samples(const AcquisitionDataset& dataset, const BinOptions& opts = {});

struct MaxlikOptions {
    int n_max = 10;
    int max_iter = 2000;
    double loglik_tol = 1e-10;  // per-count log-likelihood change
    double dilution = 0.5;      // engaged only after a monotonicity violation
};

struct ReconstructionReport {
    DensityMatrix rho;
    int iterations = 0;
    double final_loglik = 0.0;
    std::vector<double> loglik_trace;
    bool converged = false;
    bool dilution_engaged = false;
    int floored_bins = 0;  // bins whose predicted probability hit the floor
};

/// Iterates rho <- N[R rho R], R = sum_j (f_j / Tr(Pi_j rho)) Pi_j over the
/// occupied bins, POVMs corrected for efficiency eta. The log-likelihood trace
/// is non-decreasing; a decrease beyond 1e-9 reverts the step and engages the
/// diluted iteration R -> (I + eps R)/(1 + eps).
ReconstructionReport maxlik_reconstruct(const BinnedData& data, double eta,
                                        const MaxlikOptions& opts = {});

/// sum_j f_j ln Tr(Pi_j rho), f_j = counts_j / total.
double loglikelihood(const DensityMatrix& rho, const BinnedData& data, double eta);

/// All lossy POVM elements of the binning, [phase][q]. Sum over q at fixed
/// phase is the identity.
std::vector<std::vector<PovmElement>> build_lossy_povms(const BinnedData& data, double eta,
                                                        int n_max);

}  // namespace qse
