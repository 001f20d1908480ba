#pragma once

#include <vector>

#include "qse/fock.hpp"

// Multimode optical-circuit simulation: SPDC source, ancilla injection,
// beamsplitters, click detectors and coincidence heralding, plus the
// closed-form heralded amplitudes the brute force is checked against.

namespace qse {

enum class BsConvention {
    RealSymmetric,   // a -> sqrt(t) a + sqrt(1-t) b,   b -> sqrt(1-t) a - sqrt(t) b
    PhaseSymmetric,  // a -> sqrt(t) a + i sqrt(1-t) b, b -> i sqrt(1-t) a + sqrt(t) b
};

enum class DetectorKind { SinglePhotonPerturbative, NonResolvingClick };

struct DetectorModel {
    DetectorKind kind = DetectorKind::SinglePhotonPerturbative;
    double efficiency = 1.0;       // nu in [0,1]
    double dark_count_prob = 0.0;  // d in [0,1)

    // Click probability given n photons in the watched mode, with an
    // independent Poisson background of mean extra_intensity photons
    // (distinguishable light hitting the same detector) marginalized in.
    //   perturbative:   nu [n_tot = 1], OR-ed with a dark count
    //   non-resolving:  1 - (1-d)(1-nu)^n_tot
    std::vector<double> click_weights(int n_max, double extra_intensity = 0.0) const;

    void validate() const;
};

// Pure state of mode_count modes, each truncated at local_dim-1 photons.
// Amplitudes are stored row-major over occupation tuples, mode 0 slowest.
// States may be unnormalized mid-pipeline; norm2() reports the weight.
struct MultimodeState {
    int mode_count = 0;
    int local_dim = 0;
    std::vector<Complex> amps;

    static MultimodeState vacuum(int modes, int n_max);

    std::size_t size() const { return amps.size(); }
    std::size_t stride(int mode) const;
    double norm2() const;
    Complex& at(const std::vector<int>& occ);
    Complex at(const std::vector<int>& occ) const;

    /// Probability (relative to norm2) of occupying the top level of `mode`;
    /// the truncation monitor.
    double top_level_probability(int mode) const;
};

/// |0,0> + gamma |1,1> + ... + gamma^order |order,order>, signal mode first.
MultimodeState spdc_state(double gamma, int n_max, int order = 2, bool normalized = false);

MultimodeState apply_beamsplitter(const MultimodeState& state, int mode_a, int mode_b,
                                  double transmissivity,
                                  BsConvention convention = BsConvention::RealSymmetric);

/// Appends a fresh mode holding the truncated coherent state |alpha>.
MultimodeState inject_ancilla(const MultimodeState& state, Complex alpha);

struct ClickReduction {
    // Conditional states on the remaining modes, one branch per photon number
    // of the measured mode, scaled by sqrt of its click weight. The heralded
    // (unnormalized) density operator is the sum of branch outer products.
    std::vector<MultimodeState> branches;
    double weight = 0.0;  // total click probability = sum of branch norms
};

ClickReduction click_reduce(const MultimodeState& state, int mode, const DetectorModel& det,
                            double extra_intensity = 0.0);

/// Traces out every mode except keep_mode: sum of outer products over the
/// discarded occupations. Unnormalized.
DensityMatrix reduce_to_density(const MultimodeState& state, int keep_mode);

struct HeraldGeometry {
    BsConvention convention = BsConvention::RealSymmetric;
    // Which BS1 output feeds SPCM1 (the other continues to BS2), and which BS2
    // output feeds SPCM2 (the other is the classical monitoring port). The
    // defaults reproduce the closed-form amplitudes verbatim.
    bool spcm1_on_idler_port = true;
    bool spcm2_on_mixed_port = true;
};

struct HeraldOptions {
    int n_max = 5;           // per-mode photon cutoff
    int spdc_order = 2;      // highest pair term kept in the source
    HeraldGeometry geometry;
    double truncation_tol = 1e-8;  // max tolerated top-level occupation probability
};

struct HeraldResult {
    DensityMatrix signal;        // unit trace
    double success_probability;  // herald probability per pulse
};

/// Full brute-force coincidence herald: SPDC, |alpha> on BS1, |beta> on BS2,
/// SPCM1 + SPCM2 in coincidence, monitor port traced out.
HeraldResult herald_signal(Complex alpha, Complex beta, double gamma, const DetectorModel& det,
                           const HeraldOptions& opt = {});

/// Single-SPCM herald with one ancilla (no second beamsplitter).
HeraldResult herald_singles(Complex alpha, double gamma, const DetectorModel& det,
                            const HeraldOptions& opt = {});

// Brute-force pipelines with independent Poisson background light of the given
// mean intensities folded into each detector. Used by the mode-mismatch model.
HeraldResult herald_signal_with_background(Complex alpha, Complex beta, double gamma,
                                           const DetectorModel& det, const HeraldOptions& opt,
                                           double extra_spcm1, double extra_spcm2);
HeraldResult herald_singles_with_background(Complex alpha, double gamma,
                                            const DetectorModel& det, const HeraldOptions& opt,
                                            double extra_spcm1);

/// Signal state heralded by an SPCM2-only click (used for the second singles
/// trigger stream); monitor, SPCM1 port and idler leftovers traced out.
HeraldResult herald_spcm2_singles(Complex alpha, Complex beta, double gamma,
                                  const DetectorModel& det, const HeraldOptions& opt = {},
                                  double extra_spcm2 = 0.0);

struct Eq2Amplitudes {
    Complex a0, a1, a2;      // unnormalized closed-form triple
    FockVector normalized;   // 3-component unit vector
};

/// a0 = -alpha^2/(2 sqrt 2) + alpha beta / 2, a1 = beta gamma / 2, a2 = gamma^2 / 2.
Eq2Amplitudes eq2_amplitudes(Complex alpha, Complex beta, double gamma);

/// normalize(alpha |0> + gamma |1>), the single-SPCM closed form.
FockVector singles_heralded_state(Complex alpha, double gamma);

}  // namespace qse
