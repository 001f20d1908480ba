#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qse/analysis.hpp"
#include "qse/imperfect.hpp"
#include "qse/io.hpp"
#include "qse/network.hpp"
#include "qse/tomo.hpp"

// Configuration-driven orchestration of the full run:
// prepare -> corrupt -> acquire -> estimate phase -> reconstruct -> analyze.
// All randomness flows from config.seed through per-stage streams.

namespace qse {

enum class Preparation { Coincidence, Spcm1Singles, Vacuum };

struct RunConfig {
    std::string name = "custom";
    Complex alpha{0, 0};
    Complex beta{0, 0};
    double gamma = 0.1;
    Preparation preparation = Preparation::Coincidence;
    int spdc_order = 2;

    ImperfectionConfig imperfections;
    DetectorModel detector;
    HeraldGeometry geometry;
    double initial_phase = 0.0;  // rad, drift trajectory start

    Rates rates;
    double duration_s = 250.0;
    std::optional<std::int64_t> target_coincidence_count;  // overrides duration
    double drift_step_s = 1e-3;
    double phase_window_s = 0.1;

    int network_n_max = 5;
    int tomo_n_max = 10;
    BinOptions bins;
    MaxlikOptions maxlik;

    // analysis
    double grid_min = -5.0, grid_max = 5.0;
    int grid_points = 201;
    double kitten_alpha = 0.6;
    FitConstraint fit_constraint = FitConstraint::Free;

    std::optional<double> min_fidelity_vs_true;   // thresholds (pipeline exit status)
    std::optional<double> min_fidelity_vs_ideal;
    bool oracle_phase = false;

    std::uint64_t seed = 0;
    bool seed_set = false;

    double effective_duration() const;
    void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

struct PreparedStates {
    DensityMatrix ideal;      // no mismatch, no dark counts, no jitter
    DensityMatrix imperfect;  // with xi, dark counts, relative-phase jitter
    DensityMatrix singles1;   // SPCM1 singles family (pre detection loss)
    DensityMatrix singles2;   // SPCM2 singles family
    Complex a0, a1, a2;       // closed-form triple for the configured preparation
    FockVector ideal_target;  // normalized ideal state, tomography dimension
    double success_probability = 1.0;        // imperfect pipeline
    double success_probability_ideal = 1.0;
    double jitter_draw = 0.0;                // rad, applied to arg(beta)
};

PreparedStates prepare_states(const RunConfig& cfg);

AcquisitionDataset acquire(const RunConfig& cfg, const PreparedStates& states);

/// Fills est_phase using the singles streams; envelopes come from the
/// nominal (jitter-free) singles states after detection loss.
void estimate_phases(const RunConfig& cfg, AcquisitionDataset& ds);

ReconstructionReport reconstruct(const RunConfig& cfg, const AcquisitionDataset& ds,
                                 bool oracle_phase);

Trigger primary_trigger(const RunConfig& cfg);

struct PipelineResult {
    PreparedStates states;
    AcquisitionDataset dataset;
    ReconstructionReport report;
    FitResult fit;
    double fidelity_vs_true = 0.0;
    double fidelity_vs_ideal = 0.0;
    double kitten = 0.0;
    bool thresholds_met = true;
};

PipelineResult run_pipeline(const RunConfig& cfg);

nlohmann::json pipeline_summary(const RunConfig& cfg, const PipelineResult& result);

}  // namespace qse
