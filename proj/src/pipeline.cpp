#include "qse/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qse/rng.hpp"

namespace qse {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex polar_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("mag") || !j.contains("phase_rad"))
        throw std::invalid_argument(field + ": expected {\"mag\": m, \"phase_rad\": p}");
    const double mag = j.at("mag").get<double>();
    const double phase = j.at("phase_rad").get<double>();
    if (mag < 0.0) throw std::invalid_argument(field + ".mag: must be >= 0");
    return std::polar(mag, phase);
}

nlohmann::json polar_to_json(Complex z) {
    return {{"mag", std::abs(z)}, {"phase_rad", std::abs(z) == 0.0 ? 0.0 : std::arg(z)}};
}

std::string preparation_name(Preparation p) {
    switch (p) {
        case Preparation::Coincidence: return "coincidence";
        case Preparation::Spcm1Singles: return "spcm1";
        case Preparation::Vacuum: return "vacuum";
    }
    throw std::logic_error("preparation_name: bad enum");
}

Preparation preparation_from_name(const std::string& s) {
    if (s == "coincidence") return Preparation::Coincidence;
    if (s == "spcm1") return Preparation::Spcm1Singles;
    if (s == "vacuum") return Preparation::Vacuum;
    throw std::invalid_argument("preparation: unknown mode '" + s + "'");
}

std::string constraint_name(FitConstraint c) {
    switch (c) {
        case FitConstraint::Free: return "free";
        case FitConstraint::A0Zero: return "a0_zero";
        case FitConstraint::A1Zero: return "a1_zero";
        case FitConstraint::A2Zero: return "a2_zero";
        case FitConstraint::PhasesEqual: return "phases_equal";
    }
    throw std::logic_error("constraint_name: bad enum");
}

FitConstraint constraint_from_name(const std::string& s) {
    if (s == "free") return FitConstraint::Free;
    if (s == "a0_zero") return FitConstraint::A0Zero;
    if (s == "a1_zero") return FitConstraint::A1Zero;
    if (s == "a2_zero") return FitConstraint::A2Zero;
    if (s == "phases_equal") return FitConstraint::PhasesEqual;
    throw std::invalid_argument("analysis.fit_constraint: unknown constraint '" + s + "'");
}

HeraldOptions herald_options(const RunConfig& cfg) {
    HeraldOptions opt;
    opt.n_max = cfg.network_n_max;
    opt.spdc_order = cfg.spdc_order;
    opt.geometry = cfg.geometry;
    return opt;
}

}  // namespace

double RunConfig::effective_duration() const {
    if (target_coincidence_count)
        return static_cast<double>(*target_coincidence_count) / rates.coincidence_hz;
    return duration_s;
}

void RunConfig::validate() const {
    if (!seed_set) throw std::invalid_argument("seed: required");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma: must be in [0, 1), got " + std::to_string(gamma));
    imperfections.validate();
    detector.validate();
    if (!(rates.coincidence_hz > 0.0))
        throw std::invalid_argument("rates.coincidence_hz: must be > 0");
    if (!(rates.singles_hz > 0.0))
        throw std::invalid_argument("rates.singles_hz: must be > 0");
    if (!(duration_s >= 0.0)) throw std::invalid_argument("duration_s: must be >= 0");
    if (target_coincidence_count && *target_coincidence_count <= 0)
        throw std::invalid_argument("target_coincidence_count: must be > 0");
    if (!(drift_step_s > 0.0)) throw std::invalid_argument("drift_step_s: must be > 0");
    if (!(phase_window_s > 0.0)) throw std::invalid_argument("phase_window_s: must be > 0");
    if (spdc_order < 1 || spdc_order > network_n_max)
        throw std::invalid_argument("spdc_order: must be in [1, network_n_max]");
    if (network_n_max < 3)
        throw std::invalid_argument("truncation.network_n_max: must be >= 3");
    if (tomo_n_max < 2) throw std::invalid_argument("truncation.tomo_n_max: must be >= 2");
    if (bins.phase_bins < 1) throw std::invalid_argument("bins.phase_bins: must be >= 1");
    if (bins.q_bins < 1) throw std::invalid_argument("bins.q_bins: must be >= 1");
    if (!(bins.q_max > bins.q_min))
        throw std::invalid_argument("bins.q_max: must exceed bins.q_min");
    if (maxlik.max_iter < 0) throw std::invalid_argument("maxlik.max_iter: must be >= 0");
    if (!(maxlik.loglik_tol > 0.0)) throw std::invalid_argument("maxlik.loglik_tol: must be > 0");
    if (!(maxlik.dilution > 0.0)) throw std::invalid_argument("maxlik.dilution: must be > 0");
    if (grid_points < 2) throw std::invalid_argument("analysis.grid_points: must be >= 2");
    if (!(grid_max > grid_min))
        throw std::invalid_argument("analysis.grid_max: must exceed analysis.grid_min");
    if (!(kitten_alpha >= 0.0))
        throw std::invalid_argument("analysis.kitten_alpha: must be >= 0");
    for (const auto* t : {&min_fidelity_vs_true, &min_fidelity_vs_ideal})
        if (*t && (**t < 0.0 || **t > 1.0))
            throw std::invalid_argument("thresholds: fidelity bounds must be in [0, 1]");
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    const auto get = [&](const char* key, auto def) {
        using T = decltype(def);
        return j.contains(key) ? j.at(key).get<T>() : def;
    };
    cfg.name = get("name", std::string("custom"));
    if (j.contains("alpha")) cfg.alpha = polar_from_json(j.at("alpha"), "alpha");
    if (j.contains("beta")) cfg.beta = polar_from_json(j.at("beta"), "beta");
    cfg.gamma = get("gamma", 0.1);
    if (j.contains("preparation"))
        cfg.preparation = preparation_from_name(j.at("preparation").get<std::string>());
    cfg.spdc_order = get("spdc_order", 2);

    if (j.contains("imperfections")) {
        const auto& im = j.at("imperfections");
        const auto getf = [&](const char* key, double def) {
            return im.contains(key) ? im.at(key).get<double>() : def;
        };
        cfg.imperfections.eta = getf("eta", 0.55);
        cfg.imperfections.xi = getf("xi", 1.0);
        cfg.imperfections.dark_count_prob = getf("dark_count_prob", 0.0);
        cfg.imperfections.phase_drift_rate = getf("phase_drift_rate_rad_per_s", 0.5);
        cfg.imperfections.relative_phase_jitter = getf("relative_phase_jitter_rad", 0.0);
    }
    if (j.contains("detector")) {
        const auto& d = j.at("detector");
        if (d.contains("kind")) {
            const auto kind = d.at("kind").get<std::string>();
            if (kind == "single-photon-perturbative")
                cfg.detector.kind = DetectorKind::SinglePhotonPerturbative;
            else if (kind == "non-resolving-click")
                cfg.detector.kind = DetectorKind::NonResolvingClick;
            else
                throw std::invalid_argument("detector.kind: unknown kind '" + kind + "'");
        }
        if (d.contains("efficiency")) cfg.detector.efficiency = d.at("efficiency").get<double>();
        if (d.contains("dark_count_prob"))
            cfg.detector.dark_count_prob = d.at("dark_count_prob").get<double>();
    }
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        if (g.contains("bs_convention")) {
            const auto conv = g.at("bs_convention").get<std::string>();
            if (conv == "real-symmetric")
                cfg.geometry.convention = BsConvention::RealSymmetric;
            else if (conv == "phase-symmetric")
                cfg.geometry.convention = BsConvention::PhaseSymmetric;
            else
                throw std::invalid_argument("geometry.bs_convention: unknown convention '" +
                                            conv + "'");
        }
        if (g.contains("spcm1_on_idler_port"))
            cfg.geometry.spcm1_on_idler_port = g.at("spcm1_on_idler_port").get<bool>();
        if (g.contains("spcm2_on_mixed_port"))
            cfg.geometry.spcm2_on_mixed_port = g.at("spcm2_on_mixed_port").get<bool>();
    }
    cfg.initial_phase = get("initial_phase_rad", 0.0);
    if (j.contains("rates")) {
        const auto& r = j.at("rates");
        if (r.contains("coincidence_hz"))
            cfg.rates.coincidence_hz = r.at("coincidence_hz").get<double>();
        if (r.contains("singles_hz")) cfg.rates.singles_hz = r.at("singles_hz").get<double>();
    }
    cfg.duration_s = get("duration_s", 250.0);
    if (j.contains("target_coincidence_count") && !j.at("target_coincidence_count").is_null())
        cfg.target_coincidence_count = j.at("target_coincidence_count").get<std::int64_t>();
    cfg.drift_step_s = get("drift_step_s", 1e-3);
    cfg.phase_window_s = get("phase_window_s", 0.1);
    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        if (t.contains("network_n_max")) cfg.network_n_max = t.at("network_n_max").get<int>();
        if (t.contains("tomo_n_max")) cfg.tomo_n_max = t.at("tomo_n_max").get<int>();
    }
    if (j.contains("bins")) {
        const auto& b = j.at("bins");
        if (b.contains("phase_bins")) cfg.bins.phase_bins = b.at("phase_bins").get<int>();
        if (b.contains("q_bins")) cfg.bins.q_bins = b.at("q_bins").get<int>();
        if (b.contains("q_min")) cfg.bins.q_min = b.at("q_min").get<double>();
        if (b.contains("q_max")) cfg.bins.q_max = b.at("q_max").get<double>();
    }
    if (j.contains("maxlik")) {
        const auto& m = j.at("maxlik");
        if (m.contains("max_iter")) cfg.maxlik.max_iter = m.at("max_iter").get<int>();
        if (m.contains("loglik_tol")) cfg.maxlik.loglik_tol = m.at("loglik_tol").get<double>();
        if (m.contains("dilution")) cfg.maxlik.dilution = m.at("dilution").get<double>();
    }
    if (j.contains("analysis")) {
        const auto& a = j.at("analysis");
        if (a.contains("grid_min")) cfg.grid_min = a.at("grid_min").get<double>();
        if (a.contains("grid_max")) cfg.grid_max = a.at("grid_max").get<double>();
        if (a.contains("grid_points")) cfg.grid_points = a.at("grid_points").get<int>();
        if (a.contains("kitten_alpha")) cfg.kitten_alpha = a.at("kitten_alpha").get<double>();
        if (a.contains("fit_constraint"))
            cfg.fit_constraint = constraint_from_name(a.at("fit_constraint").get<std::string>());
    }
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        if (t.contains("min_fidelity_vs_true"))
            cfg.min_fidelity_vs_true = t.at("min_fidelity_vs_true").get<double>();
        if (t.contains("min_fidelity_vs_ideal"))
            cfg.min_fidelity_vs_ideal = t.at("min_fidelity_vs_ideal").get<double>();
    }
    cfg.oracle_phase = get("oracle_phase", false);
    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.seed_set = true;
    }
    cfg.maxlik.n_max = cfg.tomo_n_max;
    cfg.validate();
    return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["name"] = cfg.name;
    j["alpha"] = polar_to_json(cfg.alpha);
    j["beta"] = polar_to_json(cfg.beta);
    j["gamma"] = cfg.gamma;
    j["preparation"] = preparation_name(cfg.preparation);
    j["spdc_order"] = cfg.spdc_order;
    j["imperfections"] = {
        {"eta", cfg.imperfections.eta},
        {"xi", cfg.imperfections.xi},
        {"dark_count_prob", cfg.imperfections.dark_count_prob},
        {"phase_drift_rate_rad_per_s", cfg.imperfections.phase_drift_rate},
        {"relative_phase_jitter_rad", cfg.imperfections.relative_phase_jitter}};
    j["detector"] = {
        {"kind", cfg.detector.kind == DetectorKind::SinglePhotonPerturbative
                     ? "single-photon-perturbative"
                     : "non-resolving-click"},
        {"efficiency", cfg.detector.efficiency},
        {"dark_count_prob", cfg.detector.dark_count_prob}};
    j["geometry"] = {
        {"bs_convention", cfg.geometry.convention == BsConvention::RealSymmetric
                              ? "real-symmetric"
                              : "phase-symmetric"},
        {"spcm1_on_idler_port", cfg.geometry.spcm1_on_idler_port},
        {"spcm2_on_mixed_port", cfg.geometry.spcm2_on_mixed_port}};
    j["initial_phase_rad"] = cfg.initial_phase;
    j["rates"] = {{"coincidence_hz", cfg.rates.coincidence_hz},
                  {"singles_hz", cfg.rates.singles_hz}};
    j["duration_s"] = cfg.duration_s;
    if (cfg.target_coincidence_count)
        j["target_coincidence_count"] = *cfg.target_coincidence_count;
    j["drift_step_s"] = cfg.drift_step_s;
    j["phase_window_s"] = cfg.phase_window_s;
    j["truncation"] = {{"network_n_max", cfg.network_n_max}, {"tomo_n_max", cfg.tomo_n_max}};
    j["bins"] = {{"phase_bins", cfg.bins.phase_bins},
                 {"q_bins", cfg.bins.q_bins},
                 {"q_min", cfg.bins.q_min},
                 {"q_max", cfg.bins.q_max}};
    j["maxlik"] = {{"max_iter", cfg.maxlik.max_iter},
                   {"loglik_tol", cfg.maxlik.loglik_tol},
                   {"dilution", cfg.maxlik.dilution}};
    j["analysis"] = {{"grid_min", cfg.grid_min},
                     {"grid_max", cfg.grid_max},
                     {"grid_points", cfg.grid_points},
                     {"kitten_alpha", cfg.kitten_alpha},
                     {"fit_constraint", constraint_name(cfg.fit_constraint)}};
    if (cfg.min_fidelity_vs_true || cfg.min_fidelity_vs_ideal) {
        nlohmann::json t;
        if (cfg.min_fidelity_vs_true) t["min_fidelity_vs_true"] = *cfg.min_fidelity_vs_true;
        if (cfg.min_fidelity_vs_ideal) t["min_fidelity_vs_ideal"] = *cfg.min_fidelity_vs_ideal;
        j["thresholds"] = t;
    }
    j["oracle_phase"] = cfg.oracle_phase;
    j["seed"] = cfg.seed;
    return j;
}

std::vector<std::string> preset_names() {
    return {"fock0",     "fock1",   "fock2",        "zero-one",     "zero-two",
            "one-two",   "equal-phase", "complex-plus", "complex-minus"};
}

RunConfig preset(const std::string& name) {
    RunConfig cfg;
    cfg.name = name;
    cfg.seed = 1;
    cfg.seed_set = true;
    cfg.rates = {200.0, 8000.0};
    cfg.duration_s = 250.0;
    cfg.min_fidelity_vs_true = 0.95;
    cfg.min_fidelity_vs_ideal = 0.76;
    const Complex i_unit(0.0, 1.0);

    if (name == "fock0") {
        cfg.preparation = Preparation::Vacuum;
        cfg.alpha = cfg.beta = 0.0;
        cfg.oracle_phase = true;  // singles streams carry no phase information
    } else if (name == "fock1") {
        cfg.preparation = Preparation::Spcm1Singles;
        cfg.alpha = cfg.beta = 0.0;
        cfg.oracle_phase = true;
    } else if (name == "fock2") {
        cfg.preparation = Preparation::Coincidence;
        cfg.alpha = cfg.beta = 0.0;
        cfg.oracle_phase = true;
    } else if (name == "zero-one") {
        cfg.preparation = Preparation::Spcm1Singles;
        cfg.alpha = 0.1;
        cfg.beta = 0.0;
    } else if (name == "zero-two") {
        // vacuum+|2> superposition approximating the even kitten at alpha=0.60
        cfg.preparation = Preparation::Coincidence;
        cfg.alpha = 0.2357 * i_unit;
        cfg.beta = 0.0;
    } else if (name == "one-two") {
        cfg.preparation = Preparation::Coincidence;
        cfg.alpha = 0.0;
        cfg.beta = 0.1;
    } else if (name == "equal-phase") {
        cfg.preparation = Preparation::Coincidence;
        cfg.alpha = 0.1;
        cfg.beta = 0.1;
    } else if (name == "complex-plus") {
        cfg.preparation = Preparation::Coincidence;
        cfg.alpha = 0.1;
        cfg.beta = 0.1 * i_unit;
    } else if (name == "complex-minus") {
        cfg.preparation = Preparation::Coincidence;
        cfg.alpha = 0.1;
        cfg.beta = -0.1 * i_unit;
    } else {
        std::string names;
        for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
        throw std::invalid_argument("preset: unknown preset '" + name + "' (available: " +
                                    names + ")");
    }
    cfg.validate();
    return cfg;
}

Trigger primary_trigger(const RunConfig& cfg) {
    return cfg.preparation == Preparation::Spcm1Singles ? Trigger::Spcm1
                                                        : Trigger::Coincidence;
}

PreparedStates prepare_states(const RunConfig& cfg) {
    cfg.validate();
    PreparedStates out;
    const HeraldOptions opt = herald_options(cfg);
    const int dim = cfg.network_n_max + 1;

    if (cfg.imperfections.relative_phase_jitter > 0.0) {
        Rng rng(stream_seed(cfg.seed, Stream::Jitter, 0));
        out.jitter_draw = cfg.imperfections.relative_phase_jitter * rng.normal();
    }
    const Complex beta_eff = cfg.beta * std::exp(Complex(0, out.jitter_draw));

    switch (cfg.preparation) {
        case Preparation::Coincidence: {
            const auto ideal = herald_signal(cfg.alpha, cfg.beta, cfg.gamma, cfg.detector, opt);
            const auto imperfect = herald_signal_imperfect(cfg.alpha, beta_eff, cfg.gamma,
                                                           cfg.imperfections, cfg.detector, opt);
            out.ideal = ideal.signal;
            out.imperfect = imperfect.signal;
            out.success_probability_ideal = ideal.success_probability;
            out.success_probability = imperfect.success_probability;
            const auto eq2 = eq2_amplitudes(cfg.alpha, cfg.beta, cfg.gamma);
            out.a0 = eq2.a0;
            out.a1 = eq2.a1;
            out.a2 = eq2.a2;
            out.ideal_target = embed(eq2.normalized, cfg.tomo_n_max);
            break;
        }
        case Preparation::Spcm1Singles: {
            const auto ideal = herald_singles(cfg.alpha, cfg.gamma, cfg.detector, opt);
            const auto imperfect = herald_singles_imperfect(cfg.alpha, cfg.gamma,
                                                            cfg.imperfections, cfg.detector, opt);
            out.ideal = ideal.signal;
            out.imperfect = imperfect.signal;
            out.success_probability_ideal = ideal.success_probability;
            out.success_probability = imperfect.success_probability;
            out.a0 = cfg.alpha;
            out.a1 = cfg.gamma;
            out.a2 = 0.0;
            out.ideal_target = embed(singles_heralded_state(cfg.alpha, cfg.gamma),
                                     cfg.tomo_n_max);
            break;
        }
        case Preparation::Vacuum: {
            DensityMatrix vac = DensityMatrix::Zero(dim, dim);
            vac(0, 0) = 1.0;
            out.ideal = vac;
            out.imperfect = vac;
            out.a0 = 1.0;
            out.a1 = 0.0;
            out.a2 = 0.0;
            FockVector target = FockVector::Zero(cfg.tomo_n_max + 1);
            target[0] = 1.0;
            out.ideal_target = target;
            break;
        }
    }

    out.singles1 =
        herald_singles_imperfect(cfg.alpha, cfg.gamma, cfg.imperfections, cfg.detector, opt)
            .signal;
    out.singles2 = herald_spcm2_singles_imperfect(cfg.alpha, beta_eff, cfg.gamma,
                                                  cfg.imperfections, cfg.detector, opt)
                       .signal;
    return out;
}

AcquisitionDataset acquire(const RunConfig& cfg, const PreparedStates& states) {
    const double duration = cfg.effective_duration();
    const auto drift =
        simulate_phase_drift(cfg.imperfections.phase_drift_rate, duration, cfg.drift_step_s,
                             stream_seed(cfg.seed, Stream::Drift, 0), cfg.initial_phase);
    const double eta = cfg.imperfections.eta;
    const DensityMatrix primary = loss_channel(embed(states.imperfect, cfg.tomo_n_max), eta);
    const DensityMatrix s1 = loss_channel(embed(states.singles1, cfg.tomo_n_max), eta);
    const DensityMatrix s2 = loss_channel(embed(states.singles2, cfg.tomo_n_max), eta);
    return simulate_acquisition(primary, primary_trigger(cfg), s1, s2, cfg.rates, duration,
                                drift, cfg.seed);
}

void estimate_phases(const RunConfig& cfg, AcquisitionDataset& ds) {
    // Envelopes from the nominal (jitter-free) singles families after loss:
    // the estimator knows the configured model, not the per-run jitter draw.
    const HeraldOptions opt = herald_options(cfg);
    const auto s1 =
        herald_singles_imperfect(cfg.alpha, cfg.gamma, cfg.imperfections, cfg.detector, opt)
            .signal;
    const auto s2 = herald_spcm2_singles_imperfect(cfg.alpha, cfg.beta, cfg.gamma,
                                                   cfg.imperfections, cfg.detector, opt)
                        .signal;
    PhaseEstimateOptions opts;
    opts.window_s = cfg.phase_window_s;
    opts.envelope_a_spcm1 = expect_a(loss_channel(s1, cfg.imperfections.eta));
    opts.envelope_a_spcm2 = expect_a(loss_channel(s2, cfg.imperfections.eta));
    estimate_phase(ds, opts);
}

ReconstructionReport reconstruct(const RunConfig& cfg, const AcquisitionDataset& ds,
                                 bool oracle_phase) {
    BinOptions bins = cfg.bins;
    bins.use_true_phase = oracle_phase;
    bins.trigger_filter = primary_trigger(cfg);
    const BinnedData binned = bin_samples(ds, bins);
    MaxlikOptions opts = cfg.maxlik;
    opts.n_max = cfg.tomo_n_max;
    return maxlik_reconstruct(binned, cfg.imperfections.eta, opts);
}

PipelineResult run_pipeline(const RunConfig& cfg) {
    PipelineResult res;
    res.states = prepare_states(cfg);
    res.dataset = acquire(cfg, res.states);
    const bool oracle = cfg.oracle_phase;
    if (!oracle) estimate_phases(cfg, res.dataset);
    res.report = reconstruct(cfg, res.dataset, oracle);
    res.fidelity_vs_true =
        uhlmann_fidelity(res.report.rho, embed(res.states.imperfect, cfg.tomo_n_max));
    res.fidelity_vs_ideal = fidelity(res.report.rho, res.states.ideal_target);
    res.fit = fit_eq2(res.report.rho, cfg.fit_constraint);
    res.kitten = kitten_fidelity(res.report.rho, cfg.kitten_alpha);
    res.thresholds_met = true;
    if (cfg.min_fidelity_vs_true && res.fidelity_vs_true < *cfg.min_fidelity_vs_true)
        res.thresholds_met = false;
    if (cfg.min_fidelity_vs_ideal && res.fidelity_vs_ideal < *cfg.min_fidelity_vs_ideal)
        res.thresholds_met = false;
    return res;
}

nlohmann::json pipeline_summary(const RunConfig& cfg, const PipelineResult& result) {
    std::size_t n_primary = 0, n_s1 = 0, n_s2 = 0;
    const Trigger primary = primary_trigger(cfg);
    for (const auto& r : result.dataset.records) {
        if (r.trigger == primary) ++n_primary;
        if (r.trigger == Trigger::Spcm1) ++n_s1;
        if (r.trigger == Trigger::Spcm2) ++n_s2;
    }
    const auto g = gauge_fix_a01(result.fit.a0, result.fit.a1, result.fit.a2);
    nlohmann::json j;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;
    j["success_probability"] = result.states.success_probability;
    j["success_probability_ideal"] = result.states.success_probability_ideal;
    j["records"] = {{"total", result.dataset.records.size()},
                    {"primary", n_primary},
                    {"spcm1", n_s1},
                    {"spcm2", n_s2}};
    j["reconstruction"] = {{"iterations", result.report.iterations},
                           {"converged", result.report.converged},
                           {"final_loglik", result.report.final_loglik}};
    j["fidelity_vs_true_imperfect"] = result.fidelity_vs_true;
    j["fidelity_vs_ideal_target"] = result.fidelity_vs_ideal;
    j["fit"] = {{"constraint", constraint_name(result.fit.constraint)},
                {"a0", complex_to_json(result.fit.a0)},
                {"a1", complex_to_json(result.fit.a1)},
                {"a2", complex_to_json(result.fit.a2)},
                {"fidelity", result.fit.fidelity}};
    j["fit_gauge_fixed"] = {{"a0", complex_to_json(g[0])},
                            {"a1", complex_to_json(g[1])},
                            {"a2", complex_to_json(g[2])}};
    j["kitten_alpha"] = cfg.kitten_alpha;
    j["kitten_fidelity"] = result.kitten;
    j["thresholds_met"] = result.thresholds_met;
    return j;
}

}  // namespace qse
