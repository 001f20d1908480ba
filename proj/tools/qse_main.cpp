// qse: configuration-driven simulator for heralded preparation of 0/1/2-photon
// superpositions and their homodyne-tomography reconstruction.
//
// Subcommands: prepare, acquire, reconstruct, analyze, pipeline.
// Exit codes: 0 success, 1 validation error, 2 runtime/threshold failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qse/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset_name;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    bool oracle_phase = false;
    bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_oracle = true) {
    cmd->add_option("--config", args.config_path, "Path to a run-config JSON file");
    cmd->add_option("--preset", args.preset_name,
                    "Built-in preset name (see `qse presets`)");
    cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed_override, "Override the config seed");
    if (with_oracle)
        cmd->add_flag("--oracle-phase", args.oracle_phase,
                      "Bin by true phases instead of estimated ones");
    cmd->add_flag("--dry-run", args.dry_run, "Validate the configuration and exit");
}

qse::RunConfig load_config(const CommonArgs& args) {
    if (args.config_path.empty() && args.preset_name.empty())
        throw std::invalid_argument("config: provide --config PATH or --preset NAME");
    qse::RunConfig cfg;
    if (!args.preset_name.empty()) cfg = qse::preset(args.preset_name);
    if (!args.config_path.empty()) cfg = qse::config_from_json(qse::read_json_file(args.config_path));
    if (args.seed_override) {
        cfg.seed = *args.seed_override;
        cfg.seed_set = true;
    }
    if (args.oracle_phase) cfg.oracle_phase = true;
    cfg.validate();
    return cfg;
}

std::string path_in(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return (fs::path(args.out_dir) / name).string();
}

json prepare_to_json(const qse::RunConfig& cfg, const qse::PreparedStates& st) {
    json j;
    j["config"] = qse::config_to_json(cfg);
    j["closed_form"] = {{"a0", qse::complex_to_json(st.a0)},
                        {"a1", qse::complex_to_json(st.a1)},
                        {"a2", qse::complex_to_json(st.a2)}};
    j["ideal_target"] = qse::vector_to_json(st.ideal_target);
    j["ideal_rho"] = qse::matrix_to_json(st.ideal);
    j["imperfect_rho"] = qse::matrix_to_json(st.imperfect);
    j["singles1_rho"] = qse::matrix_to_json(st.singles1);
    j["singles2_rho"] = qse::matrix_to_json(st.singles2);
    j["success_probability"] = st.success_probability;
    j["success_probability_ideal"] = st.success_probability_ideal;
    return j;
}

int cmd_prepare(const CommonArgs& args) {
    const auto cfg = load_config(args);
    if (args.dry_run) return 0;
    const auto states = qse::prepare_states(cfg);
    qse::write_json_file(path_in(args, "state.json"), prepare_to_json(cfg, states));
    std::cout << "wrote " << path_in(args, "state.json")
              << " (success probability " << states.success_probability << ")\n";
    return 0;
}

int cmd_acquire(const CommonArgs& args) {
    const auto cfg = load_config(args);
    if (args.dry_run) return 0;
    const auto states = qse::prepare_states(cfg);
    const auto ds = qse::acquire(cfg, states);
    if (ds.records.empty()) std::cerr << "warning: empty dataset (zero duration?)\n";
    qse::write_dataset_csv_file(ds, path_in(args, "dataset.csv"));
    std::size_t n_primary = 0;
    for (const auto& r : ds.records)
        if (r.trigger == qse::primary_trigger(cfg)) ++n_primary;
    std::cout << "wrote " << path_in(args, "dataset.csv") << " (" << ds.records.size()
              << " records, " << n_primary << " primary)\n";
    return 0;
}

int cmd_reconstruct(const CommonArgs& args, const std::string& dataset_path) {
    const auto cfg = load_config(args);
    if (args.dry_run) return 0;
    const std::string ds_path =
        dataset_path.empty() ? path_in(args, "dataset.csv") : dataset_path;
    auto ds = qse::read_dataset_csv_file(ds_path);
    if (!cfg.oracle_phase) qse::estimate_phases(cfg, ds);
    const auto report = qse::reconstruct(cfg, ds, cfg.oracle_phase);
    qse::write_json_file(path_in(args, "report.json"), qse::report_to_json(report));
    std::cout << "wrote " << path_in(args, "report.json") << " (iterations "
              << report.iterations << ", converged " << (report.converged ? "yes" : "no")
              << ")\n";
    return 0;
}

int analyze_state(const qse::RunConfig& cfg, const qse::DensityMatrix& rho,
                  const CommonArgs& args) {
    const auto x = qse::linspace(cfg.grid_min, cfg.grid_max, cfg.grid_points);
    const auto grid = qse::wigner(rho, x, x);
    {
        std::ofstream out(path_in(args, "wigner.csv"));
        qse::write_wigner_csv(grid, out);
    }
    qse::write_json_file(path_in(args, "wigner.json"), qse::wigner_to_json(grid));

    const auto fit = qse::fit_eq2(rho, cfg.fit_constraint);
    const auto gauge = qse::gauge_fix_a01(fit.a0, fit.a1, fit.a2);
    const double kitten = qse::kitten_fidelity(rho, cfg.kitten_alpha);
    const auto stats = qse::photon_stats(rho);

    json fit_json;
    fit_json["constraint"] = (cfg.fit_constraint == qse::FitConstraint::Free) ? "free"
                             : (cfg.fit_constraint == qse::FitConstraint::A0Zero) ? "a0_zero"
                             : (cfg.fit_constraint == qse::FitConstraint::A1Zero) ? "a1_zero"
                             : (cfg.fit_constraint == qse::FitConstraint::A2Zero)
                                 ? "a2_zero"
                                 : "phases_equal";
    fit_json["a0"] = qse::complex_to_json(fit.a0);
    fit_json["a1"] = qse::complex_to_json(fit.a1);
    fit_json["a2"] = qse::complex_to_json(fit.a2);
    fit_json["a0_gauge_fixed"] = qse::complex_to_json(gauge[0]);
    fit_json["a1_gauge_fixed"] = qse::complex_to_json(gauge[1]);
    fit_json["a2_gauge_fixed"] = qse::complex_to_json(gauge[2]);
    fit_json["fidelity"] = fit.fidelity;
    fit_json["kitten_alpha"] = cfg.kitten_alpha;
    fit_json["kitten_fidelity"] = kitten;
    qse::write_json_file(path_in(args, "fit.json"), fit_json);

    std::ostringstream summary;
    summary << "mean photon number: " << stats.mean << "\n";
    summary << "populations:";
    for (Eigen::Index n = 0; n < std::min<Eigen::Index>(stats.populations.size(), 6); ++n)
        summary << " p" << n << "=" << stats.populations[n];
    summary << "\nfit fidelity: " << fit.fidelity << "\n";
    summary << "kitten fidelity (alpha=" << cfg.kitten_alpha << "): " << kitten << "\n";
    summary << "Wigner at origin: " << qse::wigner_point(rho, 0.0, 0.0) << "\n";
    qse::write_text_file(path_in(args, "summary.txt"), summary.str());
    std::cout << summary.str();
    return 0;
}

int cmd_analyze(const CommonArgs& args, const std::string& input_path,
                const std::string& which) {
    const auto cfg = load_config(args);
    if (args.dry_run) return 0;
    const std::string path = input_path.empty() ? path_in(args, "report.json") : input_path;
    const json j = qse::read_json_file(path);
    qse::DensityMatrix rho;
    if (j.contains("rho")) {
        rho = qse::matrix_from_json(j.at("rho"));
    } else if (j.contains("imperfect_rho")) {
        rho = qse::matrix_from_json(
            j.at(which == "ideal" ? "ideal_rho" : "imperfect_rho"));
    } else {
        throw std::invalid_argument("analyze: " + path +
                                    " holds neither a reconstruction report nor a state file");
    }
    return analyze_state(cfg, rho, args);
}

int cmd_pipeline(const CommonArgs& args) {
    const auto cfg = load_config(args);
    if (args.dry_run) return 0;
    const auto result = qse::run_pipeline(cfg);
    qse::write_json_file(path_in(args, "state.json"), prepare_to_json(cfg, result.states));
    qse::write_dataset_csv_file(result.dataset, path_in(args, "dataset.csv"));
    qse::write_json_file(path_in(args, "report.json"), qse::report_to_json(result.report));
    analyze_state(cfg, result.report.rho, args);
    qse::write_json_file(path_in(args, "summary.json"), qse::pipeline_summary(cfg, result));

    std::cout << "fidelity vs true imperfect state: " << result.fidelity_vs_true << "\n"
              << "fidelity vs ideal target:         " << result.fidelity_vs_ideal << "\n";
    if (!result.thresholds_met) {
        std::cerr << "error: preset thresholds not met\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heralded 0/1/2-photon state engineering and tomography simulator"};
    app.require_subcommand(1);

    CommonArgs prep_args, acq_args, rec_args, ana_args, pipe_args;
    std::string dataset_path, analyze_input, analyze_which = "imperfect";

    auto* prep = app.add_subcommand("prepare", "Compute heralded states and closed-form triple");
    add_common(prep, prep_args, false);
    auto* acq = app.add_subcommand("acquire", "Simulate a homodyne acquisition run");
    add_common(acq, acq_args, false);
    auto* rec = app.add_subcommand("reconstruct", "Estimate phases and reconstruct the state");
    add_common(rec, rec_args);
    rec->add_option("--dataset", dataset_path, "Dataset CSV (default: OUT/dataset.csv)");
    auto* ana = app.add_subcommand("analyze", "Wigner grid, fits and summary for a state");
    add_common(ana, ana_args);
    ana->add_option("--input", analyze_input, "Report or state JSON (default: OUT/report.json)");
    ana->add_option("--which", analyze_which, "ideal|imperfect when reading a state file")
        ->check(CLI::IsMember({"ideal", "imperfect"}));
    auto* pipe = app.add_subcommand("pipeline", "Run prepare -> acquire -> reconstruct -> analyze");
    add_common(pipe, pipe_args);
    auto* presets = app.add_subcommand("presets", "List built-in presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed()) {
            for (const auto& name : qse::preset_names()) std::cout << name << "\n";
            return 0;
        }
        if (prep->parsed()) return cmd_prepare(prep_args);
        if (acq->parsed()) return cmd_acquire(acq_args);
        if (rec->parsed()) return cmd_reconstruct(rec_args, dataset_path);
        if (ana->parsed()) return cmd_analyze(ana_args, analyze_input, analyze_which);
        if (pipe->parsed()) return cmd_pipeline(pipe_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
