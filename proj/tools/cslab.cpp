// cslab: command-line front end for the QCBP solver, the sampling-matrix
// diagnostics, and the experiment runners.
//
// Exit codes: 0 success, 2 configuration/parse error, 3 solver failure,
// 4 enumeration budget exceeded.

#include "csl/experiments.hpp"
#include "csl/io.hpp"
#include "csl/metrics.hpp"
#include "csl/solver.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using csl::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitBudget = 4;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> output_dir;
    std::optional<int> threads;
};

csl::ExperimentConfig resolve_config(const std::string& experiment,
                                     const std::string& config_path,
                                     const Overrides& ov) {
    csl::ExperimentConfig cfg;
    if (!config_path.empty())
        cfg = csl::ExperimentConfig::from_json(csl::load_json(config_path));
    cfg.experiment = experiment;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.trials) {
        cfg.trials = *ov.trials;
        cfg.fig2_trials = *ov.trials;
        cfg.svc_trials = *ov.trials;
    }
    if (ov.output_dir) cfg.output_dir = *ov.output_dir;
    if (ov.threads) cfg.threads = *ov.threads;
    return cfg;
}

int run_experiment_command(const std::string& experiment,
                           const std::string& config_path, const Overrides& ov,
                           int verbosity) {
    csl::ExperimentConfig cfg;
    try {
        cfg = resolve_config(experiment, config_path, ov);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    auto errors = cfg.validate();
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
        return kExitConfig;
    }

    fs::create_directories(cfg.output_dir);
    // the fully resolved configuration always sits next to the outputs
    csl::save_json((fs::path(cfg.output_dir) / "resolved_config.json").string(),
                   cfg.to_json());

    auto t0 = std::chrono::steady_clock::now();
    csl::ExperimentTable table;
    try {
        table = csl::run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string records_path = (fs::path(cfg.output_dir) / "records.csv").string();
    csl::write_records_csv(records_path, table,
                           "one row per (trial, grid point); experiment " +
                               cfg.experiment + ", master seed " +
                               std::to_string(cfg.seed));

    json summary;
    summary["experiment"] = cfg.experiment;
    summary["records"] = table.size();
    if (cfg.experiment == "fig1")
        summary["aggregates"] = csl::summarize(
            table, {"ratio", "matrix", "solver"}, {"error"});
    else if (cfg.experiment == "fig2")
        summary["aggregates"] = csl::summarize(table, {"N", "m"}, {"mu_trial"});
    else if (cfg.experiment == "fig3")
        summary["aggregates"] = csl::summarize(
            table, {"zeta", "eta"}, {"error_vs_ref", "eta_opt", "eta_cv"});
    else
        summary["aggregates"] = csl::summarize(
            table, {"system", "N", "m"},
            {"sv_deviation_trial", "mu_trial", "xi_trial"});
    summary["environment"] = {
        {"wall_time_s", elapsed},
        {"hardware_threads", std::thread::hardware_concurrency()}};
    csl::save_json((fs::path(cfg.output_dir) / "summary.json").string(), summary);

    if (verbosity > 0)
        std::cout << cfg.experiment << ": " << table.size() << " records -> "
                  << records_path << " (" << elapsed << " s)\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed sensing laboratory: QCBP solver, BOS sampling "
                 "matrices, robustness diagnostics, experiment runners"};
    app.require_subcommand(1);
    int verbosity = 1;
    app.add_flag("-q{0},--quiet{0}", verbosity, "suppress progress output");

    Overrides ov;
    std::string config_path;

    auto add_experiment = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "experiment config (JSON)");
        sub->add_option("--seed", ov.seed, "master seed override");
        sub->add_option("--trials", ov.trials, "trial count override");
        sub->add_option("--out", ov.output_dir, "output directory override");
        sub->add_option("--threads", ov.threads, "worker count override");
        return sub;
    };
    CLI::App* fig1 = add_experiment("fig1", "BP/QCBP error vs m/N sweep");
    CLI::App* fig2 = add_experiment("fig2", "Fourier cross-coherence vs m^2 bound");
    CLI::App* fig3 = add_experiment("fig3", "high-dimensional QCBP error vs eta");
    CLI::App* svc = add_experiment("sv-check", "singular value deviation check");

    // validate-config
    std::string vc_path;
    std::string vc_experiment = "fig1";
    CLI::App* vc = app.add_subcommand("validate-config",
                                      "validate an experiment config file");
    vc->add_option("--config", vc_path, "config path")->required();
    vc->add_option("--experiment", vc_experiment, "experiment the config is for");

    // solve
    std::string solve_matrix, solve_vector, solve_out = "solve_report.json";
    double solve_eta = 0.0;
    CLI::App* solve = app.add_subcommand("solve", "solve QCBP on serialized data");
    solve->add_option("--matrix", solve_matrix, "SensingMatrix JSON path")->required();
    solve->add_option("--y", solve_vector, "measurement vector JSON path")->required();
    solve->add_option("--eta", solve_eta, "constraint level eta");
    solve->add_option("--out", solve_out, "report output path");

    // metrics
    std::string met_matrix, met_out = "metrics.json";
    std::optional<int> met_rip_s, met_nsp_s, met_robust_s;
    bool met_mu = false, met_xi = false, met_sv = false;
    CLI::App* met = app.add_subcommand("metrics", "diagnostics of a stored matrix");
    met->add_option("--matrix", met_matrix, "SensingMatrix JSON path")->required();
    met->add_option("--rip", met_rip_s, "brute-force RIP constant at sparsity s");
    met->add_option("--nsp", met_nsp_s, "NSP sufficient condition at sparsity s");
    met->add_option("--robustness", met_robust_s, "robustness coefficient at s");
    met->add_flag("--cross-coherence", met_mu, "realized cross-coherence");
    met->add_flag("--distortion", met_xi, "realized distortion");
    met->add_flag("--sv-deviation", met_sv, "realized singular value deviation");
    met->add_option("--out", met_out, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fig1) return run_experiment_command("fig1", config_path, ov, verbosity);
        if (*fig2) return run_experiment_command("fig2", config_path, ov, verbosity);
        if (*fig3) return run_experiment_command("fig3", config_path, ov, verbosity);
        if (*svc) return run_experiment_command("sv_check", config_path, ov, verbosity);

        if (*vc) {
            csl::ExperimentConfig cfg;
            try {
                cfg = csl::ExperimentConfig::from_json(csl::load_json(vc_path));
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kExitConfig;
            }
            cfg.experiment = vc_experiment;
            auto errors = cfg.validate();
            if (!errors.empty()) {
                for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
                return kExitConfig;
            }
            std::cout << "config ok\n";
            return kExitOk;
        }

        if (*solve) {
            csl::SensingMatrix S;
            csl::CVector y;
            try {
                S = csl::sensing_matrix_from_json(csl::load_json(solve_matrix));
                y = csl::cvector_from_json(csl::load_json(solve_vector));
            } catch (const std::exception& e) {
                std::cerr << "parse error: " << e.what() << "\n";
                return kExitConfig;
            }
            csl::SolveReport rep;
            try {
                rep = csl::qcbp_solve(S, y, solve_eta);
            } catch (const std::exception& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return kExitSolver;
            }
            csl::save_json(solve_out, csl::to_json(rep));
            std::cout << "objective " << rep.objective << ", feasibility residual "
                      << rep.residual << ", converged " << rep.converged << "\n";
            return rep.infeasible ? kExitSolver : kExitOk;
        }

        if (*met) {
            csl::SensingMatrix S;
            try {
                S = csl::sensing_matrix_from_json(csl::load_json(met_matrix));
            } catch (const std::exception& e) {
                std::cerr << "parse error: " << e.what() << "\n";
                return kExitConfig;
            }
            json out = json::array();
            csl::CMatrix M =
                std::sqrt(static_cast<double>(S.rows())) * S.A.adjoint();
            auto ens = csl::ColumnEnsemble::fixed(M);
            if (met_mu) out.push_back(csl::cross_coherence(ens).to_json());
            if (met_xi) out.push_back(csl::distortion(ens).to_json());
            if (met_sv) out.push_back(csl::sv_deviation(ens).to_json());
            if (met_rip_s) {
                auto rip = csl::rip_bruteforce(S, *met_rip_s);
                out.push_back({{"quantity", "rip_delta"},
                               {"parameters", {{"s", rip.s}}},
                               {"estimate", rip.delta},
                               {"support", rip.extremal_support}});
            }
            if (met_nsp_s) {
                auto nsp = csl::nsp_sufficiency(S, *met_nsp_s);
                const char* verdict =
                    nsp.verdict == csl::NspSufficiencyReport::Verdict::holds
                        ? "holds"
                        : (nsp.verdict == csl::NspSufficiencyReport::Verdict::fails
                               ? "fails"
                               : "too_large_to_enumerate");
                out.push_back({{"quantity", "nsp_sufficiency"},
                               {"parameters", {{"s", nsp.s}}},
                               {"delta_2s", nsp.delta_2s},
                               {"threshold", nsp.threshold},
                               {"verdict", verdict}});
            }
            if (met_robust_s)
                out.push_back({{"quantity", "robustness_coefficient"},
                               {"parameters", {{"s", *met_robust_s}}},
                               {"estimate",
                                csl::robustness_coefficient(S, *met_robust_s)}});
            csl::save_json(met_out, out);
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const csl::EnumerationBudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
