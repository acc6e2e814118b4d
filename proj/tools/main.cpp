// Command-line front end: maps the five experiment subcommands onto
// ExperimentConfig and forwards to run_experiment.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "lossprop/experiments.hpp"
#include "lossprop/version.hpp"

namespace {

using lossprop::ExperimentConfig;
using nlohmann::json;

bool use_color() {
    return isatty(fileno(stderr)) && std::getenv("NO_COLOR") == nullptr;
}

void log_line(const std::string& message) {
    if (use_color())
        std::cerr << "\033[2m[lossprop]\033[0m " << message << "\n";
    else
        std::cerr << "[lossprop] " << message << "\n";
}

// Reads a piecewise medium description: a JSON array of
// {"until_km": ..., "mu": ..., "eta": ...} segments.
std::vector<lossprop::ProfileSegment> load_profile(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw CLI::ValidationError("--profile", "cannot read file: " + path);
    json doc;
    try {
        file >> doc;
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--profile", "invalid JSON in " + path + ": " + e.what());
    }
    if (!doc.is_array() || doc.empty())
        throw CLI::ValidationError("--profile", "expected a non-empty JSON array of segments");
    std::vector<lossprop::ProfileSegment> segments;
    for (const auto& seg : doc) {
        if (!seg.contains("until_km") || !seg.contains("mu") || !seg.contains("eta"))
            throw CLI::ValidationError("--profile",
                                       "each segment needs until_km, mu and eta fields");
        segments.push_back({seg["until_km"].get<double>(), seg["mu"].get<double>(),
                            seg["eta"].get<double>()});
    }
    return segments;
}

// Reads a coefficient mask: a JSON array of [l, m] pairs.
std::vector<std::pair<int, int>> load_subspace(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw CLI::ValidationError("--subspace", "cannot read file: " + path);
    json doc;
    try {
        file >> doc;
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--subspace", "invalid JSON in " + path + ": " + e.what());
    }
    if (!doc.is_array() || doc.empty())
        throw CLI::ValidationError("--subspace", "expected a non-empty JSON array of [l, m] pairs");
    std::vector<std::pair<int, int>> cells;
    for (const auto& cell : doc) {
        if (!cell.is_array() || cell.size() != 2)
            throw CLI::ValidationError("--subspace", "each entry must be an [l, m] pair");
        cells.emplace_back(cell[0].get<int>(), cell[1].get<int>());
    }
    return cells;
}

// Flags shared by every subcommand that propagates through a medium.
struct RawOptions {
    double mu = 0.2, eta = 1.0;
    bool mu_set = false, eta_set = false;
    std::string profile_path, subspace_path, format = "csv", distribution = "sphere";
};

void add_common_flags(CLI::App* cmd, ExperimentConfig& cfg, RawOptions& raw) {
    cmd->add_option("--out", cfg.output_path, "Output file path")->required();
    cmd->add_option("--format", raw.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_medium_flags(CLI::App* cmd, ExperimentConfig& cfg, RawOptions& raw) {
    cmd->add_option("--mu", raw.mu, "Extinction coefficient for both channels (km^-1)")
        ->each([&raw](const std::string&) { raw.mu_set = true; });
    cmd->add_option("--eta", raw.eta, "Phase rotation rate for both channels (km^-1)")
        ->each([&raw](const std::string&) { raw.eta_set = true; });
    cmd->add_option("--mu-a", cfg.mu_a, "Extinction coefficient, channel a (km^-1)");
    cmd->add_option("--mu-b", cfg.mu_b, "Extinction coefficient, channel b (km^-1)");
    cmd->add_option("--eta-a", cfg.eta_a, "Phase rotation rate, channel a (km^-1)");
    cmd->add_option("--eta-b", cfg.eta_b, "Phase rotation rate, channel b (km^-1)");
    cmd->add_option("--profile", raw.profile_path,
                    "Piecewise medium profile (JSON array of {until_km, mu, eta}); overrides "
                    "--mu/--eta for both channels");
}

void add_sweep_flags(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--x-max", cfg.x_max, "Sweep end distance (km)");
    cmd->add_option("--steps", cfg.steps, "Number of distance grid points");
    cmd->add_option("--plateau-window", cfg.plateau_window, "Sliding log-slope window (points)");
    cmd->add_option("--plateau-ratio", cfg.plateau_ratio,
                    "Plateau threshold: |mid slope| < ratio * |tail slope|");
}

void add_ensemble_flags(CLI::App* cmd, ExperimentConfig& cfg, RawOptions& raw) {
    cmd->add_option("--count", cfg.count, "Number of ensemble members");
    cmd->add_option("--seed", cfg.seed, "Ensemble seed");
    cmd->add_option("--distribution", raw.distribution, "Coefficient draw: box or sphere")
        ->check(CLI::IsMember({"box", "sphere"}));
    cmd->add_option("--subspace", raw.subspace_path,
                    "Coefficient mask (JSON array of [l, m] pairs)");
}

void finalize(ExperimentConfig& cfg, const RawOptions& raw) {
    if (raw.mu_set) cfg.mu_a = cfg.mu_b = raw.mu;
    if (raw.eta_set) cfg.eta_a = cfg.eta_b = raw.eta;
    if (!raw.profile_path.empty()) cfg.profile = load_profile(raw.profile_path);
    if (!raw.subspace_path.empty()) cfg.subspace = load_subspace(raw.subspace_path);
    cfg.format = raw.format == "json" ? lossprop::OutputFormat::Json : lossprop::OutputFormat::Csv;
    cfg.distribution = raw.distribution == "box" ? lossprop::Distribution::UniformBox
                                                 : lossprop::Distribution::SphereUniform;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beam-splitter-series model of lossy propagation for non-classical light"};
    app.set_version_flag("--version", LOSSPROP_VERSION);
    app.require_subcommand(1);

    ExperimentConfig cfg;
    RawOptions raw;
    std::string m_list = "10,100,1000";

    auto* noon = app.add_subcommand("noon-decay",
                                    "Coherence decay of the two-mode |n,0>+|0,n> superposition");
    noon->add_option("--n", cfg.n, "Photon pair count");
    add_medium_flags(noon, cfg, raw);
    add_sweep_flags(noon, cfg);
    add_common_flags(noon, cfg, raw);

    auto* ens_coh = app.add_subcommand("ensemble-coherence",
                                       "Coherence statistics of a random-state ensemble");
    auto* ens_neg = app.add_subcommand("ensemble-negativity",
                                       "Entanglement negativity statistics of a random-state ensemble");
    for (auto* cmd : {ens_coh, ens_neg}) {
        cmd->add_option("--n", cfg.n, "Photon cutoff per mode");
        add_medium_flags(cmd, cfg, raw);
        add_sweep_flags(cmd, cfg);
        add_ensemble_flags(cmd, cfg, raw);
        add_common_flags(cmd, cfg, raw);
    }

    auto* oracle = app.add_subcommand("oracle-convergence",
                                      "Finite splitter chains versus the continuum channel");
    oracle->add_option("--n", cfg.n, "Photon number");
    oracle->add_option("--depth", cfg.depth, "Target optical depth");
    oracle->add_option("--m", m_list, "Comma-separated splitter counts, e.g. 10,100,1000");
    oracle->add_flag("--two-mode", cfg.two_mode_oracle,
                     "Also compare the two-mode Kraus oracle on a random state");
    oracle->add_option("--seed", cfg.seed, "Seed for the random two-mode state");
    oracle->add_option("--eta-a", cfg.eta_a, "Phase rotation over the full depth, channel a");
    oracle->add_option("--eta-b", cfg.eta_b, "Phase rotation over the full depth, channel b");
    add_common_flags(oracle, cfg, raw);

    auto* single = app.add_subcommand("single-mode",
                                      "Photon-number populations of a Fock state after loss");
    single->add_option("--n", cfg.n, "Input photon number");
    single->add_option("--x", cfg.x, "Propagation distance (km)");
    add_medium_flags(single, cfg, raw);
    add_common_flags(single, cfg, raw);

    // Per-subcommand sweep defaults: the fixed-input decay is steep and short,
    // ensembles need the long range where the plateau lives.
    for (auto* cmd : {ens_coh, ens_neg})
        cmd->preparse_callback([&cfg](std::size_t) {
            cfg.x_max = 30.0;
            cfg.steps = 61;
        });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lossprop::kExitConfig;
    }

    try {
        finalize(cfg, raw);
        if (noon->parsed()) cfg.experiment = lossprop::ExperimentKind::NoonDecay;
        if (ens_coh->parsed()) cfg.experiment = lossprop::ExperimentKind::EnsembleCoherence;
        if (ens_neg->parsed()) cfg.experiment = lossprop::ExperimentKind::EnsembleNegativity;
        if (single->parsed()) cfg.experiment = lossprop::ExperimentKind::SingleMode;
        if (oracle->parsed()) {
            cfg.experiment = lossprop::ExperimentKind::OracleConvergence;
            cfg.m_values.clear();
            std::size_t start = 0;
            while (start <= m_list.size()) {
                const std::size_t comma = m_list.find(',', start);
                const std::string token =
                    m_list.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start);
                if (!token.empty()) cfg.m_values.push_back(std::stoi(token));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << nlohmann::json{{"error",
                                     {{"type", "config"},
                                      {"message", e.what()},
                                      {"exit_code", lossprop::kExitConfig}}}}
                         .dump()
                  << std::endl;
        return lossprop::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error",
                                     {{"type", "config"},
                                      {"message", e.what()},
                                      {"exit_code", lossprop::kExitConfig}}}}
                         .dump()
                  << std::endl;
        return lossprop::kExitConfig;
    }

    const int status = lossprop::run_experiment(cfg);
    if (status == lossprop::kExitOk)
        log_line("wrote " + cfg.output_path);
    return status;
}
