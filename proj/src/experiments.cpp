#include "lossprop/experiments.hpp"

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "json.hpp"
#include "lossprop/propagation.hpp"
#include "lossprop/splitter.hpp"
#include "lossprop/version.hpp"

namespace lossprop {

namespace {

using nlohmann::json;

// File-level failures are distinct from configuration errors so the front end
// can map them to the right exit status.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunOutput {
    Table table;
    json summary;                            // derived scalars (slopes, means, ...)
    std::optional<PlateauAnalysis> plateau;  // decay-plateau analysis, when applicable
    json aggregates;                         // per-distance ensemble statistics
};

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::NoonDecay: return "noon-decay";
        case ExperimentKind::EnsembleCoherence: return "ensemble-coherence";
        case ExperimentKind::EnsembleNegativity: return "ensemble-negativity";
        case ExperimentKind::OracleConvergence: return "oracle-convergence";
        case ExperimentKind::SingleMode: return "single-mode";
    }
    return "?";
}

json config_echo(const ExperimentConfig& c) {
    json profile = json::array();
    for (const auto& seg : c.profile)
        profile.push_back({{"until_km", seg.until_km}, {"mu", seg.mu}, {"eta", seg.eta}});
    json subspace = json::array();
    for (const auto& [l, m] : c.subspace) subspace.push_back({l, m});
    return json{{"experiment", kind_name(c.experiment)},
                {"n", c.n},
                {"mu_a", c.mu_a},
                {"mu_b", c.mu_b},
                {"eta_a", c.eta_a},
                {"eta_b", c.eta_b},
                {"profile", profile},
                {"x_max", c.x_max},
                {"steps", c.steps},
                {"x", c.x},
                {"count", c.count},
                {"seed", c.seed},
                {"distribution",
                 c.distribution == Distribution::UniformBox ? "box" : "sphere"},
                {"subspace", subspace},
                {"depth", c.depth},
                {"m_values", c.m_values},
                {"two_mode_oracle", c.two_mode_oracle},
                {"plateau_window", c.plateau_window},
                {"plateau_ratio", c.plateau_ratio},
                {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
                {"output_path", c.output_path}};
}

ChannelPair make_channels(const ExperimentConfig& c) {
    if (!c.profile.empty()) {
        MediumProfile p = MediumProfile::piecewise(c.profile);
        return ChannelPair{p, p};
    }
    return ChannelPair{MediumProfile::constant(c.mu_a, c.eta_a),
                       MediumProfile::constant(c.mu_b, c.eta_b)};
}

std::vector<double> metric_series(const std::vector<MetricRecord>& records,
                                  double MetricRecord::*field) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.*field);
    return out;
}

void append_sweep_rows(Table& table, const SweepResult& result) {
    table.columns = {"x",           "state_index",    "coherence_power", "negativity",
                     "trace_error", "min_eigenvalue", "purity"};
    for (std::size_t i = 0; i < result.per_state.size(); ++i)
        for (const auto& r : result.per_state[i])
            table.rows.push_back({r.x, double(i), r.coherence_power, r.negativity, r.trace_error,
                                  r.min_eigenvalue, r.purity});
}

json aggregates_json(const SweepResult& result) {
    auto stats = [](const AggregateStats& s) {
        return json{{"mean", s.mean}, {"median", s.median}, {"min", s.min}, {"max", s.max}};
    };
    json out = json::array();
    for (const auto& agg : result.aggregates)
        out.push_back({{"x", agg.x},
                       {"coherence_power", stats(agg.coherence_power)},
                       {"negativity", stats(agg.negativity)},
                       {"trace_error", stats(agg.trace_error)},
                       {"min_eigenvalue", stats(agg.min_eigenvalue)},
                       {"purity", stats(agg.purity)}});
    return out;
}

std::optional<PlateauAnalysis> try_plateau(std::span<const double> x,
                                           std::span<const double> values, int window,
                                           double ratio) {
    try {
        return detect_plateau(x, values, window, ratio);
    } catch (const InsufficientData&) {
        return std::nullopt;  // short sweeps simply skip the analysis
    }
}

RunOutput run_noon_decay(const ExperimentConfig& c) {
    const SweepSpec sweep{0.0, c.x_max, c.steps, make_channels(c)};
    const SweepResult result = run_sweep({noon_state(c.n)}, sweep);

    RunOutput out;
    append_sweep_rows(out.table, result);
    const std::vector<double> xs = metric_series(result.per_state[0], &MetricRecord::x);
    std::vector<double> coh = metric_series(result.per_state[0], &MetricRecord::coherence_power);
    std::vector<double> log_coh(coh.size());
    for (std::size_t i = 0; i < coh.size(); ++i) log_coh[i] = std::log(std::max(coh[i], DBL_MIN));
    out.summary["log_coherence_slope"] = least_squares_slope(xs, log_coh);
    out.plateau = try_plateau(xs, coh, c.plateau_window, c.plateau_ratio);
    return out;
}

RunOutput run_ensemble(const ExperimentConfig& c) {
    const EnsembleSpec spec{c.distribution, PhotonCutoff(c.n), c.count, c.seed, c.subspace};
    const SweepSpec sweep{0.0, c.x_max, c.steps, make_channels(c)};
    const SweepResult result = run_sweep(spec, sweep);

    RunOutput out;
    append_sweep_rows(out.table, result);
    out.aggregates = aggregates_json(result);

    std::vector<double> xs, med_coh, med_neg;
    for (const auto& agg : result.aggregates) {
        xs.push_back(agg.x);
        med_coh.push_back(agg.coherence_power.median);
        med_neg.push_back(agg.negativity.median);
    }
    if (c.experiment == ExperimentKind::EnsembleCoherence) {
        out.plateau = try_plateau(xs, med_coh, c.plateau_window, c.plateau_ratio);
    } else {
        out.summary["final_median_negativity"] = med_neg.back();
    }
    return out;
}

RunOutput run_oracle_convergence(const ExperimentConfig& c) {
    if (!(c.depth > 0.0)) throw std::invalid_argument("oracle convergence needs depth > 0");
    // Matched continuum target: unit extinction, distance = depth.
    const MediumProfile continuum_a = MediumProfile::constant(1.0, c.eta_a);
    const SingleModeDensityMatrix target = single_mode_output(c.n, continuum_a, c.depth);

    RunOutput out;
    out.table.columns = {"m", "single_mode_max_error"};
    if (c.two_mode_oracle) out.table.columns.push_back("two_mode_max_error");

    std::optional<TwoModeState> state;
    std::optional<TwoModeDensityMatrix> general;
    if (c.two_mode_oracle) {
        const EnsembleSpec spec{c.distribution, PhotonCutoff(c.n), 1, c.seed, c.subspace};
        state = sample_state(spec, 0);
        const ChannelPair channels{continuum_a, MediumProfile::constant(1.0, c.eta_b)};
        general = general_output(*state, channels, PropagationPoint{c.depth, c.depth});
    }

    std::vector<double> log_m, log_err;
    for (int m : c.m_values) {
        if (m < 1) throw std::invalid_argument("splitter counts must be >= 1");
        if (!(c.depth / m < 1.0))
            throw std::invalid_argument("per-splitter loss fraction depth/m must stay below 1");
        const SplitterChain chain = make_chain(m, c.depth / m, c.eta_a * c.depth / m);
        const SingleModeDensityMatrix approx = finite_m_single_mode_output(c.n, chain);
        const double err = (approx.elements - target.elements).cwiseAbs().maxCoeff();
        std::vector<double> row{double(m), err};
        if (c.two_mode_oracle) {
            const SplitterChain chain_b = make_chain(m, c.depth / m, c.eta_b * c.depth / m);
            const TwoModeDensityMatrix approx2 = finite_m_two_mode_output(*state, chain, chain_b);
            row.push_back((approx2.elements - general->elements).cwiseAbs().maxCoeff());
        }
        out.table.rows.push_back(std::move(row));
        log_m.push_back(std::log(double(m)));
        log_err.push_back(std::log(std::max(err, DBL_MIN)));
    }
    if (log_m.size() >= 2) out.summary["log_error_slope"] = least_squares_slope(log_m, log_err);
    return out;
}

RunOutput run_single_mode(const ExperimentConfig& c) {
    const MediumProfile profile = c.profile.empty() ? MediumProfile::constant(c.mu_a, c.eta_a)
                                                    : MediumProfile::piecewise(c.profile);
    const SingleModeDensityMatrix rho = single_mode_output(c.n, profile, c.x);

    RunOutput out;
    out.table.columns = {"n", "population"};
    for (int k = 0; k <= c.n; ++k)
        out.table.rows.push_back({double(k), rho.elements(k, k).real()});
    out.summary["mean_photon_number"] = mean_photon_number(rho);
    out.summary["trace_error"] = trace_error(rho);
    return out;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json plateau_json(const PlateauAnalysis& p) {
    return json{{"mid_slope", p.mid_slope},
                {"tail_slope", p.tail_slope},
                {"plateau_flag", p.plateau_flag}};
}

void write_csv(const std::string& path, const json& metadata, const RunOutput& out) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open output path: " + path);
    for (const auto& [key, value] : metadata.items()) file << "# " << key << ": " << value.dump() << "\n";
    if (out.plateau) file << "# plateau: " << plateau_json(*out.plateau).dump() << "\n";
    if (!out.summary.is_null()) file << "# summary: " << out.summary.dump() << "\n";
    for (std::size_t i = 0; i < out.table.columns.size(); ++i)
        file << out.table.columns[i] << (i + 1 < out.table.columns.size() ? "," : "\n");
    for (const auto& row : out.table.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            file << format_value(row[i]) << (i + 1 < row.size() ? "," : "\n");
    file.flush();
    if (!file) throw IoError("write failed: " + path);
}

void write_json(const std::string& path, const json& metadata, const RunOutput& out) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open output path: " + path);
    json doc{{"metadata", metadata}};
    if (out.plateau) doc["plateau"] = plateau_json(*out.plateau);
    if (!out.summary.is_null()) doc["summary"] = out.summary;
    if (!out.aggregates.is_null()) doc["aggregates"] = out.aggregates;
    json records = json::array();
    for (const auto& row : out.table.rows) {
        json rec;
        for (std::size_t i = 0; i < row.size(); ++i) rec[out.table.columns[i]] = row[i];
        records.push_back(std::move(rec));
    }
    doc["records"] = std::move(records);
    file << doc.dump(2) << "\n";
    file.flush();
    if (!file) throw IoError("write failed: " + path);
}

void validate(const ExperimentConfig& c) {
    if (c.output_path.empty()) throw std::invalid_argument("output path must not be empty");
    if (!(std::isfinite(c.mu_a) && std::isfinite(c.mu_b) && std::isfinite(c.eta_a) &&
          std::isfinite(c.eta_b) && std::isfinite(c.x_max) && std::isfinite(c.x) &&
          std::isfinite(c.depth)))
        throw std::invalid_argument("all physical parameters must be finite");
    if (c.mu_a < 0.0 || c.mu_b < 0.0)
        throw std::invalid_argument("extinction coefficients must be >= 0");
    if (c.experiment != ExperimentKind::SingleMode && c.experiment != ExperimentKind::OracleConvergence) {
        if (!(c.x_max > 0.0)) throw std::invalid_argument("sweep needs x_max > 0");
        if (c.steps < 2) throw std::invalid_argument("sweep needs at least two steps");
    }
    if (c.experiment == ExperimentKind::SingleMode && !(c.x >= 0.0))
        throw std::invalid_argument("single-mode distance must be >= 0");
    if (c.count < 1) throw std::invalid_argument("ensemble count must be >= 1");
    if (c.plateau_window < 2) throw std::invalid_argument("plateau window must be >= 2");
    if (!(c.plateau_ratio > 0.0)) throw std::invalid_argument("plateau ratio must be > 0");
    if (c.experiment == ExperimentKind::OracleConvergence && c.m_values.empty())
        throw std::invalid_argument("oracle convergence needs at least one splitter count");
}

int error_record(const char* type, const std::string& message, int code) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}}.dump()
              << std::endl;
    return code;
}

}  // namespace

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("slope fit needs matching series lengths");
    if (x.size() < 2) throw InsufficientData("slope fit needs at least two points");
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InsufficientData("slope fit needs distinct abscissae");
    return sxy / sxx;
}

PlateauAnalysis detect_plateau(std::span<const double> x, std::span<const double> values,
                               int window, double slope_ratio) {
    if (x.size() != values.size())
        throw DimensionMismatch("plateau detection needs matching series lengths");
    if (window < 2) throw std::invalid_argument("plateau window must be >= 2");
    if (!(slope_ratio > 0.0)) throw std::invalid_argument("plateau ratio must be > 0");
    const int n = int(x.size());
    if (n < 10 || n < window)
        throw InsufficientData("plateau detection needs at least 10 points (and one full window)");

    // Log series; non-positive values are clamped so flat (or zero) series
    // yield zero slopes rather than errors.
    std::vector<double> logv(n);
    for (int i = 0; i < n; ++i) logv[i] = std::log(std::max(values[i], DBL_MIN));

    const double lo = x.front(), hi = x.back();
    const double third = (hi - lo) / 3.0;

    bool found_mid = false;
    double mid_slope = 0.0;
    for (int j = 0; j + window <= n; ++j) {
        const double center = 0.5 * (x[j] + x[j + window - 1]);
        if (center < lo + third || center > lo + 2.0 * third) continue;
        const double slope = least_squares_slope(x.subspan(j, window),
                                                 std::span<const double>(logv).subspan(j, window));
        if (!found_mid || std::abs(slope) < std::abs(mid_slope)) {
            mid_slope = slope;
            found_mid = true;
        }
    }
    if (!found_mid)
        throw InsufficientData("no sliding window centered in the middle third of the range");

    int tail_begin = n;
    for (int i = 0; i < n; ++i)
        if (x[i] >= lo + 2.0 * third) {
            tail_begin = i;
            break;
        }
    if (n - tail_begin < 2) throw InsufficientData("final third of the range holds fewer than two points");
    const double tail_slope =
        least_squares_slope(x.subspan(tail_begin), std::span<const double>(logv).subspan(tail_begin));

    return PlateauAnalysis{mid_slope, tail_slope,
                           std::abs(mid_slope) < slope_ratio * std::abs(tail_slope)};
}

int run_experiment(const ExperimentConfig& config) {
    try {
        validate(config);

        const auto t0 = std::chrono::steady_clock::now();
        RunOutput out;
        switch (config.experiment) {
            case ExperimentKind::NoonDecay: out = run_noon_decay(config); break;
            case ExperimentKind::EnsembleCoherence:
            case ExperimentKind::EnsembleNegativity: out = run_ensemble(config); break;
            case ExperimentKind::OracleConvergence: out = run_oracle_convergence(config); break;
            case ExperimentKind::SingleMode: out = run_single_mode(config); break;
        }
        const double wallclock =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json metadata{{"tool", "lossprop"},
                      {"version", LOSSPROP_VERSION},
                      {"command", kind_name(config.experiment)},
                      {"config", config_echo(config)},
                      {"seed", config.seed},
                      {"wallclock_s", wallclock}};
        if (config.format == OutputFormat::Csv)
            write_csv(config.output_path, metadata, out);
        else
            write_json(config.output_path, metadata, out);
        return kExitOk;
    } catch (const EigensolverFailure& e) {
        return error_record("numerical", e.what(), kExitNumerical);
    } catch (const IoError& e) {
        return error_record("io", e.what(), kExitIo);
    } catch (const std::invalid_argument& e) {
        return error_record("config", e.what(), kExitConfig);
    } catch (const std::out_of_range& e) {
        return error_record("config", e.what(), kExitConfig);
    } catch (const std::exception& e) {
        return error_record("numerical", e.what(), kExitNumerical);
    }
}

}  // namespace lossprop
