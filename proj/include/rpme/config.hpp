#pragma once

#include "rpme/reactions.hpp"
#include "rpme/solver.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rpme {

/// Initial datum u0. Kinds and their parameters:
///   parabola            sigma, b, center = 0, power = 1:  sigma (b^2 - (x - center)^2)_+^power
///   indicator           height, L, center = 0 (one-cell ramps)
///   zkb                 C, s = 1
///   bump                q0, sigma = 1, center = 0 (compact stationary bump, scaled)
///   ground              sigma = 1, shifts = [0] (Type II ground state copies)
///   pressure_quadratic  A, r0: pressure A min(x, 2 r0 - x)^2 on [0, 2 r0]
///   pressure_linear     rho, r0: pressure rho min(x, 2 r0 - x) on [0, 2 r0]
///   sum                 parts = [...]
struct InitialData {
    std::string kind = "parabola";
    std::map<std::string, double> params;
    std::vector<double> shifts;
    std::vector<InitialData> parts;

    double param(const std::string& key, double fallback) const;
    bool operator==(const InitialData&) const = default;
};

struct InitialProfile {
    std::function<double(double)> u0;
    double left = 0.0, right = 0.0;  // support
};

/// Closure over u0 sampled at grid spacing dx (indicator ramps are one cell wide).
InitialProfile make_initial(const InitialData& data, const Reaction& reaction, double m, double dx);

struct GridConfig {
    double dx = 1.0 / 256.0;
    double pad = 2.0;
    bool operator==(const GridConfig&) const = default;
};

struct Tolerances {
    double vanish = 1e-4;
    double spread = 0.05;
    double trans = 0.05;
    bool operator==(const Tolerances&) const = default;
};

/// Applies "key=value" overrides (vanish_tol, spread_tol, trans_tol).
void apply_overrides(Tolerances& tol, const std::vector<std::string>& overrides);

struct RunConfig {
    ReactionSpec reaction;
    GridConfig grid;
    InitialData u0;
    double t_end = 10.0;
    double snapshot_every = 0.0;
    std::size_t record_stride = 100;
    std::vector<std::string> certificates;  // energy, apriori, darcy
    std::vector<double> watch_points;
    Tolerances tol;
    bool operator==(const RunConfig&) const = default;

    double m() const { return reaction.m; }
};

/// Reaction, initial state and solver options assembled from a RunConfig.
struct PreparedRun {
    std::unique_ptr<Reaction> reaction;
    State state;
    RunOptions options;
    double initial_left = 0.0, initial_right = 0.0;
};

PreparedRun prepare_run(const RunConfig& config, double sigma = 1.0);

enum class Command { Run, Classify, Bisect, Sweep, Stationary, SelfSimilar, Exact, SpeedFit, Verify };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

struct ExperimentConfig {
    Command command = Command::Run;
    bool deterministic = true;
    std::string out_dir;
    RunConfig run;  // run, classify, bisect, sweep
    double sigma_lo = 0.0, sigma_hi = 0.0, sigma_tol = 1e-3;
    std::vector<double> sigmas;
    std::string family = "bump";  // stationary
    std::optional<double> q0;
    std::vector<double> q0_grid;
    double theta = 0.5, ss_tol = 1e-8;  // selfsimilar
    std::string barrier;  // exact
    std::map<std::string, double> barrier_params;
    std::string runlog;  // speedfit
    std::string suite;   // verify

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates structured text, collecting every error with its path
/// (unknown keys, duplicate keys, missing or invalid fields). Throws
/// ConfigError whose message lists them one per line.
ExperimentConfig parse_config(const std::string& text);
nlohmann::ordered_json to_json(const ExperimentConfig& config);
nlohmann::ordered_json to_json(const InitialData& data);
nlohmann::ordered_json to_json(const RunConfig& config);

/// FNV-1a 64-bit hash, as 16 hex digits.
std::string content_hash(const std::string& bytes);
std::string config_hash(const nlohmann::ordered_json& config);

}  // namespace rpme
