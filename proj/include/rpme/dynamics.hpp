#pragma once

#include "rpme/config.hpp"
#include "rpme/exact.hpp"
#include "rpme/solver.hpp"
#include "rpme/stationary.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rpme {

enum class Verdict { Spreading, Vanishing, Transition, Undecided };

std::string_view to_string(Verdict v);

struct FrontSample {
    double t = 0.0;
    double left = 0.0, right = 0.0;  // outermost support edges (cell resolution)
    double p_left = 0.0, p_right = 0.0;  // pressure-extrapolated positions of the same fronts
    double sup = 0.0;
};

/// Exponent gamma of r(t) = a + b t^gamma fitted by least squares (gamma by
/// golden section, a and b linear), so that an O(1) offset in r does not bias
/// the growth exponent. Also returns the plain log-log slope.
struct GrowthFit {
    double gamma = 0.0;
    double a = 0.0, b = 0.0;
    double loglog_slope = 0.0;
};

GrowthFit fit_growth(const std::vector<double>& t, const std::vector<double>& r);

struct Outcome {
    Verdict verdict = Verdict::Undecided;
    std::string reason;
    double t_final = 0.0;
    std::size_t steps = 0;
    double sup_final = 0.0;
    /// (t, sup u) per recorded frame.
    std::vector<std::pair<double, double>> sup_history;
    std::vector<FrontSample> front_path;
    /// Half-width of the plateau u >= 1 - spread_tol around the initial centre.
    double plateau_half_width = 0.0;
    /// Growth exponent of the right front radius over the last fifth.
    std::optional<double> front_exponent;
    /// L-infinity distance to the transition target (level theta or ground states).
    std::optional<double> target_distance;
    std::optional<double> target_level;
    std::vector<double> target_shifts;
    /// Ratio of the theta crossing distance from the front to the front radius.
    std::optional<double> theta_crossing_ratio;
    /// Present when the run config asks for the energy or apriori certificates.
    std::optional<EnergyCheck> energy;
    std::optional<CertificateReport> certificates;
    State final_state;
};

struct ClassifyOptions {
    Tolerances tol;
    double t_end = 10.0;
    /// Frames between classification checks (each check is O(n)).
    std::size_t check_stride = 0;  // 0: the run config's record_stride
    /// Called on every recorded frame before the rules are checked.
    std::function<void(const State&, const Frame&)> on_frame;
};

/// Largest level ubar with f <= 0 on [0, ubar] (0 when f > 0 near 0, +inf
/// for f == 0). Data with sup u <= ubar are subsolutions of the pure
/// diffusion problem and vanish.
double vanishing_level(const Reaction& reaction);

/// Runs the configured initial datum scaled by sigma and classifies it.
Outcome classify(const RunConfig& config, const ClassifyOptions& options, double sigma = 1.0);
Outcome classify(const RunConfig& config, double sigma = 1.0);

struct SigmaProbe {
    double sigma = 0.0;
    Verdict verdict = Verdict::Undecided;
    double t_end = 0.0;
    double t_decided = 0.0;  // time at which the verdict was reached
    bool extended = false;
};

struct ThresholdResult {
    double sigma_lo = 0.0, sigma_hi = 0.0;
    std::vector<SigmaProbe> probes;  // in evaluation order
    std::string family_id;
    bool converged = false;
    /// "point threshold" or "transition band"
    std::string threshold_kind;
    /// Bracket [lo, hi] after each bisection step, widest first.
    std::vector<std::pair<double, double>> brackets;
    /// Outcome of the last evaluated sigma on each side.
    Outcome below, above;
    /// Last probe classified Transition, if any.
    std::optional<Outcome> transition;
};

/// Bisection on sigma for the family sigma * u0. Widens the bracket by
/// doubling (up to 2^10) when its ends do not classify as required. Throws
/// InvariantViolation when the evaluated outcomes are not monotone in sigma.
ThresholdResult bisect_sigma(const RunConfig& family, double sigma_lo, double sigma_hi, double tol,
                             const ClassifyOptions& options);

/// Checks Vanishing < Transition < Spreading along increasing sigma.
void check_monotone(const std::vector<SigmaProbe>& probes);

struct HairTriggerResult {
    Outcome outcome;
    double q0 = 0.0;
    double L0 = 0.0;
    /// min over recorded frames and nodes of u - U_q0.
    double worst_floor_gap = 0.0;
    bool floor_holds = false;
};

/// Runs from the compact bump U_q0 and records the subsolution floor.
HairTriggerResult hair_trigger(const ReactionSpec& spec, double q0, double t_end, double dx,
                               const Tolerances& tol = {});

struct SpeedFit {
    double y0_fit = 0.0;
    double y0_fit_left = 0.0;
    double y0_shoot = 0.0;
    double rel_err = 0.0;
    double exponent = 0.0;        // growth exponent of the front radius
    double exponent_left = 0.0;
    double loglog_slope = 0.0;    // plain log-log slope over the same window
    bool bound_holds = false;     // y0_fit < theta^((m-1)/2)
};

/// Fits r(t) = 2 y0 sqrt(t) + c on the final fifth of the front path
/// (radius measured from the initial centre).
SpeedFit transition_speed_fit(const std::vector<FrontSample>& path, double center, double theta, double m);
SpeedFit transition_speed_fit(const Outcome& transition, double center, double theta, double m);

struct Z0Sample {
    double t = 0.0;
    std::size_t step = 0;
    std::size_t z0 = 0;
    bool tangent = false;
};

struct Z0Event {
    double t = 0.0;
    std::size_t step = 0;
    std::size_t from = 0, to = 0;
};

struct Z0Report {
    std::vector<Z0Sample> series;
    std::vector<Z0Event> increases;
    std::vector<MergeEvent> merges;  // of either run, and of the common positivity set
    /// First time after which the series is nonincreasing.
    double settled_after = 0.0;
    bool nonincreasing_after_settle = true;
};

/// Steps both runs with a common dt on a shared grid and samples Z0 every
/// `sample_stride` steps (merge checks run every step). Throws
/// InvariantViolation for an increase with no merge within two steps.
Z0Report z0_monitor(const RunConfig& a, const RunConfig& b, double t_end, std::size_t sample_stride = 1);

}  // namespace rpme
