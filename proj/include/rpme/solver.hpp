#pragma once

#include "rpme/reactions.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rpme {

/// Cells below this density are outside the numerical support. The explicit
/// scheme fills one cell per step ahead of a front with values that decay
/// super-exponentially, so "u > 0" alone would move every front at dx/dt.
inline constexpr double kSupportThreshold = 1e-14;

/// Uniform grid x_i = (offset + i) dx. The integer offset keeps grids that
/// are symmetric about 0 exactly symmetric in floating point.
struct Grid1D {
    long long offset = 0;
    double dx = 1.0 / 256.0;
    std::size_t n = 0;

    double x(std::size_t i) const noexcept { return double(offset + (long long)i) * dx; }
    double x_min() const noexcept { return x(0); }
    double x_max() const noexcept { return x(n - 1); }
    /// Index of the node closest to x (clamped).
    std::size_t index_of(double x) const noexcept;
    /// Smallest grid with nodes at integer multiples of dx covering [a, b].
    static Grid1D covering(double a, double b, double dx);
    bool operator==(const Grid1D&) const = default;
};

/// Support component [left, right] (outermost node positions) of u > threshold.
struct Component {
    std::size_t i_left = 0, i_right = 0;
    double left = 0.0, right = 0.0;
};

std::vector<Component> find_components(const Grid1D& grid, std::span<const double> u,
                                       double threshold = kSupportThreshold);

struct State {
    Grid1D grid;
    double t = 0.0;
    std::vector<double> u;
    std::vector<Component> fronts;
    std::size_t steps = 0;
    double clamp_mass = 0.0;  // total mass removed by clamping so far
    /// Nodes outside [nz_lo, nz_hi) are zero. step() and grow() keep this
    /// current; code that edits u directly must reset it to the defaults.
    std::size_t nz_lo = 0, nz_hi = std::size_t(-1);

    double sup() const;
    double mass() const;
    /// Pressure m/(m-1) u^(m-1) at node i.
    double v(std::size_t i, double m) const { return pressure_of(u[i], m); }
};

/// Samples u0 on the grid; rejects negative or non-finite values and data
/// that touch the grid edge.
State init_state(const Grid1D& grid, const std::function<double(double)>& u0);
/// height * indicator of [-L, L], with one-cell linear ramps on each side.
State init_indicator(const Grid1D& grid, double L, double height);

/// Extends the grid on one side by `cells` zero nodes.
void grow(State& state, std::size_t cells_left, std::size_t cells_right);

enum class Backend { Serial, OpenMP };

namespace kernels {

struct StepStats {
    double clamp_mass = 0.0;  // mass removed by clamping negative undershoots
    double max_u = 0.0;
};

/// One explicit step on nodes [lo, hi): out_i = u_i + r (phi_{i+1} - 2 phi_i + phi_{i-1}) + dt f(u_i),
/// r = dt/dx^2, phi = u^m. Nodes outside [lo, hi) must be zero on input and
/// are zeroed in `out`; values below 1e-300 are flushed to 0.
StepStats explicit_step_serial(std::span<const double> u, std::span<double> out, std::size_t lo,
                               std::size_t hi, double r, double dt, double m, const Reaction& f);
StepStats explicit_step_omp(std::span<const double> u, std::span<double> out, std::size_t lo,
                            std::size_t hi, double r, double dt, double m, const Reaction& f);

double max_abs_serial(std::span<const double> u);
double max_abs_omp(std::span<const double> u);

}  // namespace kernels

/// Lipschitz constant of f on [0, U], tabulated at U = 2^k so that the CFL
/// bound follows the current amplitude instead of the initial one.
class LipschitzTable {
public:
    LipschitzTable(const Reaction& reaction, double u_max);
    double at(double u) const;

private:
    std::vector<double> levels_, values_;
};

struct StepOptions {
    double safety = 0.4;
    double clamp_budget = 1e-10;  // per step, relative to total mass
    Backend backend = Backend::OpenMP;
    bool grow = true;
    std::size_t margin_cells = 10;
    std::size_t growth_cells = 256;
    std::size_t max_cells = std::size_t(1) << 22;
};

/// safety * min(dx^2 / (2m max u^(m-1)), 1/K).
double stable_dt(const State& state, double m, double K, double safety);

/// Advances by dt. Throws NumericError when dt exceeds the stable step or the
/// clamped mass exceeds its budget.
kernels::StepStats step(State& state, const Reaction& reaction, double m, double dt, double K,
                        const StepOptions& options, std::vector<double>& scratch);

/// Pressure-extrapolated front of one component side: the outermost node j
/// with v_j above 1e-3 max v, slope by one-sided second-order differencing
/// and position x_j + v_j / |slope|.
struct PressureFront {
    double position = 0.0;
    double slope = 0.0;  // |D v| at the front (the Darcy speed)
    bool valid = false;
};

PressureFront pressure_front(const State& state, const Component& c, int side, double m);

/// Waiting-time monitor at x0. The front has reached x0 once the linear part
/// of the one-sided pressure expansion dominates at cell scale:
/// v(x0 + 2s) - v(x0 + s) <= 2 (v(x0 + s) - v(x0)), with s the step into
/// the initial support.
struct WaitingWatch {
    double x0 = 0.0;
    std::size_t i0 = 0;
    int inward = 1;
    std::optional<double> t_star;
    double dt_at_detection = 0.0;
};

bool front_reached(std::span<const double> u, const WaitingWatch& w, double m);

struct Frame {
    double t = 0.0;
    std::size_t step = 0;
    double sup = 0.0;
    double mass = 0.0;
    double dt = 0.0;
    std::vector<Component> fronts;
    std::vector<PressureFront> left, right;  // per component
    std::optional<double> energy;
    double min_vxx = 0.0;
    double vt_min = 0.0, vt_max = 0.0;
    double max_vx = 0.0;
};

struct MergeEvent {
    double t = 0.0;
    std::size_t step = 0;
    std::size_t components_before = 0, components_after = 0;
};

struct History {
    double m = 2.0;
    double dx = 0.0;
    std::vector<Frame> frames;
    std::vector<State> snapshots;
    std::vector<MergeEvent> merges;
    std::vector<WaitingWatch> waiting;
    std::vector<double> initial_support_edges;
    double clamp_mass = 0.0;
    double horizon = 0.0;
    bool stopped_early = false;
};

/// Energy E[v] = int ((m-1)/2) v^(2/(m-1)) v_x^2 - G(v) evaluated on the
/// density grid; G is taken from a tabulated weighted primitive of f.
class EnergyFunctional {
public:
    EnergyFunctional(const Reaction& reaction, double m, double u_max);
    double operator()(const State& state) const;
    /// Tabulated G(v(u)).
    double potential(double u) const;

private:
    const Reaction* reaction_;
    double m_, h_;
    std::vector<double> nodes_, prim_;
};

struct RunOptions {
    double t_end = 1.0;
    std::size_t record_stride = 1;  // steps between frames
    double snapshot_every = 0.0;    // 0: no snapshots
    bool energy = false;
    bool certificates = false;  // v_xx, v_t, v_x per frame
    double certificate_rho = 0.05;
    std::vector<double> watch_points;
    StepOptions step;
    /// Called on every frame; returning true stops the run.
    std::function<bool(const State&, const Frame&)> observer;
};

/// Runs from `state` until t_end or until the observer stops it. The state
/// is updated in place.
History run(State& state, const Reaction& reaction, double m, const RunOptions& options);

// ---------------------------------------------------------------------------
// Diagnostics over a history

struct DarcySample {
    double t = 0.0;
    double speed = 0.0;     // front speed from the path
    double gradient = 0.0;  // -v_x at the front
    double residual = 0.0;  // |speed - gradient| / |speed|
    bool waiting = false;
};

struct DarcyReport {
    std::vector<DarcySample> right, left;  // first component's outer fronts
    double mean_residual = 0.0;
    std::size_t moving_samples = 0;
};

/// Front speed by centred differencing over `window` frames; samples
/// before `t_from` are skipped.
DarcyReport darcy_diagnostic(const History& history, std::size_t window = 10, double t_from = 0.0);

/// First time the front reaches x0, or nullopt when still pending.
std::optional<double> waiting_time(const History& history, double x0);

struct Envelope {
    double intercept = 0.0, slope = 0.0;
    double at(double t) const { return intercept + slope * t; }
};

struct CertificateReport {
    Envelope vxx_lower;  // min v_xx >= this
    Envelope vt_lower, vt_upper;
    double max_vx = 0.0;
    bool vxx_ok = true, vt_ok = true;
    std::string violation;
    double fit_until = 0.0;
};

/// Linear envelopes fitted on the frames with t <= t_from + fit_fraction (T - t_from),
/// frozen, then checked on the remaining frames. The v_xx bound needs f in
/// C^2; pass check_vxx = false otherwise.
CertificateReport apriori_certificates(const History& history, double t_from, double fit_fraction = 0.1,
                                       bool check_vxx = true);

struct EnergyCheck {
    bool nonincreasing = true;
    double worst_increase_per_step = 0.0;
    double worst_t = 0.0;
};

EnergyCheck energy_check(const History& history, double per_step_tol = 1e-8);

struct IntersectionCount {
    std::size_t count = 0;
    bool tangent = false;  // common positivity set nonempty and u_a == u_b on it
    std::size_t common_components = 0;
};

/// Sign changes of u_a - u_b on the common positivity set. With `closure`
/// the set is widened by one node per side, so that a crossing squeezed
/// between two cell-resolution fronts is counted.
IntersectionCount intersection_count(const State& a, const State& b, double threshold = kSupportThreshold,
                                     bool closure = false);

/// Symmetric pressure profile at time t for a run started from u(x, 0).
std::vector<double> pressure_field(const State& state, double m);

}  // namespace rpme
