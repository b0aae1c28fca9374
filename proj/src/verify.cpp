#include "rpme/verify.hpp"

#include "rpme/error.hpp"
#include "rpme/numerics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

namespace rpme {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

CheckResult make_check(int criterion, std::string name) {
    CheckResult r;
    r.criterion = criterion;
    r.name = std::move(name);
    return r;
}

// ZKB refinement study constants.
constexpr double kZkbM = 2.0;
constexpr double kZkbC = 0.5;
constexpr double kZkbS0 = 1.0;
constexpr double kZkbS1 = 4.0;
constexpr double kZkbHalfDomain = 8.0;

ZkbStudy run_zkb(int inverse_dx, bool with_certificates) {
    ZkbStudy z;
    z.dx = 1.0 / inverse_dx;
    const Reaction none(ReactionSpec::pure_diffusion(kZkbM));
    State s = init_state(Grid1D::covering(-kZkbHalfDomain, kZkbHalfDomain, z.dx),
                         [](double x) { return zkb_profile(kZkbM, kZkbC, x, kZkbS0); });
    RunOptions o;
    o.t_end = kZkbS1 - kZkbS0;
    // Frames every 2/dx steps: the ten-frame Darcy differencing window then
    // shrinks in proportion to dx.
    o.record_stride = std::size_t(2 * inverse_dx);
    o.energy = o.certificates = with_certificates;
    const auto t0 = Clock::now();
    const History h = run(s, none, kZkbM, o);
    z.seconds = seconds_since(t0);
    const double edge = zkb_edge(kZkbM, kZkbC, kZkbS1);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const double x = s.grid.x(i);
        const double e = std::abs(s.u[i] - zkb_profile(kZkbM, kZkbC, x, kZkbS1));
        z.full_error = std::max(z.full_error, e);
        if (std::abs(x) < 0.9 * edge) z.interior_error = std::max(z.interior_error, e);
    }
    z.darcy_residual = darcy_diagnostic(h, 10, 0.1).mean_residual;
    if (with_certificates) {
        z.energy = energy_check(h);
        z.certificates = apriori_certificates(h, 0.0, 0.1, true);
    }
    return z;
}

RegressionRun run_regression(const std::string& name, const RunConfig& c, double darcy_from) {
    RegressionRun r;
    r.name = name;
    auto p = prepare_run(c);
    const auto t0 = Clock::now();
    const History h = run(p.state, *p.reaction, c.m(), p.options);
    r.seconds = seconds_since(t0);
    r.darcy_residual = darcy_diagnostic(h, 10, darcy_from).mean_residual;
    r.energy = energy_check(h);
    r.certificates = apriori_certificates(h, 0.0, 0.1, p.reaction->has_second_derivative());
    return r;
}

RunConfig parabola_run(ReactionSpec reaction, double dx, double sigma, double t_end) {
    RunConfig c;
    c.reaction = std::move(reaction);
    c.grid.dx = dx;
    c.grid.pad = 2.0;
    c.u0.kind = "parabola";
    c.u0.params = {{"b", 1.0}, {"sigma", sigma}};
    c.t_end = t_end;
    c.record_stride = 100;
    c.certificates = {"energy", "apriori"};
    return c;
}

const std::vector<std::string> kRegressionRuns = {"zkb", "logistic", "combustion", "bistable"};

const SigmaProbe* find_probe(const ThresholdResult& r, double sigma) {
    for (const auto& p : r.probes)
        if (p.sigma == sigma) return &p;
    return nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------
// Context

struct VerifyContext::Cache {
    std::map<int, ZkbStudy> zkb;
    std::map<std::string, RegressionRun> regression;
    std::optional<ThresholdResult> combustion, bistable;
    std::optional<std::pair<Outcome, double>> combustion_near;
};

VerifyContext::VerifyContext() : cache_(std::make_unique<Cache>()) {}
VerifyContext::~VerifyContext() = default;

const ZkbStudy& VerifyContext::zkb(int inverse_dx) {
    auto it = cache_->zkb.find(inverse_dx);
    if (it == cache_->zkb.end()) it = cache_->zkb.emplace(inverse_dx, run_zkb(inverse_dx, inverse_dx == 256)).first;
    return it->second;
}

const RegressionRun& VerifyContext::regression(const std::string& name) {
    auto it = cache_->regression.find(name);
    if (it != cache_->regression.end()) return it->second;
    RegressionRun r;
    if (name == "zkb") {
        const auto& z = zkb(256);
        r.name = name;
        r.darcy_residual = z.darcy_residual;
        r.energy = *z.energy;
        r.certificates = *z.certificates;
        r.seconds = z.seconds;
    } else if (name == "logistic") {
        r = run_regression(name, parabola_run(ReactionSpec::monostable(2.0), 1.0 / 256, 0.5, 2.0), 0.2);
    } else if (name == "combustion") {
        r = run_regression(name, parabola_run(ReactionSpec::combustion(2.0, 0.3), 1.0 / 64, 1.0, 20.0), 2.0);
    } else if (name == "bistable") {
        r = run_regression(name, parabola_run(ReactionSpec::bistable(2.0, 0.25), 1.0 / 64, 1.2, 20.0), 2.0);
    } else {
        throw PreconditionError("unknown regression run '" + name + "'");
    }
    return cache_->regression.emplace(name, std::move(r)).first->second;
}

RunConfig VerifyContext::combustion_family() {
    RunConfig c = parabola_run(ReactionSpec::combustion(2.0, 0.3), 1.0 / 64, 1.0, 60.0);
    c.record_stride = 200;
    c.certificates.clear();
    return c;
}

RunConfig VerifyContext::bistable_family() {
    RunConfig c = parabola_run(ReactionSpec::bistable(2.0, 0.25), 1.0 / 64, 1.0, 150.0);
    c.record_stride = 200;
    c.certificates.clear();
    return c;
}

const ThresholdResult& VerifyContext::combustion_threshold() {
    if (!cache_->combustion) {
        ClassifyOptions o;
        o.t_end = 60.0;
        cache_->combustion = bisect_sigma(combustion_family(), 0.5, 2.0, 1e-13, o);
    }
    return *cache_->combustion;
}

const ThresholdResult& VerifyContext::bistable_threshold() {
    if (!cache_->bistable) {
        ClassifyOptions o;
        o.t_end = 150.0;
        cache_->bistable = bisect_sigma(bistable_family(), 1.0, 2.0, 1e-11, o);
    }
    return *cache_->bistable;
}

const std::pair<Outcome, double>& VerifyContext::combustion_near_threshold() {
    if (!cache_->combustion_near) {
        const auto& th = combustion_threshold();
        ClassifyOptions o;
        o.t_end = 60.0;
        const auto t0 = Clock::now();
        Outcome out = classify(combustion_family(), o, 0.5 * (th.sigma_lo + th.sigma_hi));
        cache_->combustion_near.emplace(std::move(out), seconds_since(t0));
    }
    return *cache_->combustion_near;
}

// ---------------------------------------------------------------------------
// Criteria

namespace {

CheckResult zkb_oracle(VerifyContext& ctx) {
    CheckResult r = make_check(1, "ZKB oracle");
    const auto& a = ctx.zkb(256);
    const auto& b = ctx.zkb(512);
    const bool small = a.interior_error <= 2e-3;
    const bool halves = b.interior_error <= 0.5 * a.interior_error;
    const bool fast = a.seconds <= 10.0;
    r.passed = small && halves && fast;
    r.values = {{"interior_error_dx256", a.interior_error}, {"interior_error_dx512", b.interior_error},
                {"full_error_dx256", a.full_error},         {"full_error_dx512", b.full_error},
                {"runtime_dx256_s", a.seconds}};
    r.detail = "interior err " + num(a.interior_error) + " (<= 2e-3), " + num(b.interior_error) +
               " after refinement (<= half), runtime " + num(a.seconds) + " s (<= 10 s)";
    return r;
}

CheckResult darcy_law(VerifyContext& ctx) {
    CheckResult r = make_check(2, "Darcy law");
    std::vector<double> ldx, lres;
    Json study = Json::array();
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int inv : {64, 128, 256, 512}) {
        const auto& z = ctx.zkb(inv);
        ldx.push_back(std::log(z.dx));
        lres.push_back(std::log(z.darcy_residual));
        study.push_back({{"dx", z.dx}, {"residual", z.darcy_residual}});
        decreasing = decreasing && z.darcy_residual < prev;
        prev = z.darcy_residual;
    }
    const double order = numerics::fit_line(ldx, lres).slope;
    const auto& logistic = ctx.regression("logistic");
    r.passed = decreasing && order >= 0.8 && logistic.darcy_residual <= 0.10;
    r.values = {{"zkb", study}, {"fitted_order", order}, {"logistic_residual", logistic.darcy_residual}};
    r.detail = "ZKB order " + num(order) + " (>= 0.8)" + (decreasing ? "" : " not monotone") +
               ", logistic residual " + num(logistic.darcy_residual) + " (<= 0.1)";
    return r;
}

CheckResult waiting_time_check() {
    CheckResult r = make_check(3, "waiting-time bracket");
    const double m = 2.0, r0 = 0.2;
    const ReactionSpec spec = ReactionSpec::monostable(m);
    const Reaction f(spec);
    const double K = f.growth_bound(2.0);
    const double A2 = 2.0 * waiting_time_a2_lower_bound(m, K);
    const double A1 = 2.0 * A2;
    const auto br = waiting_time_bracket(m, K, A1, A2, r0);

    auto measure = [&](const InitialData& u0, double t_end) {
        RunConfig c;
        c.reaction = spec;
        c.grid.dx = 1.0 / 256;
        c.grid.pad = 0.5;
        c.u0 = u0;
        c.t_end = t_end;
        c.record_stride = 1000;
        c.watch_points = {0.0};
        auto p = prepare_run(c);
        const double dt0 = stable_dt(p.state, m, LipschitzTable(f, p.state.sup()).at(p.state.sup()), 0.4);
        const History h = run(p.state, f, m, p.options);
        return std::tuple{waiting_time(h, 0.0), std::max(h.waiting.front().dt_at_detection, dt0)};
    };
    // Pressure A x^2 near the edge with A2 < A < A1.
    InitialData quad;
    quad.kind = "pressure_quadratic";
    quad.params = {{"A", 1.5 * A2}, {"r0", r0}};
    const auto [tq, dtq] = measure(quad, 1.5 * br.T2);
    InitialData lin;
    lin.kind = "pressure_linear";
    lin.params = {{"rho", 1.0}, {"r0", r0}};
    const auto [tl, dtl] = measure(lin, 0.01);

    const bool in_bracket = tq && *tq >= br.T1 - dtq && *tq <= br.T2 + dtq;
    const bool linear_moves = tl && *tl <= 2.0 * dtl;
    r.passed = in_bracket && linear_moves;
    r.values = {{"K", K},         {"A1", A1}, {"A2", A2},          {"T1", br.T1},
                {"T2", br.T2},    {"t_star", tq ? Json(*tq) : Json()}, {"dt", dtq},
                {"t_star_linear", tl ? Json(*tl) : Json()},          {"dt_linear", dtl}};
    r.detail = "t* = " + (tq ? num(*tq) : std::string("none")) + " in [" + num(br.T1) + ", " + num(br.T2) +
               "] +- " + num(dtq) + ", linear edge t* = " + (tl ? num(*tl) : std::string("none")) +
               " (<= 2 dt = " + num(2.0 * dtl) + ")";
    return r;
}

CheckResult selfsimilar_speed(VerifyContext& ctx) {
    CheckResult r = make_check(4, "self-similar speed");
    const double m = 2.0, theta = 0.3;
    const auto shoot = selfsimilar_shoot(m, theta, 1e-10);
    const auto& [near, secs] = ctx.combustion_near_threshold();
    const auto fit = transition_speed_fit(near.front_path, 0.0, theta, m);
    const bool exponent_ok = fit.exponent >= 0.45 && fit.exponent <= 0.55;
    const bool agree = fit.rel_err <= 0.10;
    r.passed = shoot.bound_holds && exponent_ok && agree && secs <= 120.0;
    r.values = {{"y0_shoot", shoot.y0},
                {"theta_pow", shoot.theta_pow},
                {"bound_holds", shoot.bound_holds},
                {"darcy_holds", shoot.darcy_holds},
                {"y0_fixed_slope", shoot.y0_fixed_slope},
                {"y0_fit", fit.y0_fit},
                {"y0_fit_left", fit.y0_fit_left},
                {"rel_err", fit.rel_err},
                {"exponent", fit.exponent},
                {"loglog_slope", fit.loglog_slope},
                {"verdict", to_string(near.verdict)},
                {"runtime_s", secs}};
    r.detail = "y0 = " + num(shoot.y0) + (shoot.bound_holds ? " < " : " NOT < ") + "theta^((m-1)/2) = " +
               num(shoot.theta_pow) + ", fit y0 " + num(fit.y0_fit) + " (rel err " + num(fit.rel_err) +
               "), exponent " + num(fit.exponent) + " in [0.45, 0.55], runtime " + num(secs) + " s";
    return r;
}

CheckResult combustion_trichotomy(VerifyContext& ctx) {
    CheckResult r = make_check(5, "trichotomy, combustion");
    const auto& th = ctx.combustion_threshold();
    // The first bracket of width <= 1e-3 along the (deterministic) bisection.
    std::pair<double, double> br{th.sigma_lo, th.sigma_hi};
    for (const auto& b : th.brackets)
        if (b.second - b.first <= 1e-3) {
            br = b;
            break;
        }
    const auto* lo = find_probe(th, br.first);
    const auto* hi = find_probe(th, br.second);
    const bool bracket_ok = br.second - br.first <= 1e-3 && lo && hi && lo->verdict == Verdict::Vanishing &&
                            hi->verdict == Verdict::Spreading;
    const auto& [near, secs] = ctx.combustion_near_threshold();
    const double dist = near.target_distance.value_or(std::numeric_limits<double>::infinity());
    const bool flat = dist <= 0.05;
    r.passed = bracket_ok && flat;
    r.values = {{"bracket", {br.first, br.second}},
                {"below", lo ? Json(to_string(lo->verdict)) : Json()},
                {"above", hi ? Json(to_string(hi->verdict)) : Json()},
                {"sigma_star", 0.5 * (th.sigma_lo + th.sigma_hi)},
                {"probes", th.probes.size()},
                {"flatness", dist},
                {"near_verdict", to_string(near.verdict)},
                {"theta_crossing_ratio", near.theta_crossing_ratio.value_or(-1.0)}};
    r.detail = "bracket [" + num(br.first) + ", " + num(br.second) + "] " +
               (bracket_ok ? "vanishing/spreading" : "NOT vanishing/spreading") + ", middle-half |u - theta| = " +
               num(dist) + " (<= 0.05)";
    return r;
}

CheckResult bistable_trichotomy(VerifyContext& ctx) {
    CheckResult r = make_check(6, "trichotomy, bistable");
    const auto& th = ctx.bistable_threshold();
    const ReactionSpec spec = VerifyContext::bistable_family().reaction;
    const Reaction f(spec);
    const double m = spec.m;
    const double L = ground_state_half_width(f, m);
    const double height = *special_levels(f, m).theta1;
    r.values = {{"bracket", {th.sigma_lo, th.sigma_hi}},
                {"threshold_kind", th.threshold_kind},
                {"probes", th.probes.size()},
                {"L", L}};
    if (!th.transition) {
        r.passed = false;
        r.detail = "no probe classified Transition";
        return r;
    }
    const Outcome& t = *th.transition;
    const double dist = *t.target_distance;
    const auto& s = t.final_state;
    const double half = 0.5 * (s.fronts.back().right - s.fronts.front().left);
    const double width_err = std::abs(half / L - 1.0);
    r.passed = dist <= 0.05 * height && width_err <= 0.03;
    r.values["distance"] = dist;
    r.values["relative_distance"] = dist / height;
    r.values["support_half_width"] = half;
    r.values["width_rel_err"] = width_err;
    r.detail = "ground-state distance " + num(dist / height) + " theta1 (<= 0.05 theta1), support half-width " +
               num(half) + " vs L = " + num(L) + " (rel " + num(width_err) + " <= 0.03)";
    return r;
}

CheckResult hair_trigger_check() {
    CheckResult r = make_check(7, "hair-trigger");
    const auto res = hair_trigger(ReactionSpec::monostable(2.0), 1e-2, 200.0, 1.0 / 128);
    const auto control = hair_trigger(ReactionSpec::pure_diffusion(2.0), 1e-2, 10.0, 1.0 / 128);
    const bool spreads = res.outcome.verdict == Verdict::Spreading;
    const bool control_ok = control.outcome.verdict == Verdict::Vanishing;
    r.passed = spreads && res.floor_holds && control_ok;
    r.values = {{"L0", res.L0},
                {"verdict", to_string(res.outcome.verdict)},
                {"t_decided", res.outcome.t_final},
                {"worst_floor_gap", res.worst_floor_gap},
                {"control_verdict", to_string(control.outcome.verdict)},
                {"control_floor_gap", control.worst_floor_gap}};
    r.detail = std::string(to_string(res.outcome.verdict)) + " at t = " + num(res.outcome.t_final) +
               ", floor gap " + num(res.worst_floor_gap) + " (>= -1e-10), control " +
               std::string(to_string(control.outcome.verdict));
    return r;
}

CheckResult complete_vanishing() {
    CheckResult r = make_check(8, "complete vanishing");
    const double m = 2.0;
    ReactionSpec spec = ReactionSpec::bistable(m, 0.45);
    spec.p0 = m + 2.0;
    spec.tail = 1.0;
    const Reaction f(spec);
    const auto vc = vanishing_barriers(f, m);
    r.values = {{"feasible", vc.feasible}, {"M", vc.M}, {"b", vc.b}, {"L", vc.L}, {"t1", vc.t1}};
    if (!vc.feasible) {
        r.detail = "barrier constants infeasible: " + vc.failed;
        return r;
    }
    bool all = true;
    double worst_ratio = 0.0;
    Json runs = Json::array();
    for (double A : {1e2, 1e4, 1e6}) {
        RunConfig c;
        c.reaction = spec;
        c.grid.dx = 1.0 / 512;
        c.grid.pad = 0.05;
        c.u0.kind = "indicator";
        c.u0.params = {{"height", A}, {"L", vc.b}};
        c.record_stride = 10;
        ClassifyOptions o;
        o.t_end = 5.0;
        // Homogeneous barrier: sup v <= 1/(L t) while t <= t1 = 1/(L M).
        o.on_frame = [&](const State&, const Frame& fr) {
            if (fr.t > 0.0 && fr.t <= vc.t1) worst_ratio = std::max(worst_ratio, pressure_of(fr.sup, m) * vc.L * fr.t);
        };
        const Outcome out = classify(c, o);
        all = all && out.verdict == Verdict::Vanishing;
        runs.push_back({{"amplitude", A}, {"verdict", to_string(out.verdict)}, {"t", out.t_final}});
    }
    r.passed = all && worst_ratio <= 1.0;
    r.values["runs"] = runs;
    r.values["barrier_ratio"] = worst_ratio;
    r.detail = std::string(all ? "all amplitudes vanish" : "some amplitude does not vanish") +
               ", max sup v L t = " + num(worst_ratio) + " (<= 1) before t1";
    return r;
}

CheckResult lyapunov(VerifyContext& ctx) {
    CheckResult r = make_check(9, "Lyapunov decay");
    r.passed = true;
    for (const auto& name : kRegressionRuns) {
        const auto& run = ctx.regression(name);
        r.passed = r.passed && run.energy.nonincreasing;
        r.values[name] = {{"nonincreasing", run.energy.nonincreasing},
                          {"worst_increase_per_step", run.energy.worst_increase_per_step}};
        if (!run.energy.nonincreasing) r.detail += name + " increases at t = " + num(run.energy.worst_t) + "; ";
    }
    if (r.passed) r.detail = "E nonincreasing to 1e-8 per step on zkb, logistic, combustion, bistable";
    return r;
}

CheckResult intersection_numbers() {
    CheckResult r = make_check(10, "intersection numbers");
    RunConfig a, b;
    a.reaction = b.reaction = ReactionSpec::monostable(2.0);
    a.grid.dx = b.grid.dx = 1.0 / 256;
    a.grid.pad = b.grid.pad = 1.0;
    a.u0.params = {{"b", 0.5}, {"sigma", 1.0}, {"center", -1.0}};
    b.u0.params = {{"b", 0.5}, {"sigma", 1.0}, {"center", 1.0}};
    const auto merge = z0_monitor(a, b, 2.0, 1000);
    bool merge_ok = merge.increases.size() == 1 && merge.nonincreasing_after_settle;
    if (merge_ok) {
        const auto& inc = merge.increases.front();
        merge_ok = inc.from == 0 && inc.to == 1 &&
                   std::any_of(merge.merges.begin(), merge.merges.end(), [&](const MergeEvent& e) {
                       return (e.step > inc.step ? e.step - inc.step : inc.step - e.step) <= 2;
                   });
    }
    RunConfig c = a, d = a;
    c.u0.params = {{"b", 0.5}, {"sigma", 2.0}};
    d.u0.params = {{"b", 0.5}, {"sigma", 1.0}};
    const auto nested = z0_monitor(c, d, 3.0, 1000);
    const bool nested_ok = std::all_of(nested.series.begin(), nested.series.end(),
                                       [](const Z0Sample& s) { return s.z0 == 0; }) &&
                           nested.increases.empty();
    r.passed = merge_ok && nested_ok;
    r.values = {{"merge_increases", merge.increases.size()},
                {"merge_t", merge.increases.empty() ? Json() : Json(merge.increases.front().t)},
                {"settled_after", merge.settled_after},
                {"nested_samples", nested.series.size()},
                {"nested_increases", nested.increases.size()}};
    r.detail = std::string(merge_ok ? "merge: Z0 0 -> 1 at the merge, then nonincreasing"
                                    : "merge scenario violates 0 -> 1 at merge") +
               (nested_ok ? "; nested: Z0 = 0 throughout" : "; nested: Z0 != 0");
    return r;
}

CheckResult ground_state_decay() {
    CheckResult r = make_check(11, "ground-state decay exponent");
    r.passed = true;
    Json cases = Json::array();
    for (double m : {2.0, 3.0})
        for (double alpha : {1.0, 1.5, 2.0, 2.5, 3.0}) {
            const Reaction f(ReactionSpec::bistable_decay(m, 0.25, alpha, 0.25));
            if (alpha < m) {
                const auto g = ground_state(f, m);
                const double expected = 2.0 / (m - alpha);
                const double fit = density_edge_exponent(g);
                const double rel = std::abs(fit / expected - 1.0);
                r.passed = r.passed && rel <= 0.05;
                cases.push_back({{"m", m}, {"alpha", alpha}, {"fit", fit}, {"expected", expected}, {"rel", rel}});
            } else {
                const double L = ground_state_half_width(f, m);
                const bool inf = std::isinf(L);
                r.passed = r.passed && inf;
                cases.push_back({{"m", m}, {"alpha", alpha}, {"L", inf ? Json("inf") : Json(L)}});
            }
        }
    r.values["cases"] = cases;
    r.detail = r.passed ? "edge exponents within 5% of 2/(m - alpha); L = inf for alpha >= m"
                        : "an edge exponent or an infinite half-width check failed";
    return r;
}

CheckResult certificates(VerifyContext& ctx) {
    CheckResult r = make_check(12, "a priori certificates");
    r.passed = true;
    for (const auto& name : kRegressionRuns) {
        const auto& c = ctx.regression(name).certificates;
        const bool ok = c.vxx_ok && c.vt_ok;
        r.passed = r.passed && ok;
        r.values[name] = {{"vxx_ok", c.vxx_ok},
                          {"vt_ok", c.vt_ok},
                          {"vxx_lower", {c.vxx_lower.intercept, c.vxx_lower.slope}},
                          {"vt_lower", {c.vt_lower.intercept, c.vt_lower.slope}},
                          {"vt_upper", {c.vt_upper.intercept, c.vt_upper.slope}},
                          {"max_vx", c.max_vx}};
        if (!ok) r.detail += name + ": " + c.violation + "; ";
    }
    if (r.passed) r.detail = "envelopes fitted on the first 10% hold on the rest of all regression runs";
    return r;
}

CheckResult barrier_residuals() {
    CheckResult r = make_check(0, "barrier residual certificates");
    std::vector<std::pair<std::string, BarrierSolution>> barriers = {
        {"zkb m=2", zkb_barrier(2.0, 0.1)},
        {"zkb m=3", zkb_barrier(3.0, 0.5)},
        {"supersolution envelope", supersolution_envelope(2.0, 1.0, 1.0, 1.0)},
        {"zkb-like subsolution", zkb_like_subsolution(2.0, 1.0, 0.1, 0.0)},
        {"sine subsolution", sine_subsolution(1.0, 0.2, 2.0, 1.0)},
        {"parabolic supersolution", parabolic_supersolution(2.0, 1.0, 13.5)},
        {"parabolic subsolution", parabolic_subsolution(2.0, 1.0, 6.75, 0.2)},
    };
    ReactionSpec spec = ReactionSpec::bistable(2.0, 0.45);
    spec.p0 = 4.0;
    spec.tail = 1.0;
    const auto vc = vanishing_barriers(Reaction(spec), 2.0);
    for (const auto& b : vc.barriers) barriers.emplace_back(std::string(to_string(b.kind)), b);
    r.passed = true;
    for (const auto& [name, b] : barriers) {
        const auto rep = certify_residual(b);
        r.passed = r.passed && rep.passed;
        r.values[name] = {{"passed", rep.passed}, {"worst_relative", rep.worst_relative}};
        if (!rep.passed) r.detail += name + " fails; ";
    }
    if (r.passed) r.detail = std::to_string(barriers.size()) + " barriers certified";
    return r;
}

template <class F>
CheckResult timed(F&& f) {
    const auto t0 = Clock::now();
    CheckResult r = f();
    r.seconds = seconds_since(t0);
    return r;
}

}  // namespace

CheckResult acceptance_criterion(int id, VerifyContext& ctx) {
    return timed([&]() -> CheckResult {
        switch (id) {
            case 1: return zkb_oracle(ctx);
            case 2: return darcy_law(ctx);
            case 3: return waiting_time_check();
            case 4: return selfsimilar_speed(ctx);
            case 5: return combustion_trichotomy(ctx);
            case 6: return bistable_trichotomy(ctx);
            case 7: return hair_trigger_check();
            case 8: return complete_vanishing();
            case 9: return lyapunov(ctx);
            case 10: return intersection_numbers();
            case 11: return ground_state_decay();
            case 12: return certificates(ctx);
            default: throw PreconditionError("acceptance criteria are numbered 1 to 12");
        }
    });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"barriers",    "stationary",   "darcy",
                                                   "waiting",     "trichotomy-combustion",
                                                   "trichotomy-bistable", "hair-trigger",
                                                   "vanishing-complete",  "z0"};
    return names;
}

SuiteReport run_suite(const std::string& name, VerifyContext& ctx) {
    static const std::map<std::string, std::vector<int>> criteria = {
        {"barriers", {}},           {"stationary", {11}},          {"darcy", {1, 2, 9, 12}},
        {"waiting", {3}},           {"trichotomy-combustion", {5, 4}}, {"trichotomy-bistable", {6}},
        {"hair-trigger", {7}},      {"vanishing-complete", {8}},   {"z0", {10}},
    };
    const auto it = criteria.find(name);
    if (it == criteria.end()) throw PreconditionError("unknown verify suite '" + name + "'");
    SuiteReport rep;
    rep.suite = name;
    if (name == "barriers") rep.checks.push_back(timed(barrier_residuals));
    for (int id : it->second) rep.checks.push_back(acceptance_criterion(id, ctx));
    return rep;
}

bool SuiteReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::ordered_json to_json(const CheckResult& c, bool with_timing) {
    Json j = {{"criterion", c.criterion}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail},
              {"values", c.values}};
    if (with_timing) j["seconds"] = c.seconds;
    return j;
}

nlohmann::ordered_json to_json(const SuiteReport& r, bool with_timing) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c, with_timing));
    return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

}  // namespace rpme
