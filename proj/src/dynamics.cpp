#include "rpme/dynamics.hpp"

#include "rpme/error.hpp"
#include "rpme/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace rpme {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Spreading: return "spreading";
        case Verdict::Vanishing: return "vanishing";
        case Verdict::Transition: return "transition";
        case Verdict::Undecided: return "undecided";
    }
    return "undecided";
}

double vanishing_level(const Reaction& f) {
    switch (f.kind()) {
        case ReactionKind::Monostable: return 0.0;
        case ReactionKind::PureDiffusion: return std::numeric_limits<double>::infinity();
        case ReactionKind::Bistable:
        case ReactionKind::Combustion: return f.theta();
        case ReactionKind::Custom: break;
    }
    constexpr int kSamples = 200000;
    for (int i = 1; i <= kSamples; ++i) {
        const double u = 2.0 * i / kSamples;
        if (f.eval(u) > 0.0) return 2.0 * (i - 1) / kSamples;
    }
    return std::numeric_limits<double>::infinity();
}

GrowthFit fit_growth(const std::vector<double>& t, const std::vector<double>& r) {
    if (t.size() != r.size() || t.size() < 4) throw PreconditionError("growth fit needs at least 4 samples");
    std::vector<double> lt(t.size()), lr(r.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(r[i] > 0.0)) throw PreconditionError("growth fit needs positive t and r");
        lt[i] = std::log(t[i]);
        lr[i] = std::log(r[i]);
    }
    GrowthFit out;
    out.loglog_slope = numerics::fit_line(lt, lr).slope;
    auto ssr = [&](double g, numerics::LineFit* keep) {
        std::vector<double> x(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::pow(t[i], g);
        const auto f = numerics::fit_line(x, r);
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) s += std::pow(r[i] - f.intercept - f.slope * x[i], 2);
        if (keep) *keep = f;
        return s;
    };
    // Coarse scan, then golden section around the best cell.
    constexpr double kLo = 0.05, kHi = 2.0;
    constexpr int kScan = 40;
    int best = 0;
    double best_s = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScan; ++i) {
        const double s = ssr(kLo + (kHi - kLo) * i / kScan, nullptr);
        if (s < best_s) best_s = s, best = i;
    }
    double a = kLo + (kHi - kLo) * std::max(0, best - 1) / kScan;
    double b = kLo + (kHi - kLo) * std::min(kScan, best + 1) / kScan;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = ssr(c, nullptr), fd = ssr(d, nullptr);
    while (b - a > 1e-6) {
        if (fc < fd) {
            b = d, d = c, fd = fc;
            c = b - phi * (b - a), fc = ssr(c, nullptr);
        } else {
            a = c, c = d, fc = fd;
            d = a + phi * (b - a), fd = ssr(d, nullptr);
        }
    }
    out.gamma = 0.5 * (a + b);
    numerics::LineFit f;
    ssr(out.gamma, &f);
    out.a = f.intercept;
    out.b = f.slope;
    return out;
}

namespace {

/// Half-width of the largest interval around x_c on which u >= level.
double plateau_half_width(const State& s, double xc, double level) {
    const std::size_t c = s.grid.index_of(xc);
    if (s.u.empty() || s.u[c] < level) return 0.0;
    std::size_t l = c, r = c;
    while (l > 0 && s.u[l - 1] >= level) --l;
    while (r + 1 < s.u.size() && s.u[r + 1] >= level) ++r;
    return std::min(xc - s.grid.x(l), s.grid.x(r) - xc);
}

/// Value at time t of a series sampled at increasing times (step interpolation).
template <class Series, class Get>
double value_at(const Series& series, double t, Get get) {
    auto it = std::lower_bound(series.begin(), series.end(), t,
                               [](const auto& e, double tt) { return e.first < tt; });
    if (it == series.end()) return get(series.back());
    return get(*it);
}

double radius(const FrontSample& p, double center, int side) {
    return side > 0 ? p.p_right - center : center - p.p_left;
}

/// Samples of the final fifth of the path with positive time and radius.
void final_fifth(const std::vector<FrontSample>& path, double center, int side, std::vector<double>& t,
                 std::vector<double>& r) {
    t.clear();
    r.clear();
    if (path.empty()) return;
    const double t_end = path.back().t;
    for (const auto& p : path) {
        const double rr = radius(p, center, side);
        if (p.t < 0.8 * t_end || p.t <= 0.0 || !(rr > 0.0)) continue;
        t.push_back(p.t);
        r.push_back(rr);
    }
}

std::optional<double> growth_exponent(const std::vector<FrontSample>& path, double center, int side) {
    std::vector<double> t, r;
    final_fifth(path, center, side, t, r);
    if (t.size() < 5) return std::nullopt;
    return fit_growth(t, r).gamma;
}

/// Local maxima of u above `level`, one per excursion above the level.
std::vector<double> peaks_above(const State& s, double level) {
    std::vector<double> out;
    std::size_t i = 0;
    const std::size_t n = s.u.size();
    while (i < n) {
        if (s.u[i] <= level) {
            ++i;
            continue;
        }
        std::size_t best = i;
        while (i < n && s.u[i] > level) {
            if (s.u[i] > s.u[best]) best = i;
            ++i;
        }
        // Parabolic refinement of the peak position.
        double x = s.grid.x(best);
        if (best > 0 && best + 1 < n) {
            const double a = s.u[best - 1], b = s.u[best], c = s.u[best + 1];
            const double den = a - 2.0 * b + c;
            if (den < 0.0) x += 0.5 * (a - c) / den * s.grid.dx;
        }
        out.push_back(x);
    }
    return out;
}

void check_transition(Outcome& out, const Reaction& f, double m, double center, const Tolerances& tol) {
    const State& s = out.final_state;
    if (s.fronts.empty()) return;
    if (f.kind() == ReactionKind::Combustion) {
        const double theta = f.theta();
        const double l = s.fronts.front().left, r = s.fronts.back().right;
        const double mid = 0.5 * (l + r), quarter = 0.25 * (r - l);
        double dist = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i)
            if (std::abs(s.grid.x(i) - mid) <= quarter) dist = std::max(dist, std::abs(s.u[i] - theta));
        out.target_level = theta;
        out.target_distance = dist;
        out.front_exponent = growth_exponent(out.front_path, center, +1);
        // Outermost theta crossing relative to the front radius.
        std::size_t j = s.fronts.back().i_right;
        while (j > 0 && s.u[j] < theta * (1.0 - tol.trans)) --j;
        const double radius = r - center;
        if (radius > 0.0) out.theta_crossing_ratio = std::max(0.0, s.grid.x(j) - center) / radius;
        const bool flat = dist <= tol.trans;
        const bool sublinear = out.front_exponent && *out.front_exponent >= 0.4 && *out.front_exponent <= 0.6;
        if (flat && sublinear) {
            out.verdict = Verdict::Transition;
            out.reason = "flat at theta on the middle half with square-root front growth";
        } else {
            out.reason = flat ? "flat at theta but front exponent outside [0.4, 0.6]"
                              : "not flat at theta on the middle half";
        }
        return;
    }
    if (f.kind() == ReactionKind::Bistable) {
        const double theta = f.theta();
        const auto shifts = peaks_above(s, theta);
        if (shifts.empty()) {
            out.reason = "no peak above theta";
            return;
        }
        StationaryProfile target;
        try {
            const auto base = ground_state(f, m);
            if (!base.compact()) {
                out.reason = "ground state has unbounded support";
                return;
            }
            target = assemble_multibump(base, shifts);
        } catch (const PreconditionError& e) {
            out.reason = std::string("peaks too close for a ground-state sum: ") + e.what();
            return;
        }
        double dist = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i) dist = std::max(dist, std::abs(s.u[i] - target.eval(s.grid.x(i))));
        const double height = *special_levels(f, m).theta1;
        out.target_shifts = shifts;
        out.target_distance = dist;
        if (dist <= tol.trans * height) {
            out.verdict = Verdict::Transition;
            out.reason = "matches the ground-state sum";
        } else {
            out.reason = "far from the ground-state sum";
        }
    }
}

}  // namespace

namespace {

Outcome classify_prepared(PreparedRun& p, double m, const ClassifyOptions& opt) {
    const Reaction& f = *p.reaction;
    const double center = 0.5 * (p.initial_left + p.initial_right);
    const double ubar = vanishing_level(f);
    const double level = 1.0 - opt.tol.spread;
    // Once u >= level on the support of the bump U_level, that bump lies below
    // u and is a subsolution, so spreading is certain.
    double w_min = std::numeric_limits<double>::infinity();
    if (f.kind() != ReactionKind::PureDiffusion) {
        try {
            w_min = bump_half_width(f, m, level);
        } catch (const Error&) {
        }
    }

    Outcome out;
    std::vector<std::pair<double, double>> widths;
    p.options.t_end = opt.t_end;
    if (opt.check_stride > 0) p.options.record_stride = opt.check_stride;
    p.options.observer = [&](const State& s, const Frame& fr) {
        if (opt.on_frame) opt.on_frame(s, fr);
        out.sup_history.emplace_back(fr.t, fr.sup);
        if (!s.fronts.empty()) {
            FrontSample fs{fr.t, s.fronts.front().left, s.fronts.back().right, s.fronts.front().left,
                           s.fronts.back().right, fr.sup};
            if (fr.left.front().valid) fs.p_left = fr.left.front().position;
            if (fr.right.back().valid) fs.p_right = fr.right.back().position;
            out.front_path.push_back(fs);
        }
        // Without a reaction every datum decays; the verdict is deferred to
        // t_end so that the run still reports its full evolution.
        if (fr.sup <= ubar && (std::isfinite(ubar) || fr.t >= opt.t_end)) {
            out.verdict = Verdict::Vanishing;
            out.reason = fr.sup == 0.0          ? "extinct"
                         : !std::isfinite(ubar) ? "no reaction, u decays to 0"
                                                : "sup u below the largest level with f <= 0 beneath it";
            return true;
        }
        const double t80 = 0.8 * fr.t;
        if (fr.sup <= opt.tol.vanish && fr.t > 0.0 &&
            fr.sup < value_at(out.sup_history, t80, [](const auto& e) { return e.second; })) {
            out.verdict = Verdict::Vanishing;
            out.reason = "sup u below vanish_tol and decreasing";
            return true;
        }
        const double w = plateau_half_width(s, center, level);
        widths.emplace_back(fr.t, w);
        out.plateau_half_width = w;
        if (w >= w_min && fr.t > 0.0 && w > value_at(widths, t80, [](const auto& e) { return e.second; })) {
            out.verdict = Verdict::Spreading;
            out.reason = "plateau above 1 - spread_tol wider than the bump U_(1 - spread_tol) and growing";
            return true;
        }
        return false;
    };
    const History h = run(p.state, f, m, p.options);
    out.t_final = p.state.t;
    out.steps = p.state.steps;
    out.sup_final = p.state.sup();
    out.final_state = std::move(p.state);
    if (p.options.energy) out.energy = energy_check(h);
    if (p.options.certificates) {
        try {
            out.certificates = apriori_certificates(h, 0.0, 0.1, f.has_second_derivative());
        } catch (const PreconditionError&) {
            // too few frames before the verdict; nothing to certify
        }
    }
    if (!h.stopped_early) {
        out.verdict = Verdict::Undecided;
        out.reason = "no rule satisfied at t_end";
        check_transition(out, f, m, center, opt.tol);
    }
    return out;
}

}  // namespace

Outcome classify(const RunConfig& config, const ClassifyOptions& opt, double sigma) {
    auto p = prepare_run(config, sigma);
    return classify_prepared(p, config.m(), opt);
}

Outcome classify(const RunConfig& config, double sigma) {
    ClassifyOptions opt;
    opt.tol = config.tol;
    opt.t_end = config.t_end;
    return classify(config, opt, sigma);
}

// ---------------------------------------------------------------------------
// Bisection

namespace {

int rank(Verdict v) {
    switch (v) {
        case Verdict::Vanishing: return 0;
        case Verdict::Transition: return 1;
        case Verdict::Spreading: return 2;
        default: return -1;
    }
}

}  // namespace

void check_monotone(const std::vector<SigmaProbe>& probes) {
    std::map<double, Verdict> by_sigma;
    for (const auto& p : probes)
        if (p.verdict != Verdict::Undecided) by_sigma[p.sigma] = p.verdict;
    std::pair<double, Verdict> last{0.0, Verdict::Undecided};
    for (const auto& [sigma, v] : by_sigma) {
        if (last.second != Verdict::Undecided && rank(v) < rank(last.second))
            throw InvariantViolation("outcomes not monotone in sigma: " + std::string(to_string(last.second)) +
                                     " at sigma = " + std::to_string(last.first) + " but " +
                                     std::string(to_string(v)) + " at sigma = " + std::to_string(sigma));
        last = {sigma, v};
    }
}

ThresholdResult bisect_sigma(const RunConfig& family, double lo, double hi, double tol,
                             const ClassifyOptions& options) {
    if (!(lo > 0.0 && hi > lo)) throw PreconditionError("bisection needs 0 < sigma_lo < sigma_hi");
    if (!(tol > 0.0)) throw PreconditionError("bisection tolerance must be positive");
    ThresholdResult res;
    res.family_id = content_hash(to_json(family).dump());

    auto probe = [&](double sigma) {
        ClassifyOptions o = options;
        Outcome out = classify(family, o, sigma);
        SigmaProbe p{sigma, out.verdict, o.t_end, out.t_final, false};
        if (out.verdict == Verdict::Undecided) {
            o.t_end *= 4.0;
            out = classify(family, o, sigma);
            p = {sigma, out.verdict, o.t_end, out.t_final, true};
        }
        res.probes.push_back(p);
        check_monotone(res.probes);
        if (out.verdict == Verdict::Transition) res.transition = out;
        return out;
    };

    constexpr int kMaxWiden = 10;
    Outcome below = probe(lo);
    for (int k = 0; below.verdict != Verdict::Vanishing; ++k) {
        if (k == kMaxWiden || below.verdict == Verdict::Undecided)
            throw PreconditionError("sigma_lo = " + std::to_string(lo) + " does not vanish (" +
                                    std::string(to_string(below.verdict)) + ")");
        lo *= 0.5;
        below = probe(lo);
    }
    Outcome above = probe(hi);
    for (int k = 0; above.verdict == Verdict::Vanishing; ++k) {
        if (k == kMaxWiden) throw PreconditionError("sigma_hi = " + std::to_string(hi) + " still vanishes");
        hi *= 2.0;
        above = probe(hi);
    }
    if (above.verdict == Verdict::Undecided)
        throw PreconditionError("sigma_hi = " + std::to_string(hi) + " is undecided after extension");

    res.converged = true;
    res.brackets.emplace_back(lo, hi);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        Outcome o = probe(mid);
        if (o.verdict == Verdict::Vanishing) {
            lo = mid;
            below = std::move(o);
        } else if (o.verdict == Verdict::Undecided) {
            // Still undecided after the 4x extension: stop rather than guess.
            res.converged = false;
            above = std::move(o);
            break;
        } else {
            hi = mid;
            above = std::move(o);
        }
        res.brackets.emplace_back(lo, hi);
    }
    res.sigma_lo = lo;
    res.sigma_hi = hi;
    std::vector<double> transitions;
    for (const auto& p : res.probes)
        if (p.verdict == Verdict::Transition) transitions.push_back(p.sigma);
    const bool band = transitions.size() >= 2 &&
                      *std::max_element(transitions.begin(), transitions.end()) -
                              *std::min_element(transitions.begin(), transitions.end()) >=
                          1e-3;
    res.threshold_kind = band ? "transition band" : "point threshold";
    res.below = std::move(below);
    res.above = std::move(above);
    return res;
}

// ---------------------------------------------------------------------------
// Hair-trigger

HairTriggerResult hair_trigger(const ReactionSpec& spec, double q0, double t_end, double dx, const Tolerances& tol) {
    if (spec.kind != ReactionKind::Monostable && spec.kind != ReactionKind::PureDiffusion)
        throw PreconditionError("hair-trigger needs a monostable reaction (or the pure diffusion control)");
    HairTriggerResult res;
    res.q0 = q0;
    // The pure diffusion control has no bump of its own; it starts from the
    // logistic bump of the same height.
    ReactionSpec bump_spec = spec.kind == ReactionKind::PureDiffusion ? ReactionSpec::monostable(spec.m) : spec;
    const Reaction bump_reaction(bump_spec);
    const auto bump = compact_bump(bump_reaction, spec.m, q0);
    res.L0 = *bump.L0;

    RunConfig c;
    c.reaction = bump_spec;
    c.grid.dx = dx;
    c.grid.pad = std::max(1.0, 2.0 * res.L0);
    c.u0.kind = "bump";
    c.u0.params["q0"] = q0;
    c.t_end = t_end;
    c.record_stride = 200;
    c.tol = tol;

    auto p = prepare_run(c);
    // The floor is sampled with the bump's reaction; the run uses the requested reaction.
    p.reaction = std::make_unique<Reaction>(spec);
    const State floor = p.state;
    ClassifyOptions opt;
    opt.tol = tol;
    opt.t_end = t_end;
    double worst = std::numeric_limits<double>::infinity();
    opt.on_frame = [&](const State& s, const Frame&) {
        const long long shift = floor.grid.offset - s.grid.offset;
        for (std::size_t i = 0; i < floor.u.size(); ++i)
            worst = std::min(worst, s.u[std::size_t((long long)i + shift)] - floor.u[i]);
    };
    res.outcome = classify_prepared(p, spec.m, opt);
    res.worst_floor_gap = worst;
    res.floor_holds = worst >= -1e-10;
    return res;
}

// ---------------------------------------------------------------------------
// Transition front speed

SpeedFit transition_speed_fit(const std::vector<FrontSample>& path, double center, double theta, double m) {
    std::vector<double> tr, rr, tl, rl;
    final_fifth(path, center, +1, tr, rr);
    final_fifth(path, center, -1, tl, rl);
    if (tr.size() < 5 || tl.size() < 5) throw PreconditionError("speed fit needs at least 5 samples in the final fifth");
    auto sqrt_of = [](std::vector<double> t) {
        for (auto& x : t) x = std::sqrt(x);
        return t;
    };
    SpeedFit fit;
    fit.y0_fit = 0.5 * numerics::fit_line(sqrt_of(tr), rr).slope;
    fit.y0_fit_left = 0.5 * numerics::fit_line(sqrt_of(tl), rl).slope;
    const auto gr = fit_growth(tr, rr);
    fit.exponent = gr.gamma;
    fit.loglog_slope = gr.loglog_slope;
    fit.exponent_left = fit_growth(tl, rl).gamma;
    fit.y0_shoot = selfsimilar_shoot(m, theta, 1e-8).y0;
    fit.rel_err = std::abs(fit.y0_fit - fit.y0_shoot) / fit.y0_shoot;
    fit.bound_holds = fit.y0_fit > 0.0 && fit.y0_fit < std::pow(theta, 0.5 * (m - 1.0));
    return fit;
}

SpeedFit transition_speed_fit(const Outcome& o, double center, double theta, double m) {
    if (o.verdict != Verdict::Transition)
        throw DomainError("speed fit needs a transition run (got " + std::string(to_string(o.verdict)) + ")");
    return transition_speed_fit(o.front_path, center, theta, m);
}

// ---------------------------------------------------------------------------
// Intersection numbers of a run pair

namespace {

std::size_t common_components(const State& a, const State& b) {
    std::size_t count = 0;
    bool in = false;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        const bool c = a.u[i] > kSupportThreshold && b.u[i] > kSupportThreshold;
        if (c && !in) ++count;
        in = c;
    }
    return count;
}

}  // namespace

Z0Report z0_monitor(const RunConfig& ca, const RunConfig& cb, double t_end, std::size_t sample_stride) {
    if (!(ca.reaction == cb.reaction)) throw PreconditionError("z0 monitor needs one reaction for both runs");
    if (ca.grid.dx != cb.grid.dx) throw PreconditionError("z0 monitor needs a shared grid spacing");
    if (sample_stride == 0) sample_stride = 1;
    const Reaction f(ca.reaction);
    const double m = ca.m(), dx = ca.grid.dx;
    const auto ia = make_initial(ca.u0, f, m, dx), ib = make_initial(cb.u0, f, m, dx);
    const double pad = std::max(ca.grid.pad, cb.grid.pad);
    const auto grid = Grid1D::covering(std::min(ia.left, ib.left) - pad, std::max(ia.right, ib.right) + pad, dx);
    State a = init_state(grid, ia.u0), b = init_state(grid, ib.u0);
    const LipschitzTable K(f, std::max({1.0, a.sup(), b.sup()}));
    StepOptions opt;
    opt.grow = false;

    Z0Report rep;
    auto sample = [&]() {
        const auto ic = intersection_count(a, b, kSupportThreshold, true);
        return Z0Sample{a.t, a.steps, ic.count, ic.tangent};
    };
    Z0Sample prev = sample();
    rep.series.push_back(prev);
    std::size_t prev_common = common_components(a, b);
    std::vector<Z0Event> pending;
    auto near_merge = [&](std::size_t step) {
        return std::any_of(rep.merges.begin(), rep.merges.end(), [&](const MergeEvent& e) {
            return (e.step > step ? e.step - step : step - e.step) <= 2;
        });
    };
    auto settle_pending = [&](bool final) {
        std::erase_if(pending, [&](const Z0Event& e) {
            if (near_merge(e.step)) return true;
            if (!final && a.steps <= e.step + 2) return false;
            throw InvariantViolation("intersection number rose from " + std::to_string(e.from) + " to " +
                                     std::to_string(e.to) + " at t = " + std::to_string(e.t) +
                                     " with no merge event within two steps");
        });
    };

    std::vector<double> scratch;
    double sup = std::max(a.sup(), b.sup());
    const double eps_t = 1e-12 * std::max(1.0, t_end);
    while (a.t < t_end - eps_t) {
        // Grow both grids together so they stay identical.
        std::size_t lo = a.grid.n, hi = 0;
        for (const State* s : {&a, &b})
            if (!s->fronts.empty()) {
                lo = std::min(lo, s->fronts.front().i_left);
                hi = std::max(hi, s->fronts.back().i_right);
            }
        const std::size_t add_l = lo < opt.margin_cells ? opt.growth_cells : 0;
        const std::size_t add_r = hi + opt.margin_cells >= a.grid.n ? opt.growth_cells : 0;
        if (add_l || add_r) {
            grow(a, add_l, add_r);
            grow(b, add_l, add_r);
        }
        const double k = K.at(sup);
        double dt = opt.safety * std::min(sup > 0.0 ? dx * dx / (2.0 * m * std::pow(sup, m - 1.0))
                                                    : std::numeric_limits<double>::infinity(),
                                          1.0 / k);
        if (a.t + dt > t_end) dt = t_end - a.t;
        const std::size_t na = a.fronts.size(), nb = b.fronts.size();
        const double sa = step(a, f, m, dt, k, opt, scratch).max_u;
        const double sb = step(b, f, m, dt, k, opt, scratch).max_u;
        sup = std::max(sa, sb);
        if (a.fronts.size() < na) rep.merges.push_back({a.t, a.steps, na, a.fronts.size()});
        if (b.fronts.size() < nb) rep.merges.push_back({b.t, b.steps, nb, b.fronts.size()});
        const std::size_t nc = common_components(a, b);
        if (nc != prev_common) rep.merges.push_back({a.t, a.steps, prev_common, nc});
        prev_common = nc;

        const Z0Sample z = sample();
        if (z.z0 > prev.z0) {
            pending.push_back({z.t, z.step, prev.z0, z.z0});
            rep.increases.push_back(pending.back());
        }
        if (z.z0 != prev.z0 || a.steps % sample_stride == 0) rep.series.push_back(z);
        prev = z;
        settle_pending(false);
    }
    if (rep.series.back().step != prev.step) rep.series.push_back(prev);
    settle_pending(true);
    rep.settled_after = rep.increases.empty() ? 0.0 : rep.increases.back().t;
    for (std::size_t i = 1; i < rep.series.size(); ++i)
        if (rep.series[i].t > rep.settled_after && rep.series[i].z0 > rep.series[i - 1].z0)
            rep.nonincreasing_after_settle = false;
    return rep;
}

}  // namespace rpme
