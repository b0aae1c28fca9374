#include "rpme/solver.hpp"

#include "rpme/error.hpp"
#include "rpme/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rpme {

// ---------------------------------------------------------------------------
// Grid and state

std::size_t Grid1D::index_of(double xx) const noexcept {
    const double k = std::round(xx / dx) - double(offset);
    if (k <= 0.0) return 0;
    if (k >= double(n - 1)) return n - 1;
    return std::size_t(k);
}

Grid1D Grid1D::covering(double a, double b, double dx) {
    if (!(dx > 0.0)) throw ConfigError("grid.dx: must be positive");
    if (!(b > a)) throw ConfigError("grid: empty interval");
    Grid1D g;
    g.dx = dx;
    g.offset = (long long)std::floor(a / dx);
    const long long last = (long long)std::ceil(b / dx);
    g.n = std::size_t(last - g.offset + 1);
    return g;
}

std::vector<Component> find_components(const Grid1D& grid, std::span<const double> u, double threshold) {
    std::vector<Component> out;
    std::size_t i = 0;
    const std::size_t n = u.size();
    while (i < n) {
        while (i < n && !(u[i] > threshold)) ++i;
        if (i == n) break;
        Component c;
        c.i_left = i;
        while (i < n && u[i] > threshold) ++i;
        c.i_right = i - 1;
        c.left = grid.x(c.i_left);
        c.right = grid.x(c.i_right);
        out.push_back(c);
    }
    return out;
}

double State::sup() const { return u.empty() ? 0.0 : *std::max_element(u.begin(), u.end()); }

double State::mass() const {
    double s = 0.0;
    for (double w : u) s += w;
    return s * grid.dx;
}

State init_state(const Grid1D& grid, const std::function<double(double)>& u0) {
    State s;
    s.grid = grid;
    s.u.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double w = u0(grid.x(i));
        if (!std::isfinite(w)) throw ConfigError("u0: non-finite value at x = " + std::to_string(grid.x(i)));
        if (w < 0.0) throw ConfigError("u0: negative value at x = " + std::to_string(grid.x(i)));
        s.u[i] = w;
    }
    if (grid.n < 3 || s.u.front() > 0.0 || s.u.back() > 0.0)
        throw ConfigError("u0: support must lie strictly inside the grid");
    s.fronts = find_components(grid, s.u);
    return s;
}

State init_indicator(const Grid1D& grid, double L, double height) {
    if (!(L > 0.0) || !(height > 0.0)) throw ConfigError("u0: indicator needs L > 0 and height > 0");
    const double dx = grid.dx;
    return init_state(grid, [=](double x) {
        const double d = std::abs(x) - L;
        if (d <= 0.0) return height;
        if (d >= 2.0 * dx) return 0.0;
        // One-cell linear ramp: the node at distance dx keeps half the height.
        return height * std::max(0.0, 1.0 - d / (2.0 * dx));
    });
}

void grow(State& s, std::size_t left, std::size_t right) {
    std::vector<double> u(s.u.size() + left + right, 0.0);
    std::copy(s.u.begin(), s.u.end(), u.begin() + std::ptrdiff_t(left));
    s.u = std::move(u);
    s.grid.offset -= (long long)left;
    s.grid.n = s.u.size();
    s.nz_lo = 0;
    s.nz_hi = std::size_t(-1);
    s.fronts = find_components(s.grid, s.u);
}

// ---------------------------------------------------------------------------
// Stepping

LipschitzTable::LipschitzTable(const Reaction& reaction, double u_max) {
    double level = 1.0;
    while (true) {
        levels_.push_back(level);
        values_.push_back(std::max(reaction.lipschitz(level), 1e-12));
        if (level >= u_max) break;
        level *= 2.0;
    }
}

double LipschitzTable::at(double u) const {
    const auto it = std::lower_bound(levels_.begin(), levels_.end(), u);
    if (it == levels_.end()) throw NumericError("amplitude " + std::to_string(u) + " above the tabulated range");
    return values_[std::size_t(it - levels_.begin())];
}

double stable_dt(const State& s, double m, double K, double safety) {
    const double umax = s.sup();
    const double diff = umax > 0.0 ? s.grid.dx * s.grid.dx / (2.0 * m * std::pow(umax, m - 1.0))
                                   : std::numeric_limits<double>::infinity();
    return safety * std::min(diff, 1.0 / K);
}

namespace {

/// Nodes that can change in one step: the support threshold set widened by one.
// Scans inward from the known zero-free bounds [lo, hi).
std::pair<std::size_t, std::size_t> active_range(std::span<const double> u, std::size_t lo, std::size_t hi) {
    hi = std::min(hi, u.size());
    lo = std::min(lo, hi);
    while (lo < hi && u[lo] == 0.0) ++lo;
    while (hi > lo && u[hi - 1] == 0.0) --hi;
    if (lo == hi) return {0, 0};
    return {lo > 0 ? lo - 1 : 0, std::min(u.size(), hi + 1)};
}

}  // namespace

kernels::StepStats step(State& s, const Reaction& reaction, double m, double dt, double K,
                        const StepOptions& opt, std::vector<double>& scratch) {
    const double dx = s.grid.dx;
    if (opt.grow && !s.fronts.empty()) {
        const std::size_t first = s.fronts.front().i_left;
        const std::size_t last = s.fronts.back().i_right;
        const std::size_t add_l = first < opt.margin_cells ? opt.growth_cells : 0;
        const std::size_t add_r = last + opt.margin_cells >= s.grid.n ? opt.growth_cells : 0;
        if (add_l || add_r) {
            if (s.grid.n + add_l + add_r > opt.max_cells)
                throw NumericError("grid growth beyond " + std::to_string(opt.max_cells) + " cells");
            grow(s, add_l, add_r);
        }
    }

    const auto [lo, hi] = active_range(s.u, s.nz_lo, s.nz_hi);
    double umax = 0.0;
    for (std::size_t i = lo; i < hi; ++i) umax = std::max(umax, s.u[i]);
    const double limit = opt.safety * std::min(umax > 0.0 ? dx * dx / (2.0 * m * std::pow(umax, m - 1.0))
                                                          : std::numeric_limits<double>::infinity(),
                                               1.0 / K);
    if (dt > limit * (1.0 + 1e-12))
        throw NumericError("time step " + std::to_string(dt) + " exceeds the stable bound " + std::to_string(limit));

    scratch.resize(s.u.size());
    const double r = dt / (dx * dx);
    const auto stats = opt.backend == Backend::OpenMP
                           ? kernels::explicit_step_omp(s.u, scratch, lo, hi, r, dt, m, reaction)
                           : kernels::explicit_step_serial(s.u, scratch, lo, hi, r, dt, m, reaction);
    s.u.swap(scratch);
    s.nz_lo = lo;
    s.nz_hi = hi;
    if (stats.clamp_mass > 0.0) {
        const double clamped = stats.clamp_mass * dx;
        const double mass_before = s.mass() + clamped;
        if (clamped > opt.clamp_budget * mass_before)
            throw NumericError("clamped mass " + std::to_string(clamped) + " exceeds budget at t = " +
                               std::to_string(s.t));
        s.clamp_mass += clamped;
    }
    s.t += dt;
    ++s.steps;
    // Nodes outside [lo - 1, hi] stay zero, so only the active range is scanned.
    const std::size_t a = lo > 0 ? lo - 1 : 0;
    const std::size_t b = std::min(hi + 1, s.u.size());
    s.fronts = find_components(s.grid, std::span<const double>(s.u).subspan(a, b - a));
    for (auto& c : s.fronts) {
        c.i_left += a;
        c.i_right += a;
        c.left = s.grid.x(c.i_left);
        c.right = s.grid.x(c.i_right);
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Fronts and waiting times

PressureFront pressure_front(const State& s, const Component& c, int side, double m) {
    PressureFront pf;
    double vmax = 0.0;
    for (std::size_t i = c.i_left; i <= c.i_right; ++i) vmax = std::max(vmax, s.u[i]);
    vmax = pressure_of(vmax, m);
    const double floor = 1e-3 * vmax;
    const double dx = s.grid.dx;
    if (c.i_right - c.i_left < 4) return pf;
    if (side > 0) {
        std::size_t j = c.i_right;
        while (j > c.i_left + 2 && s.v(j, m) < floor) --j;
        if (j < c.i_left + 2) return pf;
        const double d = (3.0 * s.v(j, m) - 4.0 * s.v(j - 1, m) + s.v(j - 2, m)) / (2.0 * dx);
        pf.slope = -d;
        if (!(pf.slope > 0.0)) return pf;
        pf.position = s.grid.x(j) + s.v(j, m) / pf.slope;
    } else {
        std::size_t j = c.i_left;
        while (j + 2 < c.i_right && s.v(j, m) < floor) ++j;
        if (j + 2 > c.i_right) return pf;
        const double d = (-3.0 * s.v(j, m) + 4.0 * s.v(j + 1, m) - s.v(j + 2, m)) / (2.0 * dx);
        pf.slope = d;
        if (!(pf.slope > 0.0)) return pf;
        pf.position = s.grid.x(j) - s.v(j, m) / pf.slope;
    }
    pf.valid = true;
    return pf;
}

bool front_reached(std::span<const double> u, const WaitingWatch& w, double m) {
    const std::ptrdiff_t i0 = std::ptrdiff_t(w.i0);
    const std::ptrdiff_t i1 = i0 + w.inward, i2 = i0 + 2 * w.inward;
    if (i2 < 0 || i2 >= std::ptrdiff_t(u.size())) return false;
    const double v0 = pressure_of(u[std::size_t(i0)], m);
    const double v1 = pressure_of(u[std::size_t(i1)], m);
    const double v2 = pressure_of(u[std::size_t(i2)], m);
    const double d1 = v1 - v0, d2 = v2 - v1;
    if (v0 > 0.0 && d1 <= 0.0) return true;  // x0 sits inside a flat or rising part
    return d1 > 0.0 && d2 <= 2.0 * d1;
}

// ---------------------------------------------------------------------------
// Energy

EnergyFunctional::EnergyFunctional(const Reaction& reaction, double m, double u_max) : reaction_(&reaction), m_(m) {
    const double c = m / (m - 1.0);
    h_ = (m - 1.0) * std::pow(c, 2.0 / (m - 1.0));
    const double top = std::max(1.0, u_max) * 1.0001;
    constexpr int kUniform = 4096;
    for (int i = 0; i <= kUniform; ++i) nodes_.push_back(std::min(1.0, top) * i / kUniform);
    for (double x = 1.0; x < top;) {
        x = std::min(top, x * 1.002);
        nodes_.push_back(x);
    }
    const auto& s = reaction.spec();
    for (auto kink : {s.theta, s.plateau})
        if (kink && *kink > 0.0 && *kink < top) nodes_.push_back(*kink);
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    prim_.resize(nodes_.size());
    auto w = [&](double r) { return m * std::pow(r, m - 1.0) * reaction.eval(r); };
    prim_[0] = 0.0;
    for (std::size_t k = 1; k < nodes_.size(); ++k)
        prim_[k] = prim_[k - 1] + numerics::integrate(w, nodes_[k - 1], nodes_[k], {1e-300, 1e-14, 200}).value;
}

double EnergyFunctional::potential(double u) const {
    if (u <= 0.0) return 0.0;
    if (u > nodes_.back()) throw DomainError("energy table exceeded: u = " + std::to_string(u));
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
    const std::size_t k = std::min(nodes_.size() - 1, std::size_t(it - nodes_.begin()));
    const double a = nodes_[k - 1], b = nodes_[k];
    // Cubic Hermite with the exact derivative m u^(m-1) f(u) at both nodes.
    auto d = [&](double r) { return m_ * std::pow(r, m_ - 1.0) * reaction_->eval(r); };
    const double h = b - a, t = (u - a) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h_ * (h00 * prim_[k - 1] + h10 * h * d(a) + h01 * prim_[k] + h11 * h * d(b));
}

double EnergyFunctional::operator()(const State& s) const {
    const double dx = s.grid.dx;
    double grad = 0.0, pot = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const double phi = std::pow(s.u[i], m_);
        if (i > 0) grad += (phi - prev) * (phi - prev);
        prev = phi;
        pot += potential(s.u[i]);
    }
    return 0.5 * h_ * grad / dx - pot * dx;
}

// ---------------------------------------------------------------------------
// Run driver

namespace {

void fill_certificates(Frame& f, const State& s, std::span<const double> previous, double dt, double m,
                       double rho) {
    const std::size_t n = s.u.size();
    const double dx = s.grid.dx;
    std::vector<double> v(n), vp(n);
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = pressure_of(s.u[i], m);
        vp[i] = pressure_of(previous[i], m);
        vmax = std::max(vmax, v[i]);
    }
    const double level = rho * vmax;
    f.min_vxx = std::numeric_limits<double>::infinity();
    f.vt_min = std::numeric_limits<double>::infinity();
    f.vt_max = -std::numeric_limits<double>::infinity();
    f.max_vx = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i - 1] > level && v[i] > level && v[i + 1] > level)) continue;
        f.min_vxx = std::min(f.min_vxx, (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dx * dx));
        f.max_vx = std::max(f.max_vx, std::abs(v[i + 1] - v[i - 1]) / (2.0 * dx));
        if (dt > 0.0) {
            const double vt = (v[i] - vp[i]) / dt;
            f.vt_min = std::min(f.vt_min, vt);
            f.vt_max = std::max(f.vt_max, vt);
        }
    }
}

}  // namespace

History run(State& s, const Reaction& reaction, double m, const RunOptions& opt) {
    if (std::abs(m - reaction.m()) > 1e-15) throw PreconditionError("solver m differs from the reaction's m");
    if (!(opt.t_end >= s.t)) throw ConfigError("t_end: must not precede the initial time");
    History h;
    h.m = m;
    h.dx = s.grid.dx;
    h.horizon = opt.t_end;
    for (const auto& c : s.fronts) {
        h.initial_support_edges.push_back(c.left);
        h.initial_support_edges.push_back(c.right);
    }
    const double M0 = std::max(1.0, s.sup());
    const LipschitzTable K(reaction, M0);
    std::optional<EnergyFunctional> energy;
    if (opt.energy) energy.emplace(reaction, m, M0);

    for (double x0 : opt.watch_points) {
        WaitingWatch w;
        w.x0 = x0;
        w.i0 = s.grid.index_of(x0);
        if (s.u[w.i0] > kSupportThreshold)
            throw DomainError("waiting time at x0 = " + std::to_string(x0) + " inside the initial support");
        // Inward direction: towards the nearest positive node.
        std::size_t l = w.i0, r = w.i0;
        while (l > 0 && !(s.u[l] > kSupportThreshold)) --l;
        while (r + 1 < s.u.size() && !(s.u[r] > kSupportThreshold)) ++r;
        const bool left_ok = s.u[l] > kSupportThreshold, right_ok = s.u[r] > kSupportThreshold;
        if (!left_ok && !right_ok) throw DomainError("waiting time needs nonzero initial data");
        w.inward = (right_ok && (!left_ok || r - w.i0 <= w.i0 - l)) ? 1 : -1;
        if (front_reached(s.u, w, m)) w.t_star = s.t;
        h.waiting.push_back(w);
    }

    std::vector<double> scratch, half;
    auto make_frame = [&](double dt, bool with_prev) {
        Frame f;
        f.t = s.t;
        f.step = s.steps;
        f.sup = s.sup();
        f.mass = s.mass();
        f.dt = dt;
        f.fronts = s.fronts;
        for (const auto& c : s.fronts) {
            f.left.push_back(pressure_front(s, c, -1, m));
            f.right.push_back(pressure_front(s, c, +1, m));
        }
        if (energy) f.energy = (*energy)(s);
        if (opt.certificates) fill_certificates(f, s, with_prev ? std::span<const double>(scratch) : s.u, with_prev ? dt : 0.0, m, opt.certificate_rho);
        return f;
    };

    h.frames.push_back(make_frame(0.0, false));
    double next_snapshot = s.t;
    if (opt.snapshot_every > 0.0) {
        h.snapshots.push_back(s);
        next_snapshot = s.t + opt.snapshot_every;
    }
    if (opt.observer && opt.observer(s, h.frames.back())) {
        h.stopped_early = true;
        return h;
    }

    const double eps_t = 1e-12 * std::max(1.0, opt.t_end);
    double sup = s.sup();
    while (s.t < opt.t_end - eps_t) {
        const double k = K.at(sup);
        double dt = opt.step.safety * std::min(sup > 0.0 ? s.grid.dx * s.grid.dx / (2.0 * m * std::pow(sup, m - 1.0))
                                                         : std::numeric_limits<double>::infinity(),
                                               1.0 / k);
        if (s.t + dt > opt.t_end) dt = opt.t_end - s.t;
        const std::size_t ncomp = s.fronts.size();
        const long long offset_before = s.grid.offset;
        sup = step(s, reaction, m, dt, k, opt.step, scratch).max_u;
        // Growth happens before the update, so scratch holds the previous
        // state on the current grid.
        if (s.grid.offset != offset_before)
            for (auto& w : h.waiting) w.i0 = s.grid.index_of(w.x0);
        if (s.fronts.size() < ncomp) h.merges.push_back({s.t, s.steps, ncomp, s.fronts.size()});

        for (auto& w : h.waiting) {
            if (w.t_star || !front_reached(s.u, w, m)) continue;
            // Localize to half a step by replaying the step at dt/2.
            State probe;
            probe.grid = s.grid;
            probe.u = scratch;
            probe.t = s.t - dt;
            probe.fronts = find_components(probe.grid, probe.u);
            StepOptions no_grow = opt.step;
            no_grow.grow = false;
            step(probe, reaction, m, 0.5 * dt, k, no_grow, half);
            w.t_star = front_reached(probe.u, w, m) ? s.t - 0.5 * dt : s.t;
            w.dt_at_detection = dt;
        }

        const bool last = s.t >= opt.t_end - eps_t;
        if (s.steps % opt.record_stride == 0 || last) {
            h.frames.push_back(make_frame(dt, true));
            if (opt.observer && opt.observer(s, h.frames.back())) {
                h.stopped_early = true;
                break;
            }
        }
        if (opt.snapshot_every > 0.0 && (s.t >= next_snapshot - eps_t || last)) {
            h.snapshots.push_back(s);
            next_snapshot += opt.snapshot_every;
        }
    }
    h.clamp_mass = s.clamp_mass;
    return h;
}

// ---------------------------------------------------------------------------
// Diagnostics

DarcyReport darcy_diagnostic(const History& h, std::size_t window, double t_from) {
    DarcyReport rep;
    const std::size_t half = std::max<std::size_t>(1, window / 2);
    double sum = 0.0;
    auto series = [&](bool right, std::vector<DarcySample>& out) {
        for (std::size_t k = half; k + half < h.frames.size(); ++k) {
            const Frame& a = h.frames[k - half];
            const Frame& b = h.frames[k + half];
            const Frame& c = h.frames[k];
            if (c.t < t_from || a.fronts.empty() || b.fronts.empty() || c.fronts.empty()) continue;
            const auto& pa = right ? a.right.back() : a.left.front();
            const auto& pb = right ? b.right.back() : b.left.front();
            const auto& pc = right ? c.right.back() : c.left.front();
            if (!pa.valid || !pb.valid || !pc.valid) continue;
            DarcySample d;
            d.t = c.t;
            d.speed = (right ? 1.0 : -1.0) * (pb.position - pa.position) / (b.t - a.t);
            d.gradient = pc.slope;
            // A front that has not crossed a hundredth of a cell over the window is waiting.
            if (std::abs(pb.position - pa.position) < 1e-2 * h.dx) {
                d.waiting = true;
            } else {
                d.residual = std::abs(d.speed - d.gradient) / std::abs(d.speed);
                sum += d.residual;
                ++rep.moving_samples;
            }
            out.push_back(d);
        }
    };
    series(true, rep.right);
    series(false, rep.left);
    rep.mean_residual = rep.moving_samples ? sum / double(rep.moving_samples) : 0.0;
    return rep;
}

std::optional<double> waiting_time(const History& h, double x0) {
    for (const auto& w : h.waiting)
        if (std::abs(w.x0 - x0) <= 0.5 * h.dx) return w.t_star;
    throw DomainError("no waiting-time watch registered at x0 = " + std::to_string(x0));
}

CertificateReport apriori_certificates(const History& h, double t_from, double fit_fraction, bool check_vxx) {
    CertificateReport rep;
    std::vector<const Frame*> frames;
    for (const auto& f : h.frames)
        if (f.t >= t_from && f.dt > 0.0 && std::isfinite(f.min_vxx) && std::isfinite(f.vt_min)) frames.push_back(&f);
    if (frames.size() < 20) throw PreconditionError("too few certificate frames after t = " + std::to_string(t_from));
    const double T = frames.back()->t;
    rep.fit_until = t_from + fit_fraction * (T - t_from);
    std::vector<double> ts, lo_xx, lo_t, hi_t;
    for (const auto* f : frames) {
        if (f->t > rep.fit_until) break;
        ts.push_back(f->t);
        lo_xx.push_back(f->min_vxx);
        lo_t.push_back(f->vt_min);
        hi_t.push_back(f->vt_max);
        rep.max_vx = std::max(rep.max_vx, f->max_vx);
    }
    if (ts.size() < 3) throw PreconditionError("fit window holds fewer than three frames");
    // Lower envelopes a - C t with C >= 0 (the bound grows linearly in t);
    // upper envelope a + C t with C >= 0. Slopes from least squares, then
    // the intercept is lowered/raised until the whole fit window is covered.
    auto lower = [&](const std::vector<double>& y) {
        const double slope = std::min(0.0, numerics::fit_line(ts, y).slope);
        double a = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ts.size(); ++i) a = std::min(a, y[i] - slope * ts[i]);
        return Envelope{a, slope};
    };
    auto upper = [&](const std::vector<double>& y) {
        const double slope = std::max(0.0, numerics::fit_line(ts, y).slope);
        double a = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ts.size(); ++i) a = std::max(a, y[i] - slope * ts[i]);
        return Envelope{a, slope};
    };
    rep.vxx_lower = lower(lo_xx);
    rep.vt_lower = lower(lo_t);
    rep.vt_upper = upper(hi_t);
    for (const auto* f : frames) {
        if (f->t <= rep.fit_until) continue;
        rep.max_vx = std::max(rep.max_vx, f->max_vx);
        if (check_vxx && rep.vxx_ok && f->min_vxx < rep.vxx_lower.at(f->t)) {
            rep.vxx_ok = false;
            rep.violation = "min v_xx = " + std::to_string(f->min_vxx) + " below " +
                            std::to_string(rep.vxx_lower.at(f->t)) + " at t = " + std::to_string(f->t);
        }
        if (rep.vt_ok && (f->vt_min < rep.vt_lower.at(f->t) || f->vt_max > rep.vt_upper.at(f->t))) {
            rep.vt_ok = false;
            rep.violation = "v_t range [" + std::to_string(f->vt_min) + ", " + std::to_string(f->vt_max) +
                            "] outside [" + std::to_string(rep.vt_lower.at(f->t)) + ", " +
                            std::to_string(rep.vt_upper.at(f->t)) + "] at t = " + std::to_string(f->t);
        }
    }
    return rep;
}

EnergyCheck energy_check(const History& h, double tol) {
    EnergyCheck out;
    const Frame* prev = nullptr;
    for (const auto& f : h.frames) {
        if (!f.energy) continue;
        if (prev) {
            const double steps = double(std::max<std::size_t>(1, f.step - prev->step));
            const double inc = (*f.energy - *prev->energy) / steps;
            if (inc > out.worst_increase_per_step) {
                out.worst_increase_per_step = inc;
                out.worst_t = f.t;
            }
            if (inc > tol) out.nonincreasing = false;
        }
        prev = &f;
    }
    return out;
}

IntersectionCount intersection_count(const State& a, const State& b, double threshold, bool closure) {
    if (!(a.grid == b.grid)) throw DomainError("intersection count needs a shared grid");
    if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t)))
        throw DomainError("intersection count needs states at the same time");
    const std::size_t n = a.u.size();
    auto common = [&](std::size_t i) { return a.u[i] > threshold && b.u[i] > threshold; };
    // With `closure`, each common component also takes its two neighbours,
    // where one solution has reached zero and the other has not.
    auto member = [&](std::size_t i) {
        if (common(i)) return true;
        if (!closure || !(a.u[i] > threshold || b.u[i] > threshold)) return false;
        return (i > 0 && common(i - 1)) || (i + 1 < n && common(i + 1));
    };
    IntersectionCount out;
    bool any_common = false, all_equal = true;
    int last_sign = 0;
    bool in_set = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!member(i)) {
            in_set = false;
            last_sign = 0;
            continue;
        }
        if (!in_set) ++out.common_components;
        in_set = true;
        any_common = true;
        const double d = a.u[i] - b.u[i];
        const int sg = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (sg != 0) all_equal = false;
        // Runs of exact zeros are skipped so that they count once.
        if (sg == 0) continue;
        if (last_sign != 0 && sg != last_sign) ++out.count;
        last_sign = sg;
    }
    out.tangent = any_common && all_equal;
    return out;
}

std::vector<double> pressure_field(const State& s, double m) {
    std::vector<double> v(s.u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = pressure_of(s.u[i], m);
    return v;
}

}  // namespace rpme
