#include "rpme/stationary.hpp"

#include "rpme/error.hpp"
#include "rpme/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rpme {

std::string_view to_string(ProfileFamily family) {
    switch (family) {
        case ProfileFamily::ConstantA: return "constant";
        case ProfileFamily::FrontB: return "front";
        case ProfileFamily::UnboundedC: return "unbounded";
        case ProfileFamily::CompactD: return "bump";
        case ProfileFamily::PeriodicE: return "periodic";
        case ProfileFamily::GroundStateF: return "ground";
    }
    return "unknown";
}

std::string_view to_string(CauchyStationarity verdict) {
    switch (verdict) {
        case CauchyStationarity::Stationary: return "stationary";
        case CauchyStationarity::NotStationary: return "not_stationary";
        case CauchyStationarity::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Phase orbit

PhaseOrbit::PhaseOrbit(const Reaction& reaction, double m, double C, double q_lo, double q_hi)
    : reaction_(&reaction), m_(m), C_(C), q_lo_(q_lo), q_hi_(q_hi) {}

double PhaseOrbit::p_of_q(double q, int sign) const {
    const double rad = C_ - 2.0 * m_ * reaction_->weighted_primitive(q);
    if (rad < -1e-14 * (1.0 + std::abs(C_))) throw DomainError("orbit does not reach q = " + std::to_string(q));
    return (sign < 0 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, rad));
}

double PhaseOrbit::first_integral_residual(double q, double p) const {
    return std::abs(p * p + 2.0 * m_ * reaction_->weighted_primitive(q) - C_);
}

// ---------------------------------------------------------------------------
// Orbit tables

namespace {

constexpr numerics::QuadOptions kTight{1e-300, 1e-13, 4000};

/// J(q) = int_q^{q_top} r^(m-1) f(r) dr on a q grid clustered at both ends,
/// evaluated from whichever end avoids cancellation.
class Orbit {
public:
    Orbit(const Reaction& r, double m, double q_top, double ctop, double q_min, double q_max)
        : r_(r), m_(m), q_top_(q_top), ctop_(ctop) {
        constexpr int kPerSide = 1200;
        const double lo_dec = std::log10(q_top / q_min / 2.0);
        for (int i = 0; i <= kPerSide; ++i) {
            const double e = lo_dec * (1.0 - double(i) / kPerSide);
            q_.push_back(0.5 * q_top * std::pow(10.0, -e));
        }
        const double hi_dec = std::log10(0.5 * q_top / (q_top - q_max));
        for (int i = 1; i <= kPerSide; ++i) {
            const double e = hi_dec * double(i) / kPerSide;
            q_.push_back(q_top * (1.0 - 0.5 * std::pow(10.0, -e)));
        }
        const auto& s = r.spec();
        for (auto kink : {s.theta, s.plateau}) {
            if (kink && *kink > q_.front() && *kink < q_.back()) q_.push_back(*kink);
        }
        std::sort(q_.begin(), q_.end());
        q_.erase(std::unique(q_.begin(), q_.end()), q_.end());

        auto w = [this](double q) { return std::pow(q, m_ - 1.0) * r_.eval(q); };
        I_.resize(q_.size());
        I_[0] = numerics::integrate(w, 0.0, q_[0], kTight).value;
        for (std::size_t k = 1; k < q_.size(); ++k)
            I_[k] = I_[k - 1] + numerics::integrate(w, q_[k - 1], q_[k], kTight).value;
        T_.resize(q_.size());
        T_.back() = numerics::integrate(w, q_.back(), q_top_, kTight).value;
        for (std::size_t k = q_.size() - 1; k-- > 0;)
            T_[k] = T_[k + 1] + numerics::integrate(w, q_[k], q_[k + 1], kTight).value;
    }

    const std::vector<double>& grid() const { return q_; }
    double m() const { return m_; }
    double q_top() const { return q_top_; }

    double J(double q) const {
        auto w = [this](double r) { return std::pow(r, m_ - 1.0) * r_.eval(r); };
        if (q <= q_.front()) return ctop_ - numerics::integrate(w, 0.0, q, kTight).value;
        if (q >= q_.back()) return numerics::integrate(w, q, q_top_, kTight).value;
        const auto it = std::upper_bound(q_.begin(), q_.end(), q);
        const std::size_t k = std::size_t(it - q_.begin()) - 1;
        if (q < 0.5 * q_top_) return ctop_ - (I_[k] + numerics::integrate(w, q_[k], q, kTight).value);
        return T_[k + 1] + numerics::integrate(w, q, q_[k + 1], kTight).value;
    }

    /// dx/dq = m q^(m-1) / sqrt(2m J(q)).
    double dxdq(double q) const {
        const double j = J(q);
        if (!(j > 0.0)) return std::numeric_limits<double>::infinity();
        return m_ * std::pow(q, m_ - 1.0) / std::sqrt(2.0 * m_ * j);
    }

    /// Integral of dx/dq over [a, b] with a 1/sqrt singularity at b = q_top.
    double top_piece(double a) const {
        // Near the turning point J ~ j1 (q_top - q); use that once q_top - t rounds.
        const double j1 = std::pow(q_top_, m_ - 1.0) * r_.eval(q_top_);
        auto g = [&](double t) {
            if (t < 1e-9 * q_top_ && j1 > 0.0)
                return m_ * std::pow(q_top_ - t, m_ - 1.0) / std::sqrt(2.0 * m_ * j1 * t);
            return dxdq(q_top_ - t);
        };
        return numerics::integrate_left_singular(g, 0.0, q_top_ - a, 2.0, {1e-300, 1e-11, 4000}).value;
    }
    /// Integral over [0, b] with an integrable power singularity at 0.
    double bottom_piece(double b, double k) const {
        return numerics::integrate_left_singular([&](double q) { return dxdq(q); }, 0.0, b, k,
                                                 {1e-300, 1e-11, 4000})
            .value;
    }
    double segment(double a, double b) const {
        return numerics::integrate([&](double q) { return dxdq(q); }, a, b, {1e-300, 1e-11, 4000}).value;
    }

private:
    const Reaction& r_;
    double m_, q_top_, ctop_;
    std::vector<double> q_, I_, T_;
};

/// Cumulative distance d(q) measured from the bottom of the table.
struct DistanceTable {
    std::vector<double> q, d;
    double total = 0.0;  // distance to q_top (or to the last grid point if not singular)
    double q_top = 0.0;
    bool top_turning = false;

    /// q at distance s from the bottom.
    double q_at(double s) const {
        if (s <= 0.0) return q.front() * (d.front() > 0 ? std::max(0.0, s) / d.front() : 0.0);
        if (s >= total) return top_turning ? q_top : q.back();
        if (s >= d.back()) {
            // Quadratic approach to the turning point.
            const double c = (q_top - q.back()) / std::pow(total - d.back(), 2);
            return q_top - c * std::pow(total - s, 2);
        }
        if (s < d.front()) {
            // Below the first grid point: power law through the origin.
            const double e = std::log(q[1] / q[0]) / std::log(d[1] / d[0]);
            return q[0] * std::pow(s / d[0], e);
        }
        const auto it = std::upper_bound(d.begin(), d.end(), s);
        const std::size_t k = std::size_t(it - d.begin()) - 1;
        if (d[k] > 0 && q[k] > 0) {
            const double t = std::log(s / d[k]) / std::log(d[k + 1] / d[k]);
            return q[k] * std::pow(q[k + 1] / q[k], t);
        }
        const double t = (s - d[k]) / (d[k + 1] - d[k]);
        return q[k] + t * (q[k + 1] - q[k]);
    }
};

/// bottom_k: substitution exponent for the segment [0, q_min]; 0 means the
/// table starts at q_min (distance 0 there).
DistanceTable build_distances(const Orbit& orbit, double bottom_k, bool top_turning) {
    DistanceTable t;
    t.q = orbit.grid();
    t.q_top = orbit.q_top();
    t.top_turning = top_turning;
    t.d.resize(t.q.size());
    t.d[0] = bottom_k > 0 ? orbit.bottom_piece(t.q[0], bottom_k) : 0.0;
    for (std::size_t k = 1; k < t.q.size(); ++k) t.d[k] = t.d[k - 1] + orbit.segment(t.q[k - 1], t.q[k]);
    t.total = top_turning ? t.d.back() + orbit.top_piece(t.q.back()) : t.d.back();
    return t;
}

/// Symmetric profile with support [-half, half] from a table whose bottom is the edge.
void sample_symmetric(StationaryProfile& p, const DistanceTable& t) {
    const double half = t.total;
    std::vector<std::pair<double, double>> pts;
    constexpr int kUniform = 4096;
    for (int j = 0; j < kUniform; ++j) {
        const double x = -half + 2.0 * half * j / (kUniform - 1);
        pts.emplace_back(x, t.q_at(half - std::abs(x)));
    }
    const double dmin = std::max(10.0 * t.d.front(), 1e-8 * half);
    const double dmax = 1e-2 * half;
    if (dmin < dmax) {
        constexpr int kEdge = 64;
        for (int i = 0; i < kEdge; ++i) {
            const double d = dmax * std::pow(dmin / dmax, double(i) / (kEdge - 1));
            const double u = t.q_at(d);
            pts.emplace_back(-half + d, u);
            pts.emplace_back(half - d, u);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              pts.end());
    p.x.clear();
    p.U.clear();
    for (const auto& [x, u] : pts) {
        p.x.push_back(x);
        p.U.push_back(u);
    }
    p.left_edge = -half;
    p.right_edge = half;
}

void require_kind(const Reaction& r, std::initializer_list<ReactionKind> kinds, const char* what) {
    for (auto k : kinds)
        if (r.kind() == k) return;
    throw PreconditionError(std::string(what) + " is not defined for a " + std::string(to_string(r.kind())) +
                            " reaction");
}

struct Decay {
    double alpha, lambda;
};

Decay declared_decay(const Reaction& r) {
    const auto& s = r.spec();
    const double alpha = s.alpha.value_or(1.0);
    const double lambda = s.lambda.value_or(-r.derivative(0.0));
    if (!(lambda > 0.0)) throw PreconditionError("decay rate lambda must be positive");
    const double mismatch = r.decay_mismatch(alpha, lambda);
    if (mismatch > 0.1) {
        throw PreconditionError("declared decay (alpha = " + std::to_string(alpha) + ", lambda = " +
                                std::to_string(lambda) + ") deviates from f near 0 by " +
                                std::to_string(100.0 * mismatch) + "%");
    }
    return {alpha, lambda};
}

}  // namespace

// ---------------------------------------------------------------------------
// Profile evaluation

bool StationaryProfile::compact() const noexcept {
    return family == ProfileFamily::CompactD ||
           (family == ProfileFamily::GroundStateF && !truncated && L && std::isfinite(*L)) ||
           (family == ProfileFamily::ConstantA && !U.empty() && U.front() == 0.0);
}

double StationaryProfile::base_eval(double xx) const {
    if (x.empty() || xx < x.front() || xx > x.back()) return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), xx);
    if (it == x.end()) return U.back();
    const std::size_t k = std::size_t(it - x.begin());
    if (k == 0) return U.front();
    const double t = (xx - x[k - 1]) / (x[k] - x[k - 1]);
    return U[k - 1] + t * (U[k] - U[k - 1]);
}

double StationaryProfile::eval(double xx) const {
    double s = 0.0;
    for (double z : shifts) s += base_eval(xx - z);
    return s;
}

double StationaryProfile::support_left() const {
    return left_edge + *std::min_element(shifts.begin(), shifts.end());
}

double StationaryProfile::support_right() const {
    return right_edge + *std::max_element(shifts.begin(), shifts.end());
}

std::vector<std::pair<double, double>> StationaryProfile::samples() const {
    std::vector<std::pair<double, double>> out;
    for (double z : shifts)
        for (std::size_t i = 0; i < x.size(); ++i) out.emplace_back(x[i] + z, U[i]);
    std::sort(out.begin(), out.end());
    // Touching copies share an edge point; keep one sample per abscissa.
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Compact bumps

namespace {

void check_bump_admissible(const Reaction& r, double m, double q0) {
    require_kind(r, {ReactionKind::Monostable, ReactionKind::Bistable, ReactionKind::Combustion,
                     ReactionKind::Custom},
                 "compact bump");
    if (!(q0 > 0.0 && q0 < 1.0)) throw PreconditionError("bump height q0 must lie in (0, 1)");
    const double Iq0 = r.weighted_primitive(q0);
    const double lo = r.kind() == ReactionKind::Combustion ? r.theta()
                      : r.kind() == ReactionKind::Bistable ? *special_levels(r, m).theta1
                                                           : 0.0;
    // The orbit through (q0, 0) must reach p^2 = C > 0 at q = 0 without
    // touching the q axis in between.
    for (int i = 0; i < 400; ++i) {
        const double q = q0 * i / 400.0;
        if (!(Iq0 - r.weighted_primitive(q) > 0.0)) {
            throw PreconditionError("q0 = " + std::to_string(q0) + " outside the admissible band (" +
                                    std::to_string(lo) + ", 1): the orbit does not return to the p axis");
        }
    }
}

}  // namespace

double bump_half_width(const Reaction& reaction, double m, double q0) {
    check_bump_admissible(reaction, m, q0);
    const double ctop = reaction.weighted_primitive(q0);
    auto w = [&](double r) { return std::pow(r, m - 1.0) * reaction.eval(r); };
    auto dxdq = [&](double q) {
        const double j = numerics::integrate(w, q, q0, kTight).value;
        return m * std::pow(q, m - 1.0) / std::sqrt(2.0 * m * j);
    };
    (void)ctop;
    const double mid = 0.5 * q0;
    const double lower = numerics::integrate(dxdq, 0.0, mid, {1e-300, 1e-12, 4000}).value;
    auto g = [&](double t) { return dxdq(q0 - t); };
    const double upper = numerics::integrate_left_singular(g, 0.0, q0 - mid, 2.0, {1e-300, 1e-12, 4000}).value;
    return lower + upper;
}

StationaryProfile compact_bump(const Reaction& reaction, double m, double q0) {
    check_bump_admissible(reaction, m, q0);
    const double ctop = reaction.weighted_primitive(q0);
    Orbit orbit(reaction, m, q0, ctop, q0 * 1e-12, q0 * (1.0 - 0.5e-12));
    // dx/dq ~ q^(m-1) at the edge: regular for m >= 1, so k = 1 is enough.
    const auto table = build_distances(orbit, 1.0, true);
    StationaryProfile p;
    p.family = ProfileFamily::CompactD;
    p.m = m;
    p.q0 = q0;
    p.L0 = table.total;
    sample_symmetric(p, table);
    p.cauchy = cauchy_stationarity_test(p, m);
    return p;
}

WidthHeightCurve width_height_curve(const Reaction& reaction, double m, const std::vector<double>& q0_grid) {
    require_kind(reaction, {ReactionKind::Monostable}, "width-height curve");
    WidthHeightCurve out;
    out.hypothesis_holds = true;
    for (int i = 1; i < 50 && out.hypothesis_holds; ++i) {
        const double rho = i / 50.0;
        for (int j = 1; j < 50; ++j) {
            const double u = j / 50.0;
            if (!(reaction.eval(rho * u) > std::pow(rho, m) * reaction.eval(u))) {
                out.hypothesis_holds = false;
                break;
            }
        }
    }
    for (double q0 : q0_grid) out.points.emplace_back(q0, bump_half_width(reaction, m, q0));
    out.strictly_increasing = true;
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        if ((out.points[i].first > out.points[i - 1].first) != (out.points[i].second > out.points[i - 1].second))
            out.strictly_increasing = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ground states

double ground_state_half_width(const Reaction& reaction, double m) {
    require_kind(reaction, {ReactionKind::Bistable}, "ground state");
    const Decay dec = declared_decay(reaction);
    if (dec.alpha >= m) return std::numeric_limits<double>::infinity();
    const double theta1 = *special_levels(reaction, m).theta1;
    auto w = [&](double r) { return std::pow(r, m - 1.0) * reaction.eval(r); };
    // J(q) = -I(q) below the midpoint and int_q^theta1 above it.
    const double mid = 0.5 * theta1;
    auto dxdq_low = [&](double q) {
        const double j = -numerics::integrate(w, 0.0, q, kTight).value;
        return m * std::pow(q, m - 1.0) / std::sqrt(2.0 * m * j);
    };
    auto dxdq_high = [&](double q) {
        const double j = numerics::integrate(w, q, theta1, kTight).value;
        return m * std::pow(q, m - 1.0) / std::sqrt(2.0 * m * j);
    };
    // dx/dq ~ q^((m-alpha)/2 - 1) at 0.
    const double k = std::ceil(2.0 / (m - dec.alpha)) + 1.0;
    const double lower = numerics::integrate_left_singular(dxdq_low, 0.0, mid, k, {1e-300, 1e-12, 4000}).value;
    auto g = [&](double t) { return dxdq_high(theta1 - t); };
    const double upper = numerics::integrate_left_singular(g, 0.0, theta1 - mid, 2.0, {1e-300, 1e-12, 4000}).value;
    return lower + upper;
}

StationaryProfile ground_state(const Reaction& reaction, double m) {
    require_kind(reaction, {ReactionKind::Bistable}, "ground state");
    const Decay dec = declared_decay(reaction);
    const double theta1 = *special_levels(reaction, m).theta1;
    StationaryProfile p;
    p.family = ProfileFamily::GroundStateF;
    p.m = m;
    p.q0 = theta1;
    if (dec.alpha >= m) {
        // Type I: positive on R; cut where U < 1e-8.
        Orbit orbit(reaction, m, theta1, 0.0, 1e-8, theta1 * (1.0 - 0.5e-12));
        const auto table = build_distances(orbit, 0.0, true);
        p.L = std::numeric_limits<double>::infinity();
        p.truncated = true;
        sample_symmetric(p, table);
        p.cauchy = CauchyStationarity::Stationary;
        return p;
    }
    Orbit orbit(reaction, m, theta1, 0.0, theta1 * 1e-12, theta1 * (1.0 - 0.5e-12));
    const double k = std::ceil(2.0 / (m - dec.alpha)) + 1.0;
    const auto table = build_distances(orbit, k, true);
    p.L = table.total;
    sample_symmetric(p, table);
    DecayData d;
    d.alpha = dec.alpha;
    d.lambda = dec.lambda;
    d.exponent = 2.0 / (m - dec.alpha);
    d.A1 = std::pow((m - dec.alpha) / (2.0 * m), 2.0 / (m - dec.alpha)) *
           std::pow(2.0 * m * dec.lambda / (m + dec.alpha), 1.0 / (m - dec.alpha));
    d.pressure_amplitude = m / (m - 1.0) * std::pow(d.A1, m - 1.0);
    p.decay = d;
    p.cauchy = cauchy_stationarity_test(p, m);
    return p;
}

StationaryProfile stationary_front(const Reaction& reaction, double m) {
    require_kind(reaction, {ReactionKind::Monostable}, "stationary front");
    const double ctop = reaction.weighted_primitive(1.0);
    Orbit orbit(reaction, m, 1.0, ctop, 1e-12, 1.0 - 1e-8);
    const auto table = build_distances(orbit, 1.0, false);
    StationaryProfile p;
    p.family = ProfileFamily::FrontB;
    p.m = m;
    p.truncated = true;
    const double X = table.total;
    std::vector<std::pair<double, double>> pts;
    constexpr int kUniform = 4096;
    for (int j = 0; j < kUniform; ++j) {
        const double s = X * j / (kUniform - 1);
        pts.emplace_back(-s, table.q_at(s));
    }
    for (int i = 0; i < 64; ++i) {
        const double s = 1e-2 * X * std::pow(1e-6, i / 63.0);
        pts.emplace_back(-s, table.q_at(s));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              pts.end());
    for (const auto& [x, u] : pts) {
        p.x.push_back(x);
        p.U.push_back(u);
    }
    p.left_edge = -X;
    p.right_edge = 0.0;
    p.cauchy = CauchyStationarity::NotStationary;
    return p;
}

StationaryProfile zero_profile(double m) {
    StationaryProfile p;
    p.family = ProfileFamily::ConstantA;
    p.m = m;
    p.x = {-1.0, 1.0};
    p.U = {0.0, 0.0};
    p.left_edge = -1.0;
    p.right_edge = 1.0;
    p.cauchy = CauchyStationarity::Stationary;
    return p;
}

// ---------------------------------------------------------------------------
// Edge tests

namespace {

/// (distance, value) pairs within `window` of an edge, ascending distance.
std::vector<std::pair<double, double>> edge_samples(const StationaryProfile& p, bool left, double window) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        const double d = left ? p.x[i] - p.left_edge : p.right_edge - p.x[i];
        if (d > 0.0 && d <= window && p.U[i] > 0.0) out.emplace_back(d, p.U[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double last_decade_slope(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) throw PreconditionError("too few edge samples for an exponent fit");
    const double dmin = pts.front().first;
    std::vector<double> lx, ly;
    for (const auto& [d, v] : pts) {
        if (d > 10.0 * dmin) break;
        lx.push_back(std::log(d));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 3) throw PreconditionError("too few samples in the last decade before the edge");
    return numerics::fit_line(lx, ly).slope;
}

}  // namespace

double density_edge_exponent(const StationaryProfile& profile) {
    const double width = profile.right_edge - profile.left_edge;
    return last_decade_slope(edge_samples(profile, true, 0.01 * width));
}

double pressure_edge_exponent(const StationaryProfile& profile, double m) {
    const double width = profile.right_edge - profile.left_edge;
    auto pts = edge_samples(profile, true, 0.01 * width);
    for (auto& [d, v] : pts) v = pressure_of(v, m);
    return last_decade_slope(pts);
}

CauchyStationarity cauchy_stationarity_test(const StationaryProfile& profile, double m) {
    if (std::all_of(profile.U.begin(), profile.U.end(), [](double u) { return u == 0.0; }))
        return CauchyStationarity::Stationary;
    if (profile.truncated) throw PreconditionError("stationarity test needs a compactly supported profile");
    const double width = profile.right_edge - profile.left_edge;
    CauchyStationarity verdict = CauchyStationarity::Stationary;
    for (bool left : {true, false}) {
        auto pts = edge_samples(profile, left, 0.01 * width);
        if (pts.size() < 10)
            throw PreconditionError("insufficient resolution: " + std::to_string(pts.size()) +
                                    " samples within 1% of an edge (need 10)");
        for (auto& [d, v] : pts) v = pressure_of(v, m);
        const double gamma = last_decade_slope(pts);
        // Quadratic dominance is sufficient, a nonzero one-sided slope rules it out.
        CauchyStationarity here = gamma >= 1.95   ? CauchyStationarity::Stationary
                                  : gamma <= 1.05 ? CauchyStationarity::NotStationary
                                                  : CauchyStationarity::Indeterminate;
        if (here == CauchyStationarity::NotStationary) return here;
        if (here == CauchyStationarity::Indeterminate) verdict = here;
    }
    return verdict;
}

StationaryProfile assemble_multibump(const StationaryProfile& base, const std::vector<double>& shifts) {
    if (base.family != ProfileFamily::GroundStateF || !base.L || !std::isfinite(*base.L))
        throw PreconditionError("multibump needs a Type II ground state");
    if (shifts.empty()) throw PreconditionError("multibump needs at least one shift");
    const double L = *base.L;
    for (std::size_t i = 1; i < shifts.size(); ++i) {
        if (shifts[i] - shifts[i - 1] < 2.0 * L * (1.0 - 1e-12)) {
            throw PreconditionError("shifts " + std::to_string(shifts[i - 1]) + " and " +
                                    std::to_string(shifts[i]) + " are closer than 2L = " +
                                    std::to_string(2.0 * L));
        }
    }
    StationaryProfile p = base;
    p.shifts = shifts;
    return p;
}

}  // namespace rpme
