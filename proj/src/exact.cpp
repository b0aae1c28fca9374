#include "rpme/exact.hpp"

#include "rpme/error.hpp"
#include "rpme/numerics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace rpme {

namespace {

constexpr std::array<std::pair<BarrierKind, std::string_view>, 8> kBarrierNames = {{
    {BarrierKind::ZKB, "zkb"},
    {BarrierKind::SupersolZKBForm, "supersol_zkb"},
    {BarrierKind::SubsolZKBForm, "subsol_zkb"},
    {BarrierKind::SineSubsol, "sine_subsol"},
    {BarrierKind::ParabolicSupersol, "parabolic_supersol"},
    {BarrierKind::ParabolicSubsol, "parabolic_subsol"},
    {BarrierKind::VanishingHomogeneous, "vanishing_homogeneous"},
    {BarrierKind::VanishingTail, "vanishing_tail"},
}};

long double pos_pow(long double base, long double e) {
    return base > 0.0L ? std::pow(base, e) : 0.0L;
}

}  // namespace

std::string_view to_string(BarrierKind kind) {
    for (const auto& [k, n] : kBarrierNames)
        if (k == kind) return n;
    return "unknown";
}

std::string_view to_string(ResidualSign sign) {
    switch (sign) {
        case ResidualSign::SubNegative: return "sub_negative";
        case ResidualSign::SuperPositive: return "super_positive";
        case ResidualSign::ExactZero: return "exact_zero";
    }
    return "unknown";
}

BarrierKind barrier_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kBarrierNames)
        if (n == name) return k;
    throw ConfigError("unknown barrier kind '" + std::string(name) + "'");
}

double BarrierSolution::eval(double x, double t) const {
    return static_cast<double>(value(x, t));
}

double BarrierSolution::param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw PreconditionError("barrier has no parameter '" + name + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Residual certificate

namespace {

struct Derivs {
    long double w, wt, wx, wxx, phixx;
};

// Steps are h scaled down when the region is narrower than one unit.
Derivs differentiate(const BarrierSolution& b, long double x, long double t, long double hx0,
                     long double ht0) {
    const long double m = b.m;
    auto f = [&](long double xx, long double tt) { return b.value(xx, tt); };
    auto once = [&](long double scale) {
        const long double hh = hx0 * scale;
        const long double ht = ht0 * scale;
        Derivs d{};
        const long double w = f(x, t);
        const long double wl = f(x - hh, t), wr = f(x + hh, t);
        d.w = w;
        d.wt = (f(x, t + ht) - f(x, t - ht)) / (2 * ht);
        d.wx = (wr - wl) / (2 * hh);
        d.wxx = (wr - 2 * w + wl) / (hh * hh);
        d.phixx = (std::pow(wr, m) - 2 * std::pow(w, m) + std::pow(wl, m)) / (hh * hh);
        return d;
    };
    const Derivs a = once(1.0L);
    const Derivs c = once(0.5L);
    auto rich = [](long double coarse, long double fine) { return (4 * fine - coarse) / 3; };
    return {a.w, rich(a.wt, c.wt), rich(a.wx, c.wx), rich(a.wxx, c.wxx), rich(a.phixx, c.phixx)};
}

}  // namespace

ResidualReport certify_residual(const BarrierSolution& barrier, int nx, int nt, double rel_tol,
                                std::optional<unsigned> random_seed,
                                const std::function<double(double)>* source_override) {
    const auto& source = source_override ? *source_override : barrier.source;
    if (!barrier.value || !barrier.support || !source)
        throw PreconditionError("barrier is missing value, support or source");
    const double t_lo = barrier.t_min;
    const double t_hi = std::isinf(barrier.t_max) ? barrier.t_min + 2.0 : barrier.t_max;
    constexpr long double h = 1e-5L;

    std::mt19937_64 rng(random_seed.value_or(0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ResidualReport report;
    const int total = nx * nt;
    for (int k = 0; k < total; ++k) {
        double ft, fx;
        if (random_seed) {
            ft = unit(rng);
            fx = unit(rng);
        } else {
            ft = (k / nx + 0.5) / nt;
            fx = (k % nx + 0.5) / nx;
        }
        // Stay 5% inside the region so the stencil does not straddle an edge.
        const double t = t_lo + (t_hi - t_lo) * (0.05 + 0.9 * ft);
        const auto [a, b] = barrier.support(t);
        const double x = a + (b - a) * (0.05 + 0.9 * fx);
        const long double hx = h * std::min(1.0, b - a);
        const long double ht = h * std::min(1.0, t_hi - t_lo);
        const Derivs d = differentiate(barrier, x, t, hx, ht);
        const double w = static_cast<double>(d.w);
        const double src = source(w);
        long double res, mag;
        if (barrier.variable == BarrierVariable::Density) {
            res = d.wt - d.phixx - src;
            mag = std::abs(d.wt) + std::abs(d.phixx) + std::abs(src);
        } else {
            const long double diff = (barrier.m - 1) * d.w * d.wxx;
            const long double grad = d.wx * d.wx;
            res = d.wt - diff - grad - src;
            mag = std::abs(d.wt) + std::abs(diff) + grad + std::abs(src);
        }
        ResidualSample s{x, t, static_cast<double>(res), static_cast<double>(mag), true};
        const double slack = rel_tol * s.magnitude + 1e-300;
        double adverse = 0.0;
        switch (barrier.residual_sign) {
            case ResidualSign::SubNegative:
                s.ok = s.residual <= slack;
                adverse = s.residual;
                break;
            case ResidualSign::SuperPositive:
                s.ok = s.residual >= -slack;
                adverse = -s.residual;
                break;
            case ResidualSign::ExactZero:
                s.ok = std::abs(s.residual) <= slack;
                adverse = std::abs(s.residual);
                break;
        }
        if (s.magnitude > 0) report.worst_relative = std::max(report.worst_relative, adverse / s.magnitude);
        report.passed = report.passed && s.ok;
        report.samples.push_back(s);
    }
    return report;
}

// ---------------------------------------------------------------------------
// ZKB

double zkb_profile(double m, double C, double x, double s) {
    if (!(s > 0.0)) throw DomainError("ZKB profile needs s > 0");
    const double bracket = C - (m - 1.0) * x * x / (2.0 * m * (m + 1.0) * std::pow(s, 2.0 / (m + 1.0)));
    return bracket > 0.0 ? std::pow(s, -1.0 / (m + 1.0)) * std::pow(bracket, 1.0 / (m - 1.0)) : 0.0;
}

double zkb_edge(double m, double C, double s) {
    return std::pow(s, 1.0 / (m + 1.0)) * std::sqrt(2.0 * m * (m + 1.0) * C / (m - 1.0));
}

BarrierSolution zkb_barrier(double m, double C) {
    BarrierSolution b;
    b.kind = BarrierKind::ZKB;
    b.variable = BarrierVariable::Density;
    b.residual_sign = ResidualSign::ExactZero;
    b.m = m;
    b.params = {{"C", C}, {"m", m}};
    b.valid_region = "s > 0, |x| < edge(s)";
    b.t_min = 0.5;
    b.t_max = 4.0;
    b.value = [m, C](long double x, long double s) -> long double {
        const long double M = m;
        const long double br = C - (M - 1) * x * x / (2 * M * (M + 1) * std::pow(s, 2 / (M + 1)));
        return std::pow(s, -1 / (M + 1)) * pos_pow(br, 1 / (M - 1));
    };
    b.support = [m, C](double s) {
        const double e = zkb_edge(m, C, s);
        return std::pair{-e, e};
    };
    b.source = [](double) { return 0.0; };
    return b;
}

// ---------------------------------------------------------------------------
// ZKB-form barriers with linear growth

BarrierSolution supersolution_envelope(double m, double K, double u0_sup, double b) {
    if (!(K > 0.0) || !(b > 0.0)) throw PreconditionError("envelope needs K > 0 and b > 0");
    const double beta = 1.0 / (m - 1.0);
    const double A = std::pow(4.0 * m * beta, -beta);
    const double C1 = std::pow(u0_sup / (A * std::exp(K)), 1.0 / beta) + b * b * std::exp(-(m - 1.0) * K);
    BarrierSolution s;
    s.kind = BarrierKind::SupersolZKBForm;
    s.variable = BarrierVariable::Density;
    s.residual_sign = ResidualSign::SuperPositive;
    s.m = m;
    s.params = {{"A", A}, {"beta", beta}, {"C1", C1}, {"K", K}, {"b", b}, {"m", m}, {"u0_sup", u0_sup}};
    s.valid_region = "t >= 0, |x| < s(t)";
    s.t_min = 0.0;
    s.value = [=](long double x, long double t) -> long double {
        const long double M = m, KK = K;
        const long double g = (t + 1) * std::exp((M - 1) * KK * (t + 1));
        return A * std::exp(KK * (t + 1)) * pos_pow(C1 - x * x / g, beta);
    };
    s.support = [=](double t) {
        const double r = std::sqrt(C1 * (t + 1.0)) * std::exp((m - 1.0) * K * (t + 1.0) / 2.0);
        return std::pair{-r, r};
    };
    s.source = [K](double u) { return K * u; };
    return s;
}

double envelope_radius(const BarrierSolution& envelope, double t) {
    return envelope.support(t).second;
}

BarrierSolution zkb_like_subsolution(double m, double K, double C, double x0) {
    const double beta = 1.0 / (m - 1.0);
    BarrierSolution s;
    s.kind = BarrierKind::SubsolZKBForm;
    s.variable = BarrierVariable::Density;
    s.residual_sign = ResidualSign::SubNegative;
    s.m = m;
    s.params = {{"beta", beta}, {"C", C}, {"K", K}, {"m", m}, {"x0", x0}};
    s.valid_region = "t >= 0, |x - x0| < (2mC)^(1/2) exp(-(m-1)K(t+1)/2)";
    s.t_min = 0.0;
    s.value = [=](long double x, long double t) -> long double {
        const long double M = m, KK = K;
        const long double br = C - (x - x0) * (x - x0) * std::exp((M - 1) * KK * (t + 1)) / (2 * M);
        return pos_pow(br, beta) / (std::pow(t + 1, (long double)beta) * std::exp(KK * (t + 1)));
    };
    s.support = [=](double t) {
        const double r = std::sqrt(2.0 * m * C) * std::exp(-(m - 1.0) * K * (t + 1.0) / 2.0);
        return std::pair{x0 - r, x0 + r};
    };
    s.source = [K](double u) { return -K * u; };
    return s;
}

// ---------------------------------------------------------------------------
// Waiting-time barriers

BarrierSolution sine_subsolution(double rho, double r0, double m, double K) {
    if (!(rho > 0.0) || !(r0 > 0.0)) throw PreconditionError("sine subsolution needs rho, r0 > 0");
    const double a = M_PI / r0;
    const double h = rho * r0 / M_PI;
    const double mu = K * (m - 1.0) + m * h * a * a;
    BarrierSolution s;
    s.kind = BarrierKind::SineSubsol;
    s.variable = BarrierVariable::Pressure;
    s.residual_sign = ResidualSign::SubNegative;
    s.m = m;
    s.params = {{"rho", rho}, {"r0", r0}, {"a", a}, {"h", h}, {"mu", mu}, {"K", K}, {"m", m}};
    s.valid_region = "t >= 0, b(t)/a <= x <= (b(t) + pi)/a";
    s.t_min = 0.0;
    s.t_max = 1.0;
    auto bt = [=](long double t) -> long double { return (h * a * a / mu) * (std::exp(-mu * t) - 1); };
    s.value = [=](long double x, long double t) -> long double {
        const long double z = a * x - bt(t);
        if (z < 0 || z > M_PI) return 0.0L;
        return h * std::exp(-mu * t) * std::sin(z);
    };
    s.support = [=](double t) {
        const double b0 = static_cast<double>(bt(t));
        return std::pair{b0 / a, (b0 + M_PI) / a};
    };
    s.source = [K, m](double v) { return -K * (m - 1.0) * v; };
    return s;
}

double waiting_time_a2_lower_bound(double m, double K) {
    const double sigma = std::pow(m / (m + 1.0), m + 1.0);
    return K * (m - 1.0) / (2.0 * std::pow(sigma, m / (m + 1.0)) - 2.0 * sigma);
}

WaitingTimeBracket waiting_time_bracket(double m, double K, double A1, double A2, double r0) {
    if (!(m > 1.0)) throw PreconditionError("m must exceed 1");
    if (!(K > 0.0)) throw PreconditionError("K must be positive");
    if (!(r0 > 0.0)) throw PreconditionError("r0 must be positive");
    WaitingTimeBracket out;
    out.sigma = std::pow(m / (m + 1.0), m + 1.0);
    out.A2_min = waiting_time_a2_lower_bound(m, K);
    if (!(A2 > out.A2_min)) {
        throw PreconditionError("A2 = " + std::to_string(A2) +
                                " must exceed K(m-1)/(2 sigma^(m/(m+1)) - 2 sigma) = " +
                                std::to_string(out.A2_min));
    }
    if (!(A1 > A2)) throw PreconditionError("A1 must exceed A2");
    out.a = (m - 1.0) * K / (2.0 * (m + 1.0) * A1 + (m - 1.0) * K);
    out.T1 = out.a / ((m - 1.0) * K);
    out.T2 = (1.0 - out.sigma) / (K * (m * m - 1.0));
    return out;
}

BarrierSolution parabolic_supersolution(double m, double K, double A1) {
    const double a = (m - 1.0) * K / (2.0 * (m + 1.0) * A1 + (m - 1.0) * K);
    const double T1 = a / ((m - 1.0) * K);
    const double C1 = (1.0 - a) / (2.0 * (m + 1.0));
    BarrierSolution s;
    s.kind = BarrierKind::ParabolicSupersol;
    s.variable = BarrierVariable::Pressure;
    s.residual_sign = ResidualSign::SuperPositive;
    s.m = m;
    s.params = {{"a", a}, {"T1", T1}, {"C1", C1}, {"A1", A1}, {"K", K}, {"m", m}};
    s.valid_region = "x in R, 0 <= t < T1";
    s.t_min = 0.0;
    s.t_max = 0.95 * T1;
    s.value = [=](long double x, long double t) -> long double { return C1 * x * x / (T1 - t); };
    s.support = [](double) { return std::pair{-1.0, 1.0}; };
    s.source = [K, m](double v) { return K * (m - 1.0) * v; };
    return s;
}

BarrierSolution parabolic_subsolution(double m, double K, double A2, double r0, double delta) {
    const double sigma = std::pow(m / (m + 1.0), m + 1.0);
    const double tau = sigma / (K * (m * m - 1.0));
    const double T2 = (1.0 - sigma) / (K * (m * m - 1.0));
    double C2 = 0, x1 = 0, half0 = 0;
    // Shrink delta until the initial support sits inside [0, r0].
    for (int i = 0; i < 60; ++i) {
        C2 = delta * r0 * r0 / (2.0 * (m + 1.0) * std::pow(tau, 1.0 / (2.0 * (m + 1.0))));
        x1 = std::sqrt(C2 * (1.0 + 2.0 * (m + 1.0) * A2 * tau) / (A2 * std::pow(tau, m / (m + 1.0))));
        half0 = std::sqrt(2.0 * (m + 1.0) * C2) * std::pow(tau, 1.0 / (2.0 * (m + 1.0)));
        if (x1 + half0 <= r0) break;
        delta *= 0.5;
    }
    BarrierSolution s;
    s.kind = BarrierKind::ParabolicSubsol;
    s.variable = BarrierVariable::Pressure;
    s.residual_sign = ResidualSign::SubNegative;
    s.m = m;
    s.params = {{"tau", tau}, {"C2", C2}, {"x1", x1}, {"T2", T2}, {"delta", delta},
                {"sigma", sigma}, {"A2", A2}, {"r0", r0}, {"K", K}, {"m", m}};
    s.valid_region = "0 <= t <= T2, l(t) <= x <= r(t)";
    s.t_min = 0.0;
    s.t_max = T2;
    s.value = [=](long double x, long double t) -> long double {
        const long double M = m;
        const long double v =
            C2 * std::pow(t + tau, -M / (M + 1)) - (x - x1) * (x - x1) / (2 * (M + 1) * (t + tau));
        return v > 0 ? v : 0.0L;
    };
    s.support = [=](double t) {
        const double half = std::sqrt(2.0 * (m + 1.0) * C2) * std::pow(t + tau, 1.0 / (2.0 * (m + 1.0)));
        return std::pair{x1 - half, x1 + half};
    };
    s.source = [K, m](double v) { return -K * (m - 1.0) * v; };
    return s;
}

// ---------------------------------------------------------------------------
// Self-similar front

namespace {

namespace odeint = boost::numeric::odeint;
using Vec2 = std::array<double, 2>;

// Normalised pressure form (theta = 1): V' = Q, Q' = -Q (Q + 2z) / ((m-1) V).
struct FrontSystem {
    double m;
    void operator()(const Vec2& s, Vec2& ds, double z) const {
        const double V = std::max(s[0], 1e-300);
        ds[0] = s[1];
        ds[1] = -s[1] * (s[1] + 2.0 * z) / ((m - 1.0) * V);
    }
};

enum class ShotEnd { Undershoot, Overshoot, Stopped };

struct Shot {
    ShotEnd end = ShotEnd::Stopped;
    double z = 0.0;
    Vec2 state{};
    std::vector<double> zs, Vs, Qs;
};

// Integrates until Q + 2z >= 0 (undershoot) or V <= v_stop (stopped; with
// v_stop = 0 this is an overshoot). A step that crosses either event is
// rejected and retried at half length, so the event is bracketed to ~1e-14.
Shot shoot(double m, double slope, double v_stop, double rtol, bool record) {
    FrontSystem sys{m};
    auto stepper = odeint::make_controlled(rtol * 1e-2, rtol, odeint::runge_kutta_dopri5<Vec2>());
    Vec2 x{m / (m - 1.0), slope};
    double z = 0.0;
    double dt = 1e-4;
    Shot out;
    auto push = [&] {
        if (!record) return;
        out.zs.push_back(z);
        out.Vs.push_back(x[0]);
        out.Qs.push_back(x[1]);
    };
    push();
    // Which event the most recent rejected step ran into.
    std::optional<bool> last_turned;
    auto finish = [&](bool turned) {
        out.end = turned ? ShotEnd::Undershoot : (v_stop > 0.0 ? ShotEnd::Stopped : ShotEnd::Overshoot);
        out.z = z;
        out.state = x;
        return out;
    };
    for (int it = 0; it < 5000000; ++it) {
        const double floor = 1e-14 * std::max(1.0, z);
        Vec2 xn = x;
        double zn = z;
        double dtn = dt;
        if (stepper.try_step(sys, xn, zn, dtn) == odeint::fail) {
            dt = dtn;
        } else {
            const bool finite = std::isfinite(xn[0]) && std::isfinite(xn[1]);
            const bool turned = finite && xn[0] > v_stop && xn[1] + 2.0 * zn >= 0.0;
            if (finite && !turned && xn[0] > v_stop) {
                x = xn;
                z = zn;
                dt = dtn;
                push();
                if (z > 1e3) break;
                continue;
            }
            last_turned = turned;
            if (dt <= floor) return finish(turned);
            dt *= 0.5;
        }
        if (dt <= floor) {
            // Error control cannot proceed: V -> 0 with Q + 2z < 0.
            return finish(last_turned.value_or(x[1] + 2.0 * z >= 0.0));
        }
    }
    throw NumericError("self-similar shooting did not terminate");
}

}  // namespace

SelfSimilarProfile selfsimilar_shoot(double m, double theta, double tol) {
    if (!(m > 1.0)) throw PreconditionError("m must exceed 1");
    if (!(theta > 0.0 && theta < 1.0)) throw PreconditionError("theta must lie in (0, 1)");
    if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
    const double rtol = std::clamp(tol * 1e-3, 1e-14, 1e-12);

    SelfSimilarProfile out;
    out.m = m;
    out.theta = theta;
    out.theta_pow = std::pow(theta, (m - 1.0) / 2.0);

    // Fixed initial slope -2: the first zero of xi.
    {
        const Shot fixed = shoot(m, -2.0, 0.0, rtol, false);
        out.y0_fixed_slope = out.theta_pow * fixed.z;
        out.V_prime_fixed_slope = out.theta_pow * fixed.state[1];
    }

    // Bisection on the slope: steeper shots reach V = 0 with Q + 2z < 0,
    // shallower ones turn around (Q + 2z = 0) while V > 0.
    auto overshoots = [&](double s) { return shoot(m, s, 0.0, rtol, false).end != ShotEnd::Undershoot; };
    double s_lo = -2.0, s_hi = -0.5;
    for (int i = 0; i < 20 && !overshoots(s_lo); ++i) s_lo *= 2.0;
    for (int i = 0; i < 20 && overshoots(s_hi); ++i) s_hi *= 0.5;
    if (!overshoots(s_lo) || overshoots(s_hi)) throw NumericError("self-similar slope not bracketed");
    const double s_tol = std::max(tol * 1e-3, 1e-15);
    while (s_hi - s_lo > s_tol) {
        const double mid = 0.5 * (s_lo + s_hi);
        (overshoots(mid) ? s_lo : s_hi) = mid;
    }
    out.slope0 = s_lo;

    // Profile down to a small pressure level, then the front series
    // V = 2 z0 w - w^2/m + a3 w^3 + a4 w^4 + a5 w^5 in w = z0 - z. The critical
    // orbit repels forward like w^(-1/(m-1)), so the hand-off level grows as m -> 1.
    const double w_target = std::clamp(std::pow(1e-3, m - 1.0), 1e-3, 2e-2);
    const Shot fin = shoot(m, s_lo, 2.0 * w_target, rtol, true);
    if (fin.end == ShotEnd::Undershoot) throw NumericError("self-similar profile turned before the front");
    const double ze = fin.z, Ve = fin.state[0], Qe = fin.state[1];
    auto coeffs = [m](double z0) {
        const double a3 = (m - 1.0) / (m * m * z0 * (6.0 * m - 3.0));
        const double a4 = a3 * (m + 2.0) / (4.0 * m * z0 * (3.0 * m - 2.0));
        const double a5 = (6.0 * a4 * m + 2.0 * a4 - 6.0 * a3 * a3 * m * m - 3.0 * a3 * a3 * m) /
                          (10.0 * m * z0 * (4.0 * m - 3.0));
        return std::array<double, 3>{a3, a4, a5};
    };
    auto series = [&](double z0, double w) {
        const auto a = coeffs(z0);
        return 2.0 * z0 * w - w * w / m + a[0] * w * w * w + a[1] * std::pow(w, 4) + a[2] * std::pow(w, 5);
    };
    auto series_w = [&](double z0, double w) {
        const auto a = coeffs(z0);
        return 2.0 * z0 - 2.0 * w / m + 3.0 * a[0] * w * w + 4.0 * a[1] * w * w * w +
               5.0 * a[2] * std::pow(w, 4);
    };
    const double q = 2.0 - 1.0 / m;
    double w = (-2.0 * ze + std::sqrt(4.0 * ze * ze + 4.0 * q * Ve)) / (2.0 * q);
    for (int i = 0; i < 100; ++i) {
        const double F = series(ze + w, w) - Ve;
        const double dF = series_w(ze + w, w) + 2.0 * w;
        const double step = F / dF;
        w -= step;
        if (std::abs(step) < 1e-17) break;
    }
    const double z0 = ze + w;
    // Slope at the front carried forward from the measured Q, so the Darcy
    // check does not just echo the series' leading term.
    const double Q0 = Qe + (series_w(z0, w) - series_w(z0, 0.0));

    out.y0 = out.theta_pow * z0;
    out.V_prime_at_y0 = out.theta_pow * Q0;
    out.bound_holds = out.y0 > 0.0 && out.y0 < out.theta_pow;
    out.darcy_holds = std::abs(out.V_prime_at_y0 + 2.0 * out.y0) <= 10.0 * tol;

    // Samples in the y variable: xi = theta^m U^m, V = theta^(m-1) Vn.
    const double tm = std::pow(theta, m);
    const double tv = std::pow(theta, m - 1.0);
    auto push = [&](double z, double Vn) {
        const double Un = density_of(Vn, m);
        out.y.push_back(out.theta_pow * z);
        out.xi.push_back(tm * std::pow(Un, m));
        out.V.push_back(tv * Vn);
    };
    // Thin the trajectory to at most ~2000 points.
    const std::size_t stride = std::max<std::size_t>(1, fin.zs.size() / 2000);
    for (std::size_t i = 0; i < fin.zs.size(); i += stride) push(fin.zs[i], fin.Vs[i]);
    if ((fin.zs.size() - 1) % stride != 0) push(fin.zs.back(), fin.Vs.back());
    push(z0, 0.0);
    return out;
}

// ---------------------------------------------------------------------------
// Complete vanishing constants

VanishingConstants vanishing_constants_at(const Reaction& reaction, double m, double M) {
    const auto& spec = reaction.spec();
    if (!spec.p0) throw PreconditionError("vanishing barriers need a reaction with a p0 tail");
    if (!spec.theta) throw PreconditionError("vanishing barriers need a reaction with theta");
    const double p0 = *spec.p0;
    const double theta = *spec.theta;
    PressureReaction pr(reaction);

    VanishingConstants v;
    v.p1 = (m - 2.0 + p0) / (m - 1.0);
    v.p = (p0 + 3.0 * m - 4.0) / (2.0 * (m - 1.0));
    v.alpha = 2.0 / (v.p - 2.0);
    v.K = reaction.growth_bound(2.0);
    v.M = M;
    v.M0 = std::pow((m - 1.0) * M / m, 1.0 / (m - 1.0));
    const double K = v.K;

    auto fail = [&](std::string what) {
        v.feasible = false;
        v.failed = std::move(what);
        return v;
    };

    // L0 = inf_{v >= M} -g(v) / v^p1, sampled over four decades.
    double L0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) {
        const double vv = M * std::pow(10.0, 4.0 * i / 400.0);
        L0 = std::min(L0, -pr.g(vv) / std::pow(vv, v.p1));
    }
    v.L0 = L0;
    if (!(L0 > 0.0)) return fail("g(v) <= -L0 v^p1 for v >= M needs L0 > 0");
    v.L = L0 * std::pow(M, v.p1 - v.p);
    v.t1 = 1.0 / (v.L * M);

    // (s0 equation) theta ((1-K(m-1)s0)/(2K))^(1/(m+1)) / (1 + ((m-1) - K(m^2-1)s0)/2)^(1/(m-1))
    //               = 2 M0 s0^(1/(m+1)).
    // With s0 = (1 - e)/(K(m-1)) the denominator is exactly ((m+1)e/2)^(1/(m-1)), so
    // the left side blows up as e -> 0; the root nearest e = 0 is the one meant.
    auto gap = [&](double log_e) {
        const double e = std::exp(log_e);
        const double s = (1.0 - e) / (K * (m - 1.0));
        const double lhs = theta * std::pow(e / (2.0 * K), 1.0 / (m + 1.0)) /
                           std::pow((m + 1.0) * e / 2.0, 1.0 / (m - 1.0));
        return lhs - 2.0 * v.M0 * std::pow(s, 1.0 / (m + 1.0));
    };
    const double log_lo = std::log(1e-300);
    std::optional<double> root;
    double prev = log_lo;
    for (int i = 1; i <= 690; ++i) {
        const double cur = log_lo * (1.0 - i / 690.0);
        if (gap(prev) > 0.0 && gap(cur) <= 0.0) {
            root = numerics::bisect(gap, prev, cur, 1e-14);
            break;
        }
        prev = cur;
    }
    if (!root) return fail("s0 equation has no root in (0, 1/(K(m-1)))");
    const double eps = std::exp(*root);
    v.s0 = (1.0 - eps) / (K * (m - 1.0));
    if (!(2.0 * v.M0 * std::pow(v.s0, 1.0 / (m + 1.0)) > 1.0))
        return fail("s0 equation: 2 M0 s0^(1/(m+1)) > 1");

    v.b1 = std::sqrt((1.0 - std::pow(2.0, 1.0 - m)) * 2.0 * m * (m + 1.0) / (m - 1.0)) *
           std::pow(v.s0, 1.0 / (m + 1.0));
    v.b = std::pow(M, -1.0 / v.alpha);
    const double a = v.alpha;
    v.c = std::pow(2.0, 1.0 / a) * std::pow(v.b, -1.0 - a) / a *
          (2.0 * (m - 1.0) * a * (a + 1.0) + 2.0 * a * a + K * (m - 1.0));
    v.C = std::pow(2.0 * v.M0, m - 1.0) * std::pow(v.s0, (m - 1.0) / (m + 1.0));

    if (!(v.b <= std::min(v.b1 / 3.0, 1.0)))
        return fail("b = M^(-1/alpha) <= min(b1/3, 1) (b = " + std::to_string(v.b) +
                    ", b1 = " + std::to_string(v.b1) + ")");
    const double need_L = 3.0 * v.c / (v.b1 * M) + std::pow(2.0, v.p) * ((m - 1.0) * a * (a + 1.0) + a * a);
    if (!(v.L >= need_L))
        return fail("L >= 3c/(b1 M) + 2^p[(m-1)alpha(alpha+1) + alpha^2] (L = " + std::to_string(v.L) +
                    ", needed " + std::to_string(need_L) + ")");
    if (!(v.C >= 1.0)) return fail("C = (2 M0)^(m-1) s0^((m-1)/(m+1)) > 1");
    // Step-two suppression below theta at s1, as a diagnostic outside the chain.
    v.s1 = (1.0 - K * (m + 1.0) * v.s0) / (2.0 * K);
    if (v.s1 > 0.0) {
        v.suppression_bound = std::pow(v.s1 + v.s0, -1.0 / (m + 1.0)) * std::pow(v.C, 1.0 / (m - 1.0)) *
                              std::pow(1.0 + K * (m - 1.0) * v.s1, 1.0 / (m - 1.0));
        v.suppression_holds = v.suppression_bound <= theta;
    }

    v.feasible = true;
    const double L = v.L, p = v.p, b = v.b, c = v.c, t1 = v.t1;

    BarrierSolution h;
    h.kind = BarrierKind::VanishingHomogeneous;
    h.variable = BarrierVariable::Pressure;
    h.residual_sign = ResidualSign::SuperPositive;
    h.m = m;
    h.params = {{"L", L}, {"M", M}, {"t1", t1}, {"p", p}};
    h.valid_region = "0 < t <= t1 = (L M)^(-1)";
    h.t_min = 0.0;
    h.t_max = t1;
    h.value = [L](long double, long double t) -> long double {
        if (!(t > 0)) throw DomainError("homogeneous vanishing barrier is defined for t > 0 only");
        return 1.0L / (L * t);
    };
    h.support = [b](double) { return std::pair{-b, b}; };
    h.source = [L, p](double vv) { return -L * std::pow(vv, p); };
    v.barriers.push_back(h);

    BarrierSolution tail;
    tail.kind = BarrierKind::VanishingTail;
    tail.variable = BarrierVariable::Pressure;
    tail.residual_sign = ResidualSign::SuperPositive;
    tail.m = m;
    tail.params = {{"alpha", a}, {"b", b}, {"c", c}, {"L", L}, {"M", M}, {"t1", t1}};
    tail.valid_region = "b + ct < x <= 2b + ct, 0 <= t <= t1";
    tail.t_min = 0.0;
    tail.t_max = t1;
    tail.value = [a, b, c](long double x, long double t) -> long double {
        const long double H = x - c * t - b;
        if (H <= 0) return std::numeric_limits<long double>::infinity();
        if (H >= b) return 0.0L;
        return std::pow(H, -(long double)a) - std::pow((long double)b, -(long double)a);
    };
    tail.support = [b, c](double t) { return std::pair{b + c * t, 2.0 * b + c * t}; };
    tail.source = [L, p, M, K, m](double vv) {
        return vv >= M ? -L * std::pow(vv, p) : K * (m - 1.0) * vv;
    };
    v.barriers.push_back(tail);
    return v;
}

VanishingConstants vanishing_barriers(const Reaction& reaction, double m) {
    const auto& spec = reaction.spec();
    if (!spec.p0) throw PreconditionError("vanishing barriers need a reaction with a p0 tail");
    for (int i = 0; i <= 100; ++i) {
        const double u = 10.0 * std::pow(1e3, i / 100.0);
        if (!(-reaction.eval(u) / std::pow(u, *spec.p0) > 0.0))
            throw PreconditionError("liminf -f(u)/u^p0 > 0 fails at u = " + std::to_string(u));
    }
    VanishingConstants last;
    for (double M = 2.0; M <= 1e12; M *= 2.0) {
        last = vanishing_constants_at(reaction, m, M);
        if (last.feasible) return last;
    }
    last.failed = "no feasible M up to 1e12; at M = " + std::to_string(last.M) + ": " + last.failed;
    return last;
}

}  // namespace rpme
