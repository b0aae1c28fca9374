#pragma once

#include "rpme/reactions.hpp"

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rpme {

enum class BarrierKind {
    ZKB,
    SupersolZKBForm,
    SubsolZKBForm,
    SineSubsol,
    ParabolicSupersol,
    ParabolicSubsol,
    VanishingHomogeneous,
    VanishingTail
};

enum class ResidualSign { SubNegative, SuperPositive, ExactZero };

/// Which unknown a barrier is written in: density u or pressure v.
enum class BarrierVariable { Density, Pressure };

std::string_view to_string(BarrierKind kind);
std::string_view to_string(ResidualSign sign);
BarrierKind barrier_kind_from_string(std::string_view name);

/// Closed-form sub/supersolution. `value` is evaluated in long double so that
/// the finite-difference residual is not swamped by rounding.
struct BarrierSolution {
    BarrierKind kind = BarrierKind::ZKB;
    BarrierVariable variable = BarrierVariable::Density;
    ResidualSign residual_sign = ResidualSign::ExactZero;
    double m = 2.0;
    std::map<std::string, double> params;
    std::string valid_region;
    double t_min = 0.0;
    double t_max = std::numeric_limits<double>::infinity();

    std::function<long double(long double, long double)> value;
    /// Support interval at time t on which the residual certificate is claimed.
    std::function<std::pair<double, double>(double)> support;
    /// Zeroth-order term the residual is measured against (f-like for density,
    /// g-like for pressure barriers).
    std::function<double(double)> source;

    double eval(double x, double t) const;
    double param(const std::string& name) const;
};

/// Residual at one point, w_t - D[w] - source(w), with its scale.
struct ResidualSample {
    double x = 0.0;
    double t = 0.0;
    double residual = 0.0;
    double magnitude = 0.0;
    bool ok = true;
};

struct ResidualReport {
    std::vector<ResidualSample> samples;
    bool passed = true;
    double worst_relative = 0.0;  // most adverse signed residual / magnitude
};

/// Centered differences at h = 1e-5 with one Richardson step, on an nx-by-nt
/// grid of interior points (or `random` points when a seed is given).
ResidualReport certify_residual(const BarrierSolution& barrier, int nx = 10, int nt = 10,
                                double rel_tol = 1e-6,
                                std::optional<unsigned> random_seed = std::nullopt,
                                const std::function<double(double)>* source_override = nullptr);

/// ZKB / Barenblatt source solution of u_s = (u^m)_xx.
double zkb_profile(double m, double C, double x, double s);
double zkb_edge(double m, double C, double s);
BarrierSolution zkb_barrier(double m, double C);

/// Density supersolution of u_t = (u^m)_xx + K u dominating u0 <= u0_sup on [-b, b].
BarrierSolution supersolution_envelope(double m, double K, double u0_sup, double b);
/// Support envelope s(t) of the supersolution above.
double envelope_radius(const BarrierSolution& envelope, double t);

/// Density subsolution of ZKB form, positive near x0, for f(u) >= -K u.
BarrierSolution zkb_like_subsolution(double m, double K, double C, double x0);

/// Pressure subsolution under a linear edge v0 >= rho x on [0, r0].
BarrierSolution sine_subsolution(double rho, double r0, double m, double K);

struct WaitingTimeBracket {
    double T1 = 0.0;
    double T2 = 0.0;
    double sigma = 0.0;
    double a = 0.0;
    double A2_min = 0.0;
};

WaitingTimeBracket waiting_time_bracket(double m, double K, double A1, double A2, double r0);
double waiting_time_a2_lower_bound(double m, double K);

/// The two pressure barriers behind the bracket: quadratic supersolution
/// C1 x^2/(T1 - t) and the ZKB-type subsolution centred at x1.
BarrierSolution parabolic_supersolution(double m, double K, double A1);
BarrierSolution parabolic_subsolution(double m, double K, double A2, double r0,
                                      double delta = 0.5);

struct SelfSimilarProfile {
    double m = 2.0;
    double theta = 0.5;
    double y0 = 0.0;
    double V_prime_at_y0 = 0.0;
    double slope0 = 0.0;        // xi'(0) actually used
    double theta_pow = 0.0;     // theta^((m-1)/2)
    double y0_fixed_slope = 0.0;  // first zero with xi'(0) = -2 theta^((m+1)/2)
    double V_prime_fixed_slope = 0.0;  // pressure slope near that zero (tends to -inf)
    bool bound_holds = false;   // 0 < y0 < theta^((m-1)/2)
    bool darcy_holds = false;   // V'(y0) = -2 y0
    std::vector<double> y;
    std::vector<double> xi;
    std::vector<double> V;
};

/// Front profile of the combustion transition: xi'' = -(2y/m) xi^((1-m)/m) xi',
/// xi(0) = theta^m, shot on xi'(0) so that the zero y0 carries the Darcy slope.
SelfSimilarProfile selfsimilar_shoot(double m, double theta, double tol);

struct VanishingConstants {
    bool feasible = false;
    std::string failed;         // first violated inequality when infeasible
    double p = 0, p1 = 0, alpha = 0, K = 0;
    double M = 0, M0 = 0, L0 = 0, L = 0, b = 0, c = 0, b1 = 0, s0 = 0, t1 = 0, C = 0;
    double s1 = 0;                 // (1 - K(m+1)s0)/(2K)
    double suppression_bound = 0;  // bound on sup u after the ZKB stage
    bool suppression_holds = false;
    std::vector<BarrierSolution> barriers;
};

/// Constants and barriers for complete vanishing of small-support data under a
/// superlinear sink. M runs over a doubling sequence up to 1e12.
VanishingConstants vanishing_barriers(const Reaction& reaction, double m);
/// Same construction for one fixed M (no search).
VanishingConstants vanishing_constants_at(const Reaction& reaction, double m, double M);

}  // namespace rpme
