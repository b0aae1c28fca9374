#pragma once

#include "rpme/reactions.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rpme {

enum class ProfileFamily { ConstantA, FrontB, UnboundedC, CompactD, PeriodicE, GroundStateF };

/// Outcome of the edge test: quadratic-dominated pressure (stationary), a
/// nonzero or infinite edge slope (not stationary), or an exponent in between.
enum class CauchyStationarity { Stationary, NotStationary, Indeterminate };

std::string_view to_string(ProfileFamily family);
std::string_view to_string(CauchyStationarity verdict);

/// Orbit p^2 + 2m int_0^q r^(m-1) f = C of (U^m)'' + f(U) = 0, with p = (U^m)'.
class PhaseOrbit {
public:
    PhaseOrbit(const Reaction& reaction, double m, double C, double q_lo, double q_hi);

    double C() const noexcept { return C_; }
    double m() const noexcept { return m_; }
    std::pair<double, double> q_range() const noexcept { return {q_lo_, q_hi_}; }
    /// sign * sqrt(C - 2m I(q)); DomainError where the radicand is negative.
    double p_of_q(double q, int sign = 1) const;
    /// |p^2 + 2m I(q) - C|.
    double first_integral_residual(double q, double p) const;

private:
    const Reaction* reaction_;
    double m_, C_, q_lo_, q_hi_;
};

struct DecayData {
    double alpha = 1.0;
    double lambda = 0.0;
    double A1 = 0.0;        // U ~ A1 (x + L)^exponent at the left edge
    double exponent = 0.0;  // 2/(m - alpha)
    double pressure_amplitude = 0.0;  // V ~ A (x + L)^(2(m-1)/(m-alpha)), A = m/(m-1) A1^(m-1)
};

struct StationaryProfile {
    ProfileFamily family = ProfileFamily::ConstantA;
    double m = 2.0;
    std::optional<double> q0;
    std::optional<double> L0;
    /// Ground-state half-width; +inf for Type I.
    std::optional<double> L;
    std::optional<DecayData> decay;
    /// Samples of the unshifted profile, x ascending.
    std::vector<double> x;
    std::vector<double> U;
    /// Copies summed at these shifts (a single 0 for ordinary profiles).
    std::vector<double> shifts{0.0};
    /// Type I profiles are cut where U < 1e-8; that cut is not a free boundary.
    bool truncated = false;
    CauchyStationarity cauchy = CauchyStationarity::Indeterminate;
    /// Edge samples used by the stationarity test (distance, pressure) per edge.
    double left_edge = 0.0;
    double right_edge = 0.0;

    bool is_cauchy_stationary() const noexcept { return cauchy == CauchyStationarity::Stationary; }
    bool compact() const noexcept;
    /// Sum of shifted copies, linear interpolation between samples, 0 outside.
    double eval(double x) const;
    double base_eval(double x) const;
    double support_left() const;
    double support_right() const;
    /// Sample set covering all shifted copies, x ascending.
    std::vector<std::pair<double, double>> samples() const;
};

/// Compact bump of height q0 (U(0) = q0, U'(0) = 0).
StationaryProfile compact_bump(const Reaction& reaction, double m, double q0);
/// Half-width L0 of the compact bump, by singular-endpoint quadrature.
double bump_half_width(const Reaction& reaction, double m, double q0);

struct WidthHeightCurve {
    std::vector<std::pair<double, double>> points;  // (q0, L0)
    bool hypothesis_holds = false;   // f(rho u) > rho^m f(u) on samples
    bool strictly_increasing = false;
};

WidthHeightCurve width_height_curve(const Reaction& reaction, double m,
                                    const std::vector<double>& q0_grid);

/// Ground state of a bistable reaction with decay f(u) ~ -lambda u^alpha.
/// When the reaction declares no (alpha, lambda), alpha = 1 and lambda = -f'(0).
StationaryProfile ground_state(const Reaction& reaction, double m);
/// L from the quadrature formula alone (+inf when alpha >= m).
double ground_state_half_width(const Reaction& reaction, double m);

/// Stationary front U_-: U -> 1 as x -> -inf, edge at x = 0.
StationaryProfile stationary_front(const Reaction& reaction, double m);

/// Edge exponent test on the pressure. Throws PreconditionError when an edge
/// has fewer than 10 samples within 1% of the support width.
CauchyStationarity cauchy_stationarity_test(const StationaryProfile& profile, double m);
/// Fitted pressure edge exponent at the left edge (log-log over the last decade).
double pressure_edge_exponent(const StationaryProfile& profile, double m);
/// Log-log slope of U against distance to the left edge over the last decade of samples.
double density_edge_exponent(const StationaryProfile& profile);

/// k-bump Type II ground state; consecutive shifts must be at least 2L apart.
StationaryProfile assemble_multibump(const StationaryProfile& base, const std::vector<double>& shifts);

/// Zero profile (trivially Cauchy-stationary).
StationaryProfile zero_profile(double m);

}  // namespace rpme
