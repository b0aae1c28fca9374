#pragma once

#include <json.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rpme {

enum class ReactionKind { Monostable, Bistable, Combustion, PureDiffusion, Custom };

std::string_view to_string(ReactionKind kind);
ReactionKind reaction_kind_from_string(std::string_view name);

/// Serializable description of a reaction term f(u) together with the porous
/// medium exponent m it is used with.
///
/// Built-in formulas:
///   Monostable     u (1 - u)
///   Bistable       (lambda/theta) u^alpha (u - theta)(1 - u), defaults alpha = 1, lambda = theta
///   Combustion     (u - theta)(1 - u) for u > theta, 0 on [0, theta]
///   PureDiffusion  0
///   Custom         sum_k coeffs[k] u^k for u > plateau, 0 on [0, plateau]
/// When p0 is set a superlinear sink -tail * (u - 1)_+^p0 is added.
struct ReactionSpec {
    ReactionKind kind = ReactionKind::Monostable;
    double m = 2.0;
    std::optional<double> theta;
    std::optional<double> delta;
    std::optional<double> p0;
    std::optional<double> tail;
    std::vector<double> coeffs;
    std::optional<double> plateau;
    std::optional<double> alpha;
    std::optional<double> lambda;

    static ReactionSpec monostable(double m);
    static ReactionSpec bistable(double m, double theta);
    static ReactionSpec bistable_decay(double m, double theta, double alpha, double lambda);
    static ReactionSpec combustion(double m, double theta);
    static ReactionSpec pure_diffusion(double m);
    static ReactionSpec custom(double m, std::vector<double> coeffs, double plateau = 0.0);

    bool operator==(const ReactionSpec&) const = default;
};

/// Throws ConfigError listing every violated field.
nlohmann::ordered_json to_json(const ReactionSpec& spec);
ReactionSpec reaction_from_json(const nlohmann::json& j, const std::string& path,
                                std::vector<std::string>& errors);
ReactionSpec reaction_from_json(const nlohmann::json& j);

/// Immutable evaluator for f and the quantities derived from it.
class Reaction {
public:
    /// Validates the parameters (sign pattern, f(0) = 0, f < 0 beyond 1) and throws
    /// PreconditionError on violation.
    explicit Reaction(ReactionSpec spec);

    const ReactionSpec& spec() const noexcept { return spec_; }
    ReactionKind kind() const noexcept { return spec_.kind; }
    double m() const noexcept { return spec_.m; }
    double theta() const;  // throws for kinds without theta

    /// f(u); DomainError for u < 0.
    double operator()(double u) const;
    /// f(u) without the domain check, for inner loops.
    double eval(double u) const noexcept;
    /// f'(u), one-sided from the right at kinks.
    double derivative(double u) const noexcept;
    /// Whether f is C^2 on [0, inf) (the v_xx certificate needs it).
    bool has_second_derivative() const noexcept;

    /// max |f'| on [0, upper].
    double lipschitz(double upper) const;
    /// sup f(u)/u over u > 0 (the one-sided constant with f(u) <= K u).
    double growth_bound(double upper) const;

    /// I(q) = int_0^q r^(m-1) f(r) dr by adaptive quadrature.
    double weighted_primitive(double q) const;

    /// Largest relative deviation of f(u) from -lambda u^alpha over u in
    /// [1e-6, 1e-4]; used to check declared decay data.
    double decay_mismatch(double alpha, double lambda) const;

private:
    ReactionSpec spec_;
    bool polynomial_kind_ = false;
};

/// Pressure-side reaction g(v) for v = m/(m-1) u^(m-1).
class PressureReaction {
public:
    PressureReaction(const Reaction& reaction) : reaction_(&reaction), m_(reaction.m()) {}

    double m() const noexcept { return m_; }
    const Reaction& reaction() const noexcept { return *reaction_; }

    /// g(v) = m ((m-1)v/m)^((m-2)/(m-1)) f(((m-1)v/m)^(1/(m-1))); g(0) = 0.
    double g(double v) const;
    /// G(v) = int_0^v g(r) r^((3-m)/(m-1)) dr (adaptive quadrature).
    double big_g(double v) const;

private:
    const Reaction* reaction_;
    double m_;
};

struct SpecialLevels {
    std::optional<double> theta1;  // int_0^theta1 r^(m-1) f = 0, bistable only
    std::optional<double> big_theta;   // m/(m-1) theta^(m-1)
    std::optional<double> big_theta1;  // m/(m-1) theta1^(m-1)
};

SpecialLevels special_levels(const Reaction& reaction, double m);

/// Density <-> pressure conversions.
inline double pressure_of(double u, double m) {
    return m / (m - 1.0) * std::pow(u, m - 1.0);
}

inline double density_of(double v, double m) {
    return v <= 0.0 ? 0.0 : std::pow((m - 1.0) * v / m, 1.0 / (m - 1.0));
}

}  // namespace rpme
