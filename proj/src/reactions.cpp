#include "rpme/reactions.hpp"

#include "rpme/error.hpp"
#include "rpme/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

namespace rpme {

namespace {

constexpr std::array<std::pair<ReactionKind, std::string_view>, 5> kKindNames = {{
    {ReactionKind::Monostable, "monostable"},
    {ReactionKind::Bistable, "bistable"},
    {ReactionKind::Combustion, "combustion"},
    {ReactionKind::PureDiffusion, "pure_diffusion"},
    {ReactionKind::Custom, "custom"},
}};

double horner(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
}

double horner_derivative(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * u + static_cast<double>(k) * c[k];
    return acc;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

std::string_view to_string(ReactionKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

ReactionKind reaction_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    throw ConfigError("unknown reaction kind '" + std::string(name) + "'");
}

ReactionSpec ReactionSpec::monostable(double m) {
    ReactionSpec s;
    s.kind = ReactionKind::Monostable;
    s.m = m;
    return s;
}

ReactionSpec ReactionSpec::bistable(double m, double theta) {
    ReactionSpec s;
    s.kind = ReactionKind::Bistable;
    s.m = m;
    s.theta = theta;
    return s;
}

ReactionSpec ReactionSpec::bistable_decay(double m, double theta, double alpha, double lambda) {
    auto s = bistable(m, theta);
    s.alpha = alpha;
    s.lambda = lambda;
    return s;
}

ReactionSpec ReactionSpec::combustion(double m, double theta) {
    ReactionSpec s;
    s.kind = ReactionKind::Combustion;
    s.m = m;
    s.theta = theta;
    return s;
}

ReactionSpec ReactionSpec::pure_diffusion(double m) {
    ReactionSpec s;
    s.kind = ReactionKind::PureDiffusion;
    s.m = m;
    return s;
}

ReactionSpec ReactionSpec::custom(double m, std::vector<double> coeffs, double plateau) {
    ReactionSpec s;
    s.kind = ReactionKind::Custom;
    s.m = m;
    s.coeffs = std::move(coeffs);
    if (plateau > 0.0) s.plateau = plateau;
    return s;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::ordered_json to_json(const ReactionSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(spec.kind));
    j["m"] = spec.m;
    if (spec.theta) j["theta"] = *spec.theta;
    if (spec.delta) j["delta"] = *spec.delta;
    if (spec.p0) j["p0"] = *spec.p0;
    if (spec.tail) j["tail"] = *spec.tail;
    if (!spec.coeffs.empty()) j["coeffs"] = spec.coeffs;
    if (spec.plateau) j["plateau"] = *spec.plateau;
    if (spec.alpha) j["alpha"] = *spec.alpha;
    if (spec.lambda) j["lambda"] = *spec.lambda;
    return j;
}

ReactionSpec reaction_from_json(const nlohmann::json& j, const std::string& path,
                                std::vector<std::string>& errors) {
    ReactionSpec spec;
    if (!j.is_object()) {
        errors.push_back(path + ": reaction must be an object");
        return spec;
    }
    static const std::set<std::string> allowed = {"kind",  "m",       "theta", "delta",
                                                  "p0",    "tail",    "coeffs", "plateau",
                                                  "alpha", "lambda"};
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) errors.push_back(path + "." + key + ": unknown key");
    }
    auto number = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key)) return std::nullopt;
        const auto& v = j.at(key);
        if (!v.is_number()) {
            errors.push_back(path + "." + key + ": expected a number");
            return std::nullopt;
        }
        return v.get<double>();
    };
    if (!j.contains("kind")) {
        errors.push_back(path + ".kind: missing reaction kind");
    } else if (!j.at("kind").is_string()) {
        errors.push_back(path + ".kind: expected a string");
    } else {
        try {
            spec.kind = reaction_kind_from_string(j.at("kind").get<std::string>());
        } catch (const ConfigError& e) {
            errors.push_back(path + ".kind: " + e.what());
        }
    }
    if (auto m = number("m")) {
        spec.m = *m;
        if (!(*m > 1.0)) errors.push_back(path + ".m: m must exceed 1");
    } else if (!j.contains("m")) {
        errors.push_back(path + ".m: missing m");
    }
    spec.theta = number("theta");
    spec.delta = number("delta");
    spec.p0 = number("p0");
    spec.tail = number("tail");
    spec.plateau = number("plateau");
    spec.alpha = number("alpha");
    spec.lambda = number("lambda");
    if (j.contains("coeffs")) {
        const auto& c = j.at("coeffs");
        if (!c.is_array()) {
            errors.push_back(path + ".coeffs: expected an array of numbers");
        } else {
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (!c[i].is_number())
                    errors.push_back(path + ".coeffs[" + std::to_string(i) + "]: expected a number");
                else
                    spec.coeffs.push_back(c[i].get<double>());
            }
        }
    }
    const bool needs_theta =
        spec.kind == ReactionKind::Bistable || spec.kind == ReactionKind::Combustion;
    if (needs_theta && !spec.theta) errors.push_back(path + ".theta: required for this kind");
    if (spec.theta && !(*spec.theta > 0.0 && *spec.theta < 1.0))
        errors.push_back(path + ".theta: must lie in (0, 1)");
    if (spec.kind == ReactionKind::Custom && spec.coeffs.empty())
        errors.push_back(path + ".coeffs: required for custom reactions");
    if (spec.p0 && !(*spec.p0 > spec.m)) errors.push_back(path + ".p0: must exceed m");
    return spec;
}

ReactionSpec reaction_from_json(const nlohmann::json& j) {
    std::vector<std::string> errors;
    auto spec = reaction_from_json(j, "reaction", errors);
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
        throw ConfigError(msg);
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Reaction

Reaction::Reaction(ReactionSpec spec) : spec_(std::move(spec)) {
    const auto fail = [](const std::string& msg) { throw PreconditionError("reaction: " + msg); };
    if (!(spec_.m > 1.0)) fail("m must exceed 1");
    const bool needs_theta =
        spec_.kind == ReactionKind::Bistable || spec_.kind == ReactionKind::Combustion;
    if (needs_theta) {
        if (!spec_.theta) fail("theta is required");
        if (!(*spec_.theta > 0.0 && *spec_.theta < 1.0)) fail("theta must lie in (0, 1)");
    }
    if (spec_.alpha && !(*spec_.alpha >= 1.0))
        fail("alpha must be >= 1 (f must be Lipschitz at 0)");
    if (spec_.lambda && !(*spec_.lambda > 0.0)) fail("lambda must be positive");
    if (spec_.p0 && !(*spec_.p0 > spec_.m)) fail("p0 must exceed m");
    if (spec_.tail && !(*spec_.tail > 0.0)) fail("tail coefficient must be positive");
    if (spec_.kind == ReactionKind::Custom && spec_.coeffs.empty()) fail("custom reaction needs coeffs");
    if (spec_.kind == ReactionKind::Combustion && !spec_.delta) {
        spec_.delta = 0.25 * (1.0 - *spec_.theta);
    }

    if (eval(0.0) != 0.0) fail("f(0) must vanish");

    // Dense sign-pattern checks on [0, 2].
    constexpr int kSamples = 2000;
    for (int i = 1; i <= kSamples; ++i) {
        const double u = 2.0 * i / kSamples;
        const double f = eval(u);
        if (spec_.kind != ReactionKind::PureDiffusion && u > 1.0 && !(f < 0.0))
            fail("f(u) must be negative for u > 1 (f(" + fmt(u) + ") = " + fmt(f) + ")");
        switch (spec_.kind) {
            case ReactionKind::Monostable:
                if (u != 1.0 && !((1.0 - u) * f > 0.0)) fail("monostable sign pattern violated at u = " + fmt(u));
                break;
            case ReactionKind::Bistable: {
                const double th = *spec_.theta;
                if (u == th || u == 1.0) break;
                const bool ok = (u < th) ? f < 0.0 : (u < 1.0 ? f > 0.0 : f < 0.0);
                if (!ok) fail("bistable sign pattern violated at u = " + fmt(u));
                break;
            }
            case ReactionKind::Combustion: {
                const double th = *spec_.theta;
                if (u <= th && f != 0.0) fail("combustion f must vanish on [0, theta]");
                if (u > th && u < 1.0 && !(f > 0.0)) fail("combustion f must be positive on (theta, 1)");
                break;
            }
            case ReactionKind::PureDiffusion:
                if (f != 0.0) fail("pure diffusion must have f = 0");
                break;
            case ReactionKind::Custom:
                break;
        }
    }
    if (spec_.kind == ReactionKind::Bistable) {
        const auto r = numerics::integrate([this](double u) { return eval(u); }, 0.0, 1.0);
        if (!(r.value > 0.0)) fail("bistable f must have positive integral over [0, 1]");
    }
    if (spec_.kind == ReactionKind::Combustion) {
        const double th = *spec_.theta;
        const double d = *spec_.delta;
        for (int i = 1; i <= 200; ++i) {
            const double u = th + d * i / 200.0;
            if (!(derivative(u) > 0.0)) fail("combustion f' must be positive on (theta, theta + delta]");
        }
    }
    polynomial_kind_ = spec_.kind == ReactionKind::Custom;
}

double Reaction::theta() const {
    if (!spec_.theta) throw PreconditionError("reaction has no theta");
    return *spec_.theta;
}

double Reaction::operator()(double u) const {
    if (!(u >= 0.0)) throw DomainError("f evaluated at negative u = " + fmt(u));
    return eval(u);
}

double Reaction::eval(double u) const noexcept {
    double f = 0.0;
    switch (spec_.kind) {
        case ReactionKind::Monostable:
            f = u * (1.0 - u);
            break;
        case ReactionKind::Bistable: {
            const double th = *spec_.theta;
            if (spec_.alpha || spec_.lambda) {
                const double a = spec_.alpha.value_or(1.0);
                const double lam = spec_.lambda.value_or(th);
                const double ua = (a == 1.0) ? u : std::pow(u, a);
                f = lam / th * ua * (u - th) * (1.0 - u);
            } else {
                f = u * (u - th) * (1.0 - u);
            }
            break;
        }
        case ReactionKind::Combustion: {
            const double th = *spec_.theta;
            f = u > th ? (u - th) * (1.0 - u) : 0.0;
            break;
        }
        case ReactionKind::PureDiffusion:
            f = 0.0;
            break;
        case ReactionKind::Custom:
            f = (spec_.plateau && u <= *spec_.plateau) ? 0.0 : horner(spec_.coeffs, u);
            break;
    }
    if (spec_.p0 && u > 1.0) f -= spec_.tail.value_or(1.0) * std::pow(u - 1.0, *spec_.p0);
    return f;
}

double Reaction::derivative(double u) const noexcept {
    double d = 0.0;
    switch (spec_.kind) {
        case ReactionKind::Monostable:
            d = 1.0 - 2.0 * u;
            break;
        case ReactionKind::Bistable: {
            const double th = *spec_.theta;
            const double a = spec_.alpha.value_or(1.0);
            const double lam = spec_.lambda.value_or(th);
            const double scale = (spec_.alpha || spec_.lambda) ? lam / th : 1.0;
            const double ua = (a == 1.0) ? u : std::pow(u, a);
            const double ua1 = (a == 1.0) ? 1.0 : a * std::pow(u, a - 1.0);
            d = scale * (ua1 * (u - th) * (1.0 - u) + ua * (1.0 + th - 2.0 * u));
            break;
        }
        case ReactionKind::Combustion: {
            const double th = *spec_.theta;
            d = u >= th ? (1.0 + th - 2.0 * u) : 0.0;
            break;
        }
        case ReactionKind::PureDiffusion:
            d = 0.0;
            break;
        case ReactionKind::Custom:
            d = (spec_.plateau && u < *spec_.plateau) ? 0.0 : horner_derivative(spec_.coeffs, u);
            break;
    }
    if (spec_.p0 && u > 1.0)
        d -= spec_.tail.value_or(1.0) * *spec_.p0 * std::pow(u - 1.0, *spec_.p0 - 1.0);
    return d;
}

bool Reaction::has_second_derivative() const noexcept {
    if (spec_.kind == ReactionKind::Combustion) return false;
    if (spec_.kind == ReactionKind::Custom && spec_.plateau && *spec_.plateau > 0.0) return false;
    if (spec_.alpha) {
        const double a = *spec_.alpha;
        if (a != 1.0 && a < 2.0) return false;
    }
    if (spec_.p0 && *spec_.p0 <= 2.0) return false;
    return true;
}

double Reaction::lipschitz(double upper) const {
    if (!(upper > 0.0)) throw DomainError("lipschitz range must be positive");
    double k = 0.0;
    if (polynomial_kind_) {
        // Finite differences: step 1e-5 at 1e4 points.
        constexpr int kPoints = 10000;
        constexpr double h = 1e-5;
        for (int i = 0; i <= kPoints; ++i) {
            const double u = upper * i / kPoints;
            const double lo = std::max(0.0, u - h);
            const double hi = u + h;
            k = std::max(k, std::abs(eval(hi) - eval(lo)) / (hi - lo));
        }
        return k;
    }
    constexpr int kPoints = 8192;
    for (int i = 0; i <= kPoints; ++i) k = std::max(k, std::abs(derivative(upper * i / kPoints)));
    if (spec_.theta && *spec_.theta <= upper) k = std::max(k, std::abs(derivative(*spec_.theta)));
    return k;
}

double Reaction::growth_bound(double upper) const {
    double k = std::max(0.0, derivative(0.0));
    constexpr int kPoints = 8192;
    for (int i = 1; i <= kPoints; ++i) {
        const double u = upper * i / kPoints;
        k = std::max(k, eval(u) / u);
    }
    return k;
}

double Reaction::weighted_primitive(double q) const {
    if (!(q >= 0.0)) throw DomainError("weighted primitive at negative q");
    const double m = spec_.m;
    auto integrand = [this, m](double r) { return std::pow(r, m - 1.0) * eval(r); };
    std::vector<double> cuts = {0.0};
    if (spec_.theta && *spec_.theta < q) cuts.push_back(*spec_.theta);
    if (spec_.plateau && *spec_.plateau < q) cuts.push_back(*spec_.plateau);
    if (spec_.p0 && 1.0 < q) cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(q);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] > cuts[i])
            total += numerics::integrate(integrand, cuts[i], cuts[i + 1], {1e-15, 1e-12, 4000}).value;
    }
    return total;
}

double Reaction::decay_mismatch(double alpha, double lambda) const {
    double worst = 0.0;
    for (int i = 0; i <= 8; ++i) {
        const double u = std::pow(10.0, -6.0 + 2.0 * i / 8.0);
        const double ratio = eval(u) / (-lambda * std::pow(u, alpha));
        worst = std::max(worst, std::abs(ratio - 1.0));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Pressure reaction

double PressureReaction::g(double v) const {
    if (!(v >= 0.0)) throw DomainError("g evaluated at negative v = " + fmt(v));
    if (v == 0.0) return 0.0;
    const double w = (m_ - 1.0) * v / m_;
    const double u = std::pow(w, 1.0 / (m_ - 1.0));
    return m_ * std::pow(w, (m_ - 2.0) / (m_ - 1.0)) * reaction_->eval(u);
}

double PressureReaction::big_g(double v) const {
    if (!(v >= 0.0)) throw DomainError("G evaluated at negative v = " + fmt(v));
    if (v == 0.0) return 0.0;
    const double e = (3.0 - m_) / (m_ - 1.0);
    auto integrand = [this, e](double r) { return r <= 0.0 ? 0.0 : g(r) * std::pow(r, e); };
    const auto& s = reaction_->spec();
    std::vector<double> cuts = {0.0};
    auto add_cut = [&](double u) {
        const double c = pressure_of(u, m_);
        if (c > 0.0 && c < v) cuts.push_back(c);
    };
    if (s.theta) add_cut(*s.theta);
    if (s.plateau) add_cut(*s.plateau);
    if (s.p0) add_cut(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(v);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += numerics::integrate(integrand, cuts[i], cuts[i + 1]).value;
    }
    return total;
}

SpecialLevels special_levels(const Reaction& reaction, double m) {
    SpecialLevels out;
    const auto& s = reaction.spec();
    if (s.theta) out.big_theta = m / (m - 1.0) * std::pow(*s.theta, m - 1.0);
    if (reaction.kind() != ReactionKind::Bistable) return out;

    const double th = *s.theta;
    auto integral = [&](double q) {
        auto integrand = [&](double r) { return std::pow(r, m - 1.0) * reaction.eval(r); };
        return numerics::integrate(integrand, 0.0, q, {1e-15, 1e-13, 4000}).value;
    };
    if (!(integral(1.0) > 0.0)) {
        throw PreconditionError(
            "theta1 not bracketed in (theta, 1): int_0^1 r^(m-1) f(r) dr must be positive");
    }
    const double theta1 = numerics::bisect(integral, th, 1.0, 1e-14);
    out.theta1 = theta1;
    out.big_theta1 = m / (m - 1.0) * std::pow(theta1, m - 1.0);
    return out;
}

}  // namespace rpme
