#include "rpme/config.hpp"

#include "rpme/error.hpp"
#include "rpme/exact.hpp"
#include "rpme/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>

namespace rpme {

using nlohmann::json;
using nlohmann::ordered_json;

double InitialData::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

// ---------------------------------------------------------------------------
// Initial data

namespace {

double need(const InitialData& d, const std::string& key) {
    auto it = d.params.find(key);
    if (it == d.params.end()) throw ConfigError("u0." + key + ": required for kind " + d.kind);
    return it->second;
}

InitialProfile pressure_edge(double m, double r0, std::function<double(double)> v_of_dist) {
    if (!(r0 > 0.0)) throw ConfigError("u0.r0: must be positive");
    return {[=](double x) {
                if (x <= 0.0 || x >= 2.0 * r0) return 0.0;
                return density_of(v_of_dist(std::min(x, 2.0 * r0 - x)), m);
            },
            0.0, 2.0 * r0};
}

}  // namespace

InitialProfile make_initial(const InitialData& d, const Reaction& reaction, double m, double dx) {
    const double center = d.param("center", 0.0);
    if (d.kind == "parabola") {
        const double sigma = d.param("sigma", 1.0), b = need(d, "b"), power = d.param("power", 1.0);
        if (!(b > 0.0)) throw ConfigError("u0.b: must be positive");
        if (!(sigma >= 0.0)) throw ConfigError("u0.sigma: must be nonnegative");
        return {[=](double x) {
                    const double q = b * b - (x - center) * (x - center);
                    return q > 0.0 ? sigma * std::pow(q, power) : 0.0;
                },
                center - b, center + b};
    }
    if (d.kind == "indicator") {
        const double L = need(d, "L"), height = d.param("height", 1.0);
        if (!(L > 0.0) || !(height > 0.0)) throw ConfigError("u0: indicator needs L > 0 and height > 0");
        return {[=](double x) {
                    const double e = std::abs(x - center) - L;
                    if (e <= 0.0) return height;
                    return height * std::max(0.0, 1.0 - e / (2.0 * dx));
                },
                center - L - dx, center + L + dx};
    }
    if (d.kind == "zkb") {
        const double C = need(d, "C"), s = d.param("s", 1.0);
        if (!(C > 0.0) || !(s > 0.0)) throw ConfigError("u0: zkb needs C > 0 and s > 0");
        const double e = zkb_edge(m, C, s);
        return {[=](double x) { return zkb_profile(m, C, x - center, s); }, center - e, center + e};
    }
    if (d.kind == "bump" || d.kind == "ground") {
        const double sigma = d.param("sigma", 1.0);
        auto profile = std::make_shared<StationaryProfile>();
        if (d.kind == "bump") {
            *profile = compact_bump(reaction, m, need(d, "q0"));
        } else {
            *profile = ground_state(reaction, m);
            if (!profile->compact()) throw ConfigError("u0: ground state has unbounded support (alpha >= m)");
            *profile = assemble_multibump(*profile, d.shifts.empty() ? std::vector<double>{0.0} : d.shifts);
        }
        return {[=](double x) { return sigma * profile->eval(x - center); }, center + profile->support_left(),
                center + profile->support_right()};
    }
    if (d.kind == "pressure_quadratic") {
        const double A = need(d, "A");
        return pressure_edge(m, need(d, "r0"), [=](double s) { return A * s * s; });
    }
    if (d.kind == "pressure_linear") {
        const double rho = need(d, "rho");
        return pressure_edge(m, need(d, "r0"), [=](double s) { return rho * s; });
    }
    if (d.kind == "sum") {
        if (d.parts.empty()) throw ConfigError("u0.parts: sum needs at least one part");
        std::vector<InitialProfile> parts;
        for (const auto& p : d.parts) parts.push_back(make_initial(p, reaction, m, dx));
        InitialProfile out{nullptr, parts.front().left, parts.front().right};
        for (const auto& p : parts) {
            out.left = std::min(out.left, p.left);
            out.right = std::max(out.right, p.right);
        }
        out.u0 = [parts](double x) {
            double s = 0.0;
            for (const auto& p : parts) s += p.u0(x);
            return s;
        };
        return out;
    }
    throw ConfigError("u0.kind: unknown initial datum '" + d.kind + "'");
}

void apply_overrides(Tolerances& tol, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("tolerance override '" + o + "': expected key=value");
        const std::string key = o.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(o.substr(eq + 1), &used);
            if (used != o.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("tolerance override '" + o + "': value is not a number");
        }
        if (!(value > 0.0)) throw ConfigError("tolerance override '" + o + "': must be positive");
        if (key == "vanish_tol") tol.vanish = value;
        else if (key == "spread_tol") tol.spread = value;
        else if (key == "trans_tol") tol.trans = value;
        else throw ConfigError("tolerance override '" + key + "': unknown tolerance");
    }
}

PreparedRun prepare_run(const RunConfig& c, double sigma) {
    PreparedRun p;
    p.reaction = std::make_unique<Reaction>(c.reaction);
    const double m = c.m();
    auto init = make_initial(c.u0, *p.reaction, m, c.grid.dx);
    p.initial_left = init.left;
    p.initial_right = init.right;
    const auto grid = Grid1D::covering(init.left - c.grid.pad, init.right + c.grid.pad, c.grid.dx);
    auto u0 = init.u0;
    p.state = init_state(grid, [&](double x) { return sigma * u0(x); });
    p.options.t_end = c.t_end;
    p.options.record_stride = c.record_stride;
    p.options.snapshot_every = c.snapshot_every;
    p.options.watch_points = c.watch_points;
    for (const auto& cert : c.certificates) {
        if (cert == "energy") p.options.energy = true;
        if (cert == "apriori") p.options.certificates = true;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Run, "run"},           {Command::Classify, "classify"},       {Command::Bisect, "bisect"},
    {Command::Sweep, "sweep"},       {Command::Stationary, "stationary"},   {Command::SelfSimilar, "selfsimilar"},
    {Command::Exact, "exact"},       {Command::SpeedFit, "speedfit"},       {Command::Verify, "verify"},
};

}  // namespace

std::string_view to_string(Command c) {
    for (const auto& [k, name] : kCommands)
        if (k == c) return name;
    return "run";
}

Command command_from_string(std::string_view name) {
    for (const auto& [k, n] : kCommands)
        if (n == name) return k;
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

/// Parses with a callback that records duplicate keys by path; nlohmann
/// itself silently keeps the last value.
json parse_checked(const std::string& text, std::vector<std::string>& errors) {
    struct Frame {
        bool object = true;
        std::string path;
        std::set<std::string> keys;
        std::string key;
    };
    std::vector<Frame> stack;
    auto child_path = [&]() -> std::string {
        if (stack.empty()) return "";
        const auto& f = stack.back();
        if (!f.object) return f.path + "[]";
        return f.path.empty() ? f.key : f.path + "." + f.key;
    };
    json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start:
                stack.push_back({true, child_path(), {}, {}});
                break;
            case json::parse_event_t::array_start:
                stack.push_back({false, child_path(), {}, {}});
                break;
            case json::parse_event_t::object_end:
            case json::parse_event_t::array_end:
                if (!stack.empty()) stack.pop_back();
                break;
            case json::parse_event_t::key: {
                auto& f = stack.back();
                f.key = parsed.get<std::string>();
                if (!f.keys.insert(f.key).second)
                    errors.push_back((f.path.empty() ? f.key : f.path + "." + f.key) + ": duplicate key");
                break;
            }
            default:
                break;
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed text: ") + e.what());
    }
}

/// Field reader for one object: records type errors and, on finish(),
/// every key that was not consumed.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& errors)
        : j_(j), path_(std::move(path)), errors_(errors) {
        if (!j_.is_object()) error("", "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    void error(const std::string& key, const std::string& msg) const {
        errors_.push_back((key.empty() ? (path_.empty() ? "config" : path_) : at(key)) + ": " + msg);
    }
    bool has(const std::string& key) {
        used_.insert(key);
        return j_.is_object() && j_.contains(key);
    }
    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    std::optional<double> number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const auto& v = j_.at(key);
        if (!v.is_number()) {
            error(key, "expected a number");
            return std::nullopt;
        }
        return v.get<double>();
    }
    void number(const std::string& key, double& out) {
        if (auto v = number(key)) out = *v;
    }
    void positive(const std::string& key, double& out) {
        if (auto v = number(key)) {
            if (!(*v > 0.0)) error(key, "must be positive");
            out = *v;
        }
    }
    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_string()) error(key, "expected a string");
        else out = v.get<std::string>();
    }
    void numbers(const std::string& key, std::vector<double>& out) {
        if (!has(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_array()) {
            error(key, "expected an array of numbers");
            return;
        }
        out.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) error(key + "[" + std::to_string(i) + "]", "expected a number");
            else out.push_back(v[i].get<double>());
        }
    }
    void finish() const {
        if (!j_.is_object()) return;
        for (const auto& [key, _] : j_.items())
            if (!used_.count(key)) error(key, "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> used_;
};

const std::set<std::string> kInitialKinds = {"parabola",           "indicator",       "zkb", "bump", "ground",
                                             "pressure_quadratic", "pressure_linear", "sum"};

InitialData initial_from_json(const json& j, const std::string& path, std::vector<std::string>& errors) {
    InitialData d;
    Reader r(j, path, errors);
    if (!j.is_object()) return d;
    if (!r.has("kind")) r.error("kind", "missing initial datum kind");
    r.string("kind", d.kind);
    if (!kInitialKinds.count(d.kind)) r.error("kind", "unknown initial datum '" + d.kind + "'");
    if (r.has("params")) {
        const auto& p = r.raw("params");
        if (!p.is_object()) {
            r.error("params", "expected an object of numbers");
        } else {
            for (const auto& [key, v] : p.items()) {
                if (!v.is_number()) r.error("params." + key, "expected a number");
                else d.params[key] = v.get<double>();
            }
        }
    }
    r.numbers("shifts", d.shifts);
    if (r.has("parts")) {
        const auto& parts = r.raw("parts");
        if (!parts.is_array()) {
            r.error("parts", "expected an array of initial data");
        } else {
            for (std::size_t i = 0; i < parts.size(); ++i)
                d.parts.push_back(initial_from_json(parts[i], r.at("parts[" + std::to_string(i) + "]"), errors));
        }
    }
    r.finish();
    return d;
}

/// Reaction with the top-level m injected when the block omits it.
ReactionSpec reaction_with_m(Reader& top, std::optional<double> m, std::vector<std::string>& errors) {
    if (!top.has("reaction")) {
        top.error("reaction", "missing reaction");
        return {};
    }
    json block = top.raw("reaction");
    if (block.is_object() && !block.contains("m")) {
        if (!m) {
            top.error("m", "missing m");
            block["m"] = 2.0;
        } else {
            block["m"] = *m;
        }
    } else if (block.is_object() && m && block["m"].is_number() && block["m"].get<double>() != *m) {
        top.error("reaction.m", "disagrees with top-level m");
    }
    std::vector<std::string> sub;
    auto spec = reaction_from_json(block, top.at("reaction"), sub);
    // A missing-m error is reported once, at the top level.
    for (auto& e : sub) errors.push_back(std::move(e));
    return spec;
}

void read_run(Reader& r, RunConfig& run, std::vector<std::string>& errors) {
    auto m = r.number("m");
    if (m && !(*m > 1.0)) r.error("m", "m must exceed 1");
    run.reaction = reaction_with_m(r, m, errors);
    if (r.has("grid")) {
        Reader g(r.raw("grid"), r.at("grid"), errors);
        if (auto dx = g.number("dx")) {
            if (!(*dx > 0.0)) g.error("dx", "dx must be positive");
            run.grid.dx = *dx;
        }
        if (auto pad = g.number("pad")) {
            if (!(*pad >= 0.0)) g.error("pad", "must be nonnegative");
            run.grid.pad = *pad;
        }
        g.finish();
    }
    if (!r.has("u0")) r.error("u0", "missing initial datum");
    else run.u0 = initial_from_json(r.raw("u0"), r.at("u0"), errors);
    r.positive("t_end", run.t_end);
    if (auto s = r.number("snapshot_every")) {
        if (!(*s >= 0.0)) r.error("snapshot_every", "must be nonnegative");
        run.snapshot_every = *s;
    }
    if (auto s = r.number("record_stride")) {
        if (!(*s >= 1.0) || std::floor(*s) != *s) r.error("record_stride", "must be a positive integer");
        else run.record_stride = std::size_t(*s);
    }
    if (r.has("certificates")) {
        const auto& c = r.raw("certificates");
        if (!c.is_array()) {
            r.error("certificates", "expected an array of names");
        } else {
            for (std::size_t i = 0; i < c.size(); ++i) {
                const std::string key = "certificates[" + std::to_string(i) + "]";
                if (!c[i].is_string()) {
                    r.error(key, "expected a string");
                    continue;
                }
                const auto name = c[i].get<std::string>();
                if (name != "energy" && name != "apriori" && name != "darcy")
                    r.error(key, "unknown certificate '" + name + "' (energy, apriori, darcy)");
                run.certificates.push_back(name);
            }
        }
    }
    r.numbers("watch_points", run.watch_points);
    if (r.has("tolerances")) {
        Reader t(r.raw("tolerances"), r.at("tolerances"), errors);
        t.positive("vanish", run.tol.vanish);
        t.positive("spread", run.tol.spread);
        t.positive("trans", run.tol.trans);
        t.finish();
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::vector<std::string> errors;
    const json j = parse_checked(text, errors);
    ExperimentConfig c;
    Reader r(j, "", errors);
    if (j.is_object()) {
        std::string command = "run";
        r.string("command", command);
        try {
            c.command = command_from_string(command);
        } catch (const ConfigError& e) {
            r.error("command", e.what());
        }
        if (r.has("deterministic")) {
            const auto& v = r.raw("deterministic");
            if (!v.is_boolean()) r.error("deterministic", "expected true or false");
            else c.deterministic = v.get<bool>();
        }
        r.string("out_dir", c.out_dir);
        switch (c.command) {
            case Command::Run:
            case Command::Classify:
                read_run(r, c.run, errors);
                break;
            case Command::Bisect:
                read_run(r, c.run, errors);
                if (!r.has("sigma_lo")) r.error("sigma_lo", "missing lower sigma");
                if (!r.has("sigma_hi")) r.error("sigma_hi", "missing upper sigma");
                r.positive("sigma_lo", c.sigma_lo);
                r.positive("sigma_hi", c.sigma_hi);
                r.positive("tol", c.sigma_tol);
                if (c.sigma_lo > 0.0 && c.sigma_hi > 0.0 && !(c.sigma_lo < c.sigma_hi))
                    r.error("sigma_hi", "must exceed sigma_lo");
                break;
            case Command::Sweep:
                read_run(r, c.run, errors);
                if (!r.has("sigmas")) r.error("sigmas", "missing sigma list");
                r.numbers("sigmas", c.sigmas);
                break;
            case Command::Stationary: {
                auto m = r.number("m");
                if (m && !(*m > 1.0)) r.error("m", "m must exceed 1");
                c.run.reaction = reaction_with_m(r, m, errors);
                r.string("family", c.family);
                if (c.family != "bump" && c.family != "ground" && c.family != "front" && c.family != "width_height")
                    r.error("family", "unknown family '" + c.family + "' (bump, ground, front, width_height)");
                if (auto q = r.number("q0")) c.q0 = *q;
                r.numbers("q0_grid", c.q0_grid);
                if (c.family == "bump" && !c.q0) r.error("q0", "bump needs q0");
                if (c.family == "width_height" && c.q0_grid.empty()) r.error("q0_grid", "width_height needs q0_grid");
                break;
            }
            case Command::SelfSimilar: {
                double m = 2.0;
                if (!r.has("m")) r.error("m", "missing m");
                r.number("m", m);
                if (!(m > 1.0)) r.error("m", "m must exceed 1");
                c.run.reaction.m = m;
                r.number("theta", c.theta);
                if (!(c.theta > 0.0 && c.theta < 1.0)) r.error("theta", "must lie in (0, 1)");
                r.positive("tol", c.ss_tol);
                break;
            }
            case Command::Exact: {
                if (!r.has("barrier")) r.error("barrier", "missing barrier kind");
                r.string("barrier", c.barrier);
                try {
                    if (!c.barrier.empty() && c.barrier != "waiting_time_bracket")
                        (void)barrier_kind_from_string(c.barrier);
                } catch (const Error& e) {
                    r.error("barrier", e.what());
                }
                if (r.has("params")) {
                    const auto& p = r.raw("params");
                    if (!p.is_object()) r.error("params", "expected an object of numbers");
                    else
                        for (const auto& [key, v] : p.items()) {
                            if (!v.is_number()) r.error("params." + key, "expected a number");
                            else c.barrier_params[key] = v.get<double>();
                        }
                }
                if (r.has("reaction")) c.run.reaction = reaction_with_m(r, r.number("m"), errors);
                else if (auto m = r.number("m")) c.run.reaction.m = *m;
                break;
            }
            case Command::SpeedFit: {
                if (!r.has("runlog")) r.error("runlog", "missing run log path");
                r.string("runlog", c.runlog);
                r.number("theta", c.theta);
                double m = 2.0;
                r.number("m", m);
                c.run.reaction.m = m;
                break;
            }
            case Command::Verify:
                if (!r.has("suite")) r.error("suite", "missing suite name");
                r.string("suite", c.suite);
                break;
        }
        r.finish();
    } else {
        errors.push_back("config: expected an object");
    }
    if (!errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Serialization

ordered_json to_json(const InitialData& d) {
    ordered_json j;
    j["kind"] = d.kind;
    if (!d.params.empty()) {
        ordered_json p = ordered_json::object();
        for (const auto& [k, v] : d.params) p[k] = v;
        j["params"] = p;
    }
    if (!d.shifts.empty()) j["shifts"] = d.shifts;
    if (!d.parts.empty()) {
        j["parts"] = ordered_json::array();
        for (const auto& p : d.parts) j["parts"].push_back(to_json(p));
    }
    return j;
}

namespace {

void put_run(ordered_json& j, const RunConfig& c) {
    j["m"] = c.m();
    j["reaction"] = to_json(c.reaction);
    j["grid"] = {{"dx", c.grid.dx}, {"pad", c.grid.pad}};
    j["u0"] = to_json(c.u0);
    j["t_end"] = c.t_end;
    j["snapshot_every"] = c.snapshot_every;
    j["record_stride"] = c.record_stride;
    j["certificates"] = c.certificates;
    j["watch_points"] = c.watch_points;
    j["tolerances"] = {{"vanish", c.tol.vanish}, {"spread", c.tol.spread}, {"trans", c.tol.trans}};
}

}  // namespace

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    put_run(j, c);
    return j;
}

ordered_json to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["command"] = std::string(to_string(c.command));
    j["deterministic"] = c.deterministic;
    if (!c.out_dir.empty()) j["out_dir"] = c.out_dir;
    switch (c.command) {
        case Command::Run:
        case Command::Classify:
            put_run(j, c.run);
            break;
        case Command::Bisect:
            put_run(j, c.run);
            j["sigma_lo"] = c.sigma_lo;
            j["sigma_hi"] = c.sigma_hi;
            j["tol"] = c.sigma_tol;
            break;
        case Command::Sweep:
            put_run(j, c.run);
            j["sigmas"] = c.sigmas;
            break;
        case Command::Stationary:
            j["m"] = c.run.m();
            j["reaction"] = to_json(c.run.reaction);
            j["family"] = c.family;
            if (c.q0) j["q0"] = *c.q0;
            if (!c.q0_grid.empty()) j["q0_grid"] = c.q0_grid;
            break;
        case Command::SelfSimilar:
            j["m"] = c.run.m();
            j["theta"] = c.theta;
            j["tol"] = c.ss_tol;
            break;
        case Command::Exact: {
            j["barrier"] = c.barrier;
            ordered_json p = ordered_json::object();
            for (const auto& [k, v] : c.barrier_params) p[k] = v;
            j["params"] = p;
            j["m"] = c.run.m();
            j["reaction"] = to_json(c.run.reaction);
            break;
        }
        case Command::SpeedFit:
            j["runlog"] = c.runlog;
            j["theta"] = c.theta;
            j["m"] = c.run.m();
            break;
        case Command::Verify:
            j["suite"] = c.suite;
            break;
    }
    return j;
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_hash(const ordered_json& config) { return content_hash(config.dump()); }

}  // namespace rpme
