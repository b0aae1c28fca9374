// rpme: command-line front end for the reaction porous medium toolkit.

#include "rpme/config.hpp"
#include "rpme/dynamics.hpp"
#include "rpme/error.hpp"
#include "rpme/exact.hpp"
#include "rpme/stationary.hpp"
#include "rpme/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace rpme;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

/// Shortest round-trip decimal, independent of the C++ locale.
std::string dec(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(); }

template <class T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json();
}

/// Single writer for the output directory; records a content hash per file.
class Output {
public:
    explicit Output(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& bytes) {
        std::ofstream os(dir_ / name, std::ios::binary);
        if (!os) throw Error("cannot write " + (dir_ / name).string());
        os << bytes;
        manifest_.push_back({{"path", name}, {"hash", content_hash(bytes)}});
    }

    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) {
        std::string s;
        for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
        s += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + dec(row[i]);
            s += '\n';
        }
        write(name, s);
    }

    const Json& manifest() const { return manifest_; }

private:
    fs::path dir_;
    Json manifest_ = Json::array();
};

struct Globals {
    std::string out_dir;
    int threads = 0;
    std::vector<std::string> tol_overrides;
    bool allow_unclassified = false;
};

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> state_rows(const State& s, double m) {
    std::vector<std::vector<double>> rows;
    rows.reserve(s.u.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) rows.push_back({s.grid.x(i), s.u[i], s.v(i, m)});
    return rows;
}

const std::vector<std::string> kStateHeader = {"x[-]", "u[-]", "v[-]"};

Json front_path_json(const std::vector<FrontSample>& path) {
    Json a = Json::array();
    for (const auto& f : path)
        a.push_back({{"t", f.t}, {"l", f.left}, {"r", f.right}, {"pl", f.p_left}, {"pr", f.p_right}, {"sup", f.sup}});
    return a;
}

std::vector<FrontSample> front_path_from(const History& h) {
    std::vector<FrontSample> out;
    for (const auto& fr : h.frames) {
        if (fr.fronts.empty()) continue;
        FrontSample s{fr.t, fr.fronts.front().left, fr.fronts.back().right, fr.fronts.front().left,
                      fr.fronts.back().right, fr.sup};
        if (!fr.left.empty() && fr.left.front().valid) s.p_left = fr.left.front().position;
        if (!fr.right.empty() && fr.right.back().valid) s.p_right = fr.right.back().position;
        out.push_back(s);
    }
    return out;
}

Json certificate_json(const CertificateReport& c) {
    return {{"vxx_ok", c.vxx_ok},
            {"vt_ok", c.vt_ok},
            {"vxx_lower", {c.vxx_lower.intercept, c.vxx_lower.slope}},
            {"vt_lower", {c.vt_lower.intercept, c.vt_lower.slope}},
            {"vt_upper", {c.vt_upper.intercept, c.vt_upper.slope}},
            {"max_vx", c.max_vx},
            {"fit_until", c.fit_until},
            {"violation", c.violation}};
}

Json energy_json(const EnergyCheck& e) {
    return {{"nonincreasing", e.nonincreasing}, {"worst_increase_per_step", e.worst_increase_per_step},
            {"worst_t", e.worst_t}};
}

Json outcome_json(const Outcome& o) {
    Json j = {{"verdict", to_string(o.verdict)},
              {"reason", o.reason},
              {"t_final", o.t_final},
              {"steps", o.steps},
              {"sup_final", o.sup_final},
              {"plateau_half_width", o.plateau_half_width},
              {"front_exponent", opt(o.front_exponent)},
              {"target_distance", opt(o.target_distance)},
              {"target_level", opt(o.target_level)},
              {"target_shifts", o.target_shifts},
              {"theta_crossing_ratio", opt(o.theta_crossing_ratio)}};
    if (o.energy) j["energy"] = energy_json(*o.energy);
    if (o.certificates) j["certificates"] = certificate_json(*o.certificates);
    return j;
}

void write_outcome_files(Output& out, const Outcome& o, double center, double m) {
    std::vector<std::vector<double>> sup, path;
    for (const auto& [t, s] : o.sup_history) sup.push_back({t, s});
    for (const auto& f : o.front_path) path.push_back({f.t, f.left, f.right, f.p_left, f.p_right, f.sup});
    out.csv("sup_history.csv", {"t[-]", "sup_u[-]"}, sup);
    out.csv("front_path.csv", {"t[-]", "left[-]", "right[-]", "p_left[-]", "p_right[-]", "sup_u[-]"}, path);
    out.csv("final_state.csv", kStateHeader, state_rows(o.final_state, m));
    Json log = {{"verdict", to_string(o.verdict)}, {"center", center}, {"front_path", front_path_json(o.front_path)}};
    out.write("run_log.json", log.dump(1) + "\n");
}

double initial_center(const RunConfig& c) {
    const auto p = prepare_run(c);
    return 0.5 * (p.initial_left + p.initial_right);
}

ClassifyOptions classify_options(const RunConfig& c) {
    ClassifyOptions o;
    o.tol = c.tol;
    o.t_end = c.t_end;
    return o;
}

// ---------------------------------------------------------------------------
// Commands. Each returns its result record and writes its files.

Json cmd_run(const ExperimentConfig& cfg, Output& out) {
    const RunConfig& c = cfg.run;
    auto p = prepare_run(c);
    const double m = c.m();
    const History h = run(p.state, *p.reaction, m, p.options);
    for (std::size_t k = 0; k < h.snapshots.size(); ++k) {
        char name[40];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
        out.csv(name, kStateHeader, state_rows(h.snapshots[k], m));
    }
    out.csv("final_state.csv", kStateHeader, state_rows(p.state, m));

    Json fronts = Json::array(), energy = Json::array();
    for (const auto& fr : h.frames) {
        Json l = Json::array(), r = Json::array();
        for (const auto& comp : fr.fronts) {
            l.push_back(comp.left);
            r.push_back(comp.right);
        }
        fronts.push_back({{"t", fr.t}, {"l", l}, {"r", r}});
        if (fr.energy) energy.push_back({{"t", fr.t}, {"E", *fr.energy}});
    }
    Json certs = Json::object();
    for (const auto& name : c.certificates) {
        if (name == "energy") certs["energy"] = energy_json(energy_check(h));
        if (name == "apriori")
            certs["apriori"] = certificate_json(apriori_certificates(h, 0.0, 0.1, p.reaction->has_second_derivative()));
        if (name == "darcy") {
            const auto d = darcy_diagnostic(h, 10, 0.1 * c.t_end);
            certs["darcy"] = {{"mean_residual", d.mean_residual}, {"moving_samples", d.moving_samples}};
        }
    }
    Json waiting = Json::array();
    for (const auto& w : h.waiting)
        waiting.push_back({{"x0", w.x0}, {"t_star", opt(w.t_star)}, {"dt", w.dt_at_detection}});
    Json merges = Json::array();
    for (const auto& e : h.merges)
        merges.push_back({{"t", e.t}, {"from", e.components_before}, {"to", e.components_after}});

    const double center = 0.5 * (p.initial_left + p.initial_right);
    Json log = {{"center", center},
                {"fronts", fronts},
                {"front_path", front_path_json(front_path_from(h))},
                {"energy", energy},
                {"certificates", certs},
                {"waiting", waiting},
                {"merges", merges}};
    out.write("run_log.json", log.dump(1) + "\n");
    return {{"t_final", p.state.t},
            {"steps", p.state.steps},
            {"sup_final", p.state.sup()},
            {"mass_final", p.state.mass()},
            {"clamp_mass", p.state.clamp_mass},
            {"certificates", certs},
            {"waiting", waiting}};
}

Json cmd_classify(const ExperimentConfig& cfg, Output& out) {
    const Outcome o = classify(cfg.run, classify_options(cfg.run));
    write_outcome_files(out, o, initial_center(cfg.run), cfg.run.m());
    return outcome_json(o);
}

Json probes_json(const std::vector<SigmaProbe>& probes) {
    Json a = Json::array();
    for (const auto& p : probes)
        a.push_back({{"sigma", p.sigma}, {"verdict", to_string(p.verdict)}, {"t_end", p.t_end},
                     {"t_decided", p.t_decided}, {"extended", p.extended}});
    return a;
}

std::vector<std::vector<double>> probe_rows(const std::vector<SigmaProbe>& probes) {
    std::vector<std::vector<double>> rows;
    for (const auto& p : probes) rows.push_back({p.sigma, double(int(p.verdict)), p.t_end, p.t_decided});
    return rows;
}

const std::vector<std::string> kProbeHeader = {"sigma[-]", "verdict[0=spreading,1=vanishing,2=transition,3=undecided]",
                                               "t_end[-]", "t_decided[-]"};

Json cmd_bisect(const ExperimentConfig& cfg, Output& out) {
    const auto r = bisect_sigma(cfg.run, cfg.sigma_lo, cfg.sigma_hi, cfg.sigma_tol, classify_options(cfg.run));
    out.csv("probes.csv", kProbeHeader, probe_rows(r.probes));
    return {{"sigma_lo", r.sigma_lo},
            {"sigma_hi", r.sigma_hi},
            {"family_id", r.family_id},
            {"converged", r.converged},
            {"threshold_kind", r.threshold_kind},
            {"outcomes", probes_json(r.probes)},
            {"below", outcome_json(r.below)},
            {"above", outcome_json(r.above)},
            {"transition", r.transition ? outcome_json(*r.transition) : Json()}};
}

Json cmd_sweep(const ExperimentConfig& cfg, Output& out) {
    std::vector<double> sigmas = cfg.sigmas;
    std::sort(sigmas.begin(), sigmas.end());
    std::vector<SigmaProbe> probes(sigmas.size());
    std::vector<Outcome> outcomes(sigmas.size());
    const auto opts = classify_options(cfg.run);
    // Independent probes; each slot is written by one thread only.
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(sigmas.size()); ++i) {
        outcomes[i] = classify(cfg.run, opts, sigmas[i]);
        probes[i] = {sigmas[i], outcomes[i].verdict, opts.t_end, outcomes[i].t_final, false};
    }
    check_monotone(probes);
    out.csv("sweep.csv", kProbeHeader, probe_rows(probes));
    Json a = Json::array();
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        Json o = outcome_json(outcomes[i]);
        o["sigma"] = sigmas[i];
        a.push_back(o);
    }
    return {{"outcomes", a}};
}

void profile_csv(Output& out, const StationaryProfile& p, double m) {
    std::vector<std::vector<double>> rows;
    for (const auto& [x, u] : p.samples()) rows.push_back({x, u, pressure_of(u, m)});
    out.csv("stationary.csv", {"x[-]", "U[-]", "V[-]"}, rows);
}

Json cmd_stationary(const ExperimentConfig& cfg, Output& out) {
    const Reaction f(cfg.run.reaction);
    const double m = cfg.run.m();
    Json j = {{"family", cfg.family}};
    if (cfg.family == "width_height") {
        const auto curve = width_height_curve(f, m, cfg.q0_grid);
        std::vector<std::vector<double>> rows;
        for (const auto& [q, L0] : curve.points) rows.push_back({q, L0});
        out.csv("width_height.csv", {"q0[-]", "L0[-]"}, rows);
        j["hypothesis_holds"] = curve.hypothesis_holds;
        j["strictly_increasing"] = curve.strictly_increasing;
        return j;
    }
    StationaryProfile p;
    if (cfg.family == "bump") p = compact_bump(f, m, *cfg.q0);
    else if (cfg.family == "ground") p = ground_state(f, m);
    else p = stationary_front(f, m);
    profile_csv(out, p, m);
    j["profile_family"] = to_string(p.family);
    j["q0"] = opt(p.q0);
    j["L0"] = opt(p.L0);
    j["L"] = p.L ? finite_or_null(*p.L) : Json();
    if (p.L && std::isinf(*p.L)) j["L_infinite"] = true;
    j["alpha"] = p.decay ? Json(p.decay->alpha) : Json();
    j["A1"] = p.decay ? Json(p.decay->A1) : Json();
    j["cauchy_stationary"] = p.is_cauchy_stationary();
    return j;
}

Json cmd_selfsimilar(const ExperimentConfig& cfg, Output& out) {
    const auto p = selfsimilar_shoot(cfg.run.m(), cfg.theta, cfg.ss_tol);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < p.y.size(); ++i) rows.push_back({p.y[i], p.xi[i], p.V[i]});
    out.csv("selfsimilar.csv", {"y[-]", "xi[-]", "V[-]"}, rows);
    return {{"y0", p.y0},
            {"V_prime_at_y0", p.V_prime_at_y0},
            {"theta_pow", p.theta_pow},
            {"slope0", p.slope0},
            {"bound_holds", p.bound_holds},
            {"darcy_holds", p.darcy_holds},
            {"y0_fixed_slope", p.y0_fixed_slope}};
}

struct Mesh {
    std::vector<double> x_range, t_range;
    int nx = 41, nt = 5;
};

double need(const std::map<std::string, double>& p, const std::string& k) {
    const auto it = p.find(k);
    if (it == p.end()) throw ConfigError("invalid config:\n  params." + k + ": missing");
    return it->second;
}

double get(const std::map<std::string, double>& p, const std::string& k, double fallback) {
    const auto it = p.find(k);
    return it == p.end() ? fallback : it->second;
}

BarrierSolution make_barrier(const ExperimentConfig& cfg) {
    const auto& p = cfg.barrier_params;
    const double m = get(p, "m", cfg.run.m());
    switch (barrier_kind_from_string(cfg.barrier)) {
        case BarrierKind::ZKB: return zkb_barrier(m, need(p, "C"));
        case BarrierKind::SupersolZKBForm:
            return supersolution_envelope(m, need(p, "K"), need(p, "u0_sup"), need(p, "b"));
        case BarrierKind::SubsolZKBForm: return zkb_like_subsolution(m, need(p, "K"), need(p, "C"), get(p, "x0", 0.0));
        case BarrierKind::SineSubsol: return sine_subsolution(need(p, "rho"), need(p, "r0"), m, need(p, "K"));
        case BarrierKind::ParabolicSupersol: return parabolic_supersolution(m, need(p, "K"), need(p, "A1"));
        case BarrierKind::ParabolicSubsol:
            return parabolic_subsolution(m, need(p, "K"), need(p, "A2"), need(p, "r0"), get(p, "delta", 0.5));
        case BarrierKind::VanishingHomogeneous:
        case BarrierKind::VanishingTail: {
            const auto vc = vanishing_barriers(Reaction(cfg.run.reaction), cfg.run.m());
            if (!vc.feasible) throw NumericError("vanishing constants infeasible: " + vc.failed);
            for (const auto& b : vc.barriers)
                if (to_string(b.kind) == cfg.barrier) return b;
            break;
        }
    }
    throw PreconditionError("barrier '" + cfg.barrier + "' unavailable");
}

Json cmd_exact(const ExperimentConfig& cfg, Output& out, const Mesh& mesh) {
    const auto& p = cfg.barrier_params;
    if (cfg.barrier == "waiting_time_bracket") {
        const auto b = waiting_time_bracket(get(p, "m", cfg.run.m()), need(p, "K"), need(p, "A1"), need(p, "A2"),
                                            need(p, "r0"));
        return {{"T1", b.T1}, {"T2", b.T2}, {"sigma", b.sigma}, {"a", b.a}, {"A2_min", b.A2_min}};
    }
    const auto b = make_barrier(cfg);
    double t0 = mesh.t_range.size() == 2 ? mesh.t_range[0] : (b.t_min > 0.0 ? b.t_min : 0.0);
    double t1 = mesh.t_range.size() == 2 ? mesh.t_range[1] : std::min(b.t_max, t0 + 1.0);
    if (!(t0 > 0.0) && mesh.t_range.size() != 2) t0 = 0.01 * (t1 - t0);
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < mesh.nt; ++k) {
        const double t = mesh.nt == 1 ? t0 : t0 + (t1 - t0) * k / (mesh.nt - 1);
        auto [a, c] = b.support(t);
        if (mesh.x_range.size() == 2) std::tie(a, c) = std::pair{mesh.x_range[0], mesh.x_range[1]};
        for (int i = 0; i < mesh.nx; ++i) {
            const double x = mesh.nx == 1 ? a : a + (c - a) * i / (mesh.nx - 1);
            rows.push_back({x, t, b.eval(x, t)});
        }
    }
    out.csv("exact.csv", {"x[-]", "t[-]", "value[-]"}, rows);
    const auto rep = certify_residual(b);
    Json params = Json::object();
    for (const auto& [k, v] : b.params) params[k] = v;
    return {{"kind", to_string(b.kind)},
            {"variable", b.variable == BarrierVariable::Density ? "density" : "pressure"},
            {"residual_sign", to_string(b.residual_sign)},
            {"valid_region", b.valid_region},
            {"params", params},
            {"residual_passed", rep.passed},
            {"worst_relative", rep.worst_relative}};
}

Json cmd_speedfit(const ExperimentConfig& cfg, const Globals& g) {
    const Json log = Json::parse(read_file(cfg.runlog));
    if (log.contains("verdict") && log["verdict"] != "transition" && !g.allow_unclassified)
        throw DomainError("speed fit needs a transition run, got " + log["verdict"].get<std::string>());
    if (!log.contains("verdict") && !g.allow_unclassified)
        throw DomainError("run log carries no verdict; pass --allow-unclassified to fit it anyway");
    std::vector<FrontSample> path;
    for (const auto& f : log.at("front_path"))
        path.push_back({f.at("t"), f.at("l"), f.at("r"), f.at("pl"), f.at("pr"), f.at("sup")});
    const auto fit = transition_speed_fit(path, log.at("center").get<double>(), cfg.theta, cfg.run.m());
    return {{"y0_fit", fit.y0_fit},           {"y0_fit_left", fit.y0_fit_left}, {"y0_shoot", fit.y0_shoot},
            {"rel_err", fit.rel_err},         {"exponent", fit.exponent},       {"exponent_left", fit.exponent_left},
            {"loglog_slope", fit.loglog_slope}, {"bound_holds", fit.bound_holds}};
}

/// Config from a file, or assembled from flags and validated the same way.
ExperimentConfig load_config(Command command, const std::string& path, Json flags) {
    if (!path.empty()) {
        Json j = Json::parse(read_file(path), nullptr, false);
        if (!j.is_discarded() && j.is_object() && !j.contains("command")) {
            j["command"] = std::string(to_string(command));
            return parse_config(j.dump());
        }
        auto cfg = parse_config(read_file(path));
        if (cfg.command != command)
            throw ConfigError("invalid config:\n  command: '" + std::string(to_string(cfg.command)) +
                              "' does not match '" + std::string(to_string(command)) + "'");
        return cfg;
    }
    flags["command"] = std::string(to_string(command));
    return parse_config(flags.dump());
}

int exit_for(const Json& result, Command c) {
    if (c == Command::Verify && !result.value("passed", false)) return int(ExitCode::Numeric);
    return int(ExitCode::Ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reaction porous medium toolkit"};
    app.require_subcommand(1);
    // Global flags are accepted before or after the subcommand.
    app.fallthrough();
    Globals g;
    app.add_option("--out-dir", g.out_dir, "Output directory (default: config out_dir or ./rpme_out)");
    app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    app.add_option("--tol-overrides", g.tol_overrides, "Tolerance overrides key=value")->expected(0, -1);

    std::string config_path;
    auto with_config = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("config", config_path, "Experiment config file");
        if (required) o->required();
        return sub;
    };
    auto* run_cmd = with_config(app.add_subcommand("run", "Run the solver"), true);
    auto* classify_cmd = with_config(app.add_subcommand("classify", "Classify the long-time behaviour"), true);
    auto* bisect_cmd = with_config(app.add_subcommand("bisect", "Bisect the sharp threshold"), true);
    std::optional<double> bisect_tol;
    bisect_cmd->add_option("--tol", bisect_tol, "Bracket width");
    auto* sweep_cmd = with_config(app.add_subcommand("sweep", "Classify a list of sigma values"), true);

    auto* stationary_cmd = with_config(app.add_subcommand("stationary", "Stationary profiles"), false);
    std::string family = "bump", reaction_text;
    std::optional<double> q0, m_flag, theta_flag, tol_flag;
    std::vector<double> q0_grid;
    stationary_cmd->add_option("--family", family, "bump|ground|front|width_height");
    stationary_cmd->add_option("--reaction", reaction_text, "Reaction block as structured text");
    stationary_cmd->add_option("--m", m_flag);
    stationary_cmd->add_option("--q0", q0);
    stationary_cmd->add_option("--q0-grid", q0_grid)->delimiter(',');

    auto* ss_cmd = with_config(app.add_subcommand("selfsimilar", "Shoot the transition front profile"), false);
    ss_cmd->add_option("--m", m_flag);
    ss_cmd->add_option("--theta", theta_flag);
    ss_cmd->add_option("--tol", tol_flag);

    auto* exact_cmd = with_config(app.add_subcommand("exact", "Evaluate a closed-form barrier"), false);
    std::string kind;
    std::vector<std::string> params;
    Mesh mesh;
    exact_cmd->add_option("--kind", kind, "Barrier kind or waiting_time_bracket");
    exact_cmd->add_option("--params", params, "k=v,...")->delimiter(',');
    exact_cmd->add_option("--m", m_flag);
    exact_cmd->add_option("--reaction", reaction_text, "Reaction block (vanishing barriers)");
    exact_cmd->add_option("--x", mesh.x_range, "a,b")->delimiter(',')->expected(2);
    exact_cmd->add_option("--t", mesh.t_range, "a,b")->delimiter(',')->expected(2);
    exact_cmd->add_option("--nx", mesh.nx)->check(CLI::PositiveNumber);
    exact_cmd->add_option("--nt", mesh.nt)->check(CLI::PositiveNumber);

    auto* speed_cmd = app.add_subcommand("speedfit", "Fit r(t) = 2 y0 sqrt(t) to a run log");
    std::string runlog;
    speed_cmd->add_option("runlog", runlog, "run_log.json from run or classify")->required();
    speed_cmd->add_option("--m", m_flag);
    speed_cmd->add_option("--theta", theta_flag);
    speed_cmd->add_flag("--allow-unclassified", g.allow_unclassified, "Fit a run that was not classified Transition");

    auto* verify_cmd = app.add_subcommand("verify", "Run an acceptance suite");
    std::string suite;
    verify_cmd->add_option("suite", suite, "Suite name, or 'all'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : int(ExitCode::Usage);
    }

    try {
        if (g.threads > 0) omp_set_num_threads(g.threads);
        const auto t0 = std::chrono::steady_clock::now();
        CLI::App* sub = app.get_subcommands().front();
        const Command command = command_from_string(sub->get_name());

        Json flags = Json::object();
        auto reaction_block = [&]() {
            if (reaction_text.empty()) return;
            flags["reaction"] = Json::parse(reaction_text);
        };
        if (m_flag) flags["m"] = *m_flag;
        switch (command) {
            case Command::Stationary:
                reaction_block();
                flags["family"] = family;
                if (q0) flags["q0"] = *q0;
                if (!q0_grid.empty()) flags["q0_grid"] = q0_grid;
                break;
            case Command::SelfSimilar:
                if (theta_flag) flags["theta"] = *theta_flag;
                if (tol_flag) flags["tol"] = *tol_flag;
                break;
            case Command::Exact: {
                reaction_block();
                flags["barrier"] = kind;
                Json p = Json::object();
                for (const auto& kv : params) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos) throw ConfigError("invalid config:\n  params: expected k=v, got '" + kv + "'");
                    p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
                }
                flags["params"] = p;
                break;
            }
            case Command::SpeedFit:
                flags["runlog"] = runlog;
                if (theta_flag) flags["theta"] = *theta_flag;
                break;
            case Command::Verify: flags["suite"] = suite; break;
            default: break;
        }
        const bool from_file = command != Command::SpeedFit && command != Command::Verify;
        ExperimentConfig cfg = load_config(command, from_file ? config_path : std::string(), flags);
        if (bisect_tol) cfg.sigma_tol = *bisect_tol;
        apply_overrides(cfg.run.tol, g.tol_overrides);

        const std::string dir = !g.out_dir.empty() ? g.out_dir : !cfg.out_dir.empty() ? cfg.out_dir : "rpme_out";
        Output out(dir);
        Json result;
        switch (command) {
            case Command::Run: result = cmd_run(cfg, out); break;
            case Command::Classify: result = cmd_classify(cfg, out); break;
            case Command::Bisect: result = cmd_bisect(cfg, out); break;
            case Command::Sweep: result = cmd_sweep(cfg, out); break;
            case Command::Stationary: result = cmd_stationary(cfg, out); break;
            case Command::SelfSimilar: result = cmd_selfsimilar(cfg, out); break;
            case Command::Exact: result = cmd_exact(cfg, out, mesh); break;
            case Command::SpeedFit: result = cmd_speedfit(cfg, g); break;
            case Command::Verify: {
                VerifyContext ctx;
                const std::vector<std::string> names =
                    cfg.suite == "all" ? suite_names() : std::vector<std::string>{cfg.suite};
                Json suites = Json::array();
                bool passed = true;
                for (const auto& name : names) {
                    const auto rep = run_suite(name, ctx);
                    for (const auto& c : rep.checks)
                        std::cerr << (c.passed ? "PASS " : "FAIL ") << name << ": " << c.name << ": " << c.detail
                                  << "\n";
                    passed = passed && rep.passed();
                    suites.push_back(to_json(rep, false));
                }
                result = {{"passed", passed}, {"suites", suites}};
                break;
            }
        }
        const Json echo = to_json(cfg);
        Json report = {{"command", to_string(command)},
                       {"version", kVersion},
                       {"config_hash", config_hash(echo)},
                       {"config", echo},
                       {"result", result}};
        report["files"] = out.manifest();
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report["timing"] = {{"wall_seconds", wall}};
        const std::string body = report.dump(1) + "\n";
        out.write("report.json", body);
        std::cout << body;
        return exit_for(result, command);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::Usage);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::Numeric);
    }
}
