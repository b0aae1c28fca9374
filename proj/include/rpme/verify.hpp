#pragma once

#include "rpme/dynamics.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rpme {

/// One acceptance check with its measured values. `criterion` is the
/// acceptance number (0 for checks outside the numbered list).
struct CheckResult {
    int criterion = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    double seconds = 0.0;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool passed() const;
};

nlohmann::ordered_json to_json(const CheckResult& check, bool with_timing = true);
nlohmann::ordered_json to_json(const SuiteReport& report, bool with_timing = true);

/// Suite names accepted by run_suite, in canonical order.
const std::vector<std::string>& suite_names();

/// Pressure-side ZKB refinement run (f = 0, C = 0.5, s from 1 to 4 on [-8, 8]).
struct ZkbStudy {
    double dx = 0.0;
    double interior_error = 0.0;  // |x| < 0.9 edge(4)
    double full_error = 0.0;
    double darcy_residual = 0.0;
    double seconds = 0.0;
    std::optional<EnergyCheck> energy;
    std::optional<CertificateReport> certificates;
};

/// Energy and certificate results of one regression run.
struct RegressionRun {
    std::string name;
    double darcy_residual = 0.0;
    EnergyCheck energy;
    CertificateReport certificates;
    double seconds = 0.0;
};

/// Lazily computed, shared results so that criteria that reuse a long run
/// (the bisections above all) pay for it once.
class VerifyContext {
public:
    VerifyContext();
    ~VerifyContext();

    const ZkbStudy& zkb(int dx_inverse);
    const RegressionRun& regression(const std::string& name);
    const ThresholdResult& combustion_threshold();
    const ThresholdResult& bistable_threshold();
    /// Combustion run at the bisected threshold, with its wall time.
    const std::pair<Outcome, double>& combustion_near_threshold();

    static RunConfig combustion_family();
    static RunConfig bistable_family();

private:
    struct Cache;
    std::unique_ptr<Cache> cache_;
};

/// Runs acceptance criterion 1..12. Hard invariant violations propagate as
/// InvariantViolation; everything else is reported in the result.
CheckResult acceptance_criterion(int id, VerifyContext& context);

/// Runs one named suite (barriers, stationary, darcy, waiting,
/// trichotomy-combustion, trichotomy-bistable, hair-trigger,
/// vanishing-complete, z0).
SuiteReport run_suite(const std::string& name, VerifyContext& context);

}  // namespace rpme
