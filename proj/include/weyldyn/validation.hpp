#pragma once

#include "weyldyn/config.hpp"
#include "weyldyn/kernel.hpp"
#include "weyldyn/potential.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace weyldyn {

inline constexpr int kCriterionCount = 14;

/// Knobs of the acceptance suite ([validate] section).
struct ValidationConfig {
    /// Base kernel step. Must divide 1/2; convergence checks pair 2h with h.
    double h = 0.01;
    std::uint64_t seed = 20240917;
    int moment_trials = 1000;
    double neumann_tol = 1e-12;
    /// Extra potential from [potential], added to the catalog-wide bound checks.
    std::optional<Potential> extra;

    static ValidationConfig from_config(const Config& config);
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    nlohmann::json metrics = nlohmann::json::object();
    std::string detail;
};

struct ValidationReport {
    std::vector<CriterionResult> criteria;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

/// Named test potentials used across the suite.
std::vector<std::pair<std::string, Potential>> acceptance_catalog();

/// One criterion (1..14). Never throws; failures are reported in the result.
CriterionResult run_criterion(int id, const ValidationConfig& config);
ValidationReport run_acceptance(const ValidationConfig& config);

/// log2(|a - b| / |b - c|) in the max norm on the nodes of the coarsest grid, for kernels at
/// steps 2h, h, h/2 over the same triangle.
double richardson_order(const KernelField& coarse, const KernelField& mid, const KernelField& fine);

} // namespace weyldyn
