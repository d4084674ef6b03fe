#pragma once

#include <string>
#include <vector>

#include "rhosum/summary.hpp"

namespace rhosum {

struct ExperimentOptions {
    std::string outdir;   // empty: no CSV/SVG files written
    uint64_t seed = 20250810;
    int workers = 1;
    size_t trials = 0;    // 0 = experiment default
};

struct ExperimentResult {
    std::string name;
    bool pass = true;
    std::vector<std::string> notes; // one line per in-experiment assertion
};

/// Exhaustive per-range audit of one built summary against the exact
/// fractions: estimate guarantee, per-round inclusion/exclusion sandwich,
/// removal monotonicity, hit-set property of stored points, and the
/// consistency of the query-path membership rule with the build's own
/// removal record.
struct GuaranteeReport {
    uint64_t eq1_violations = 0;
    uint64_t sandwich_violations = 0;
    uint64_t membership_mismatches = 0;
    uint64_t x_size_mismatches = 0;
    bool removal_monotone = true;
    uint64_t net_misses = 0; // ranges above rho_effective with no stored point
    Rational worst_ratio{0}; // max |xbar - tau| / (eps * max(rho, xbar))
    bool ok() const {
        return eq1_violations == 0 && sandwich_violations == 0 && membership_mismatches == 0 &&
               x_size_mismatches == 0 && removal_monotone && net_misses == 0;
    }
};

GuaranteeReport check_guarantee(const RangeSpace& rs, const Summary& s);

ExperimentResult run_guarantee(const ExperimentOptions& opts);
ExperimentResult run_lowerbound(const ExperimentOptions& opts);
ExperimentResult run_reconstruct(const ExperimentOptions& opts);
ExperimentResult run_scaling(const ExperimentOptions& opts, bool ball);
ExperimentResult run_size_vs_baseline(const ExperimentOptions& opts);
ExperimentResult run_bridging(const ExperimentOptions& opts);
ExperimentResult run_facts(const ExperimentOptions& opts);
ExperimentResult run_calibrate(const ExperimentOptions& opts);

/// Dispatch by name: guarantee, lowerbound, reconstruct, scaling-ball,
/// scaling-box, size-vs-baseline, bridging, facts, calibrate.
ExperimentResult run_experiment(const std::string& name, const ExperimentOptions& opts);

} // namespace rhosum
