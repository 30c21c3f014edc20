#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hermspec {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    /// Headline metric compared against `tolerance` (direction depends on the criterion).
    double value = 0.0;
    double tolerance = 0.0;
    /// Secondary metrics, written to the details CSV in insertion order.
    std::vector<std::pair<std::string, double>> details;
    /// Free-text reason for a failure; empty on success.
    std::string failure;
    /// Wall time. Reported on the console only so CSV output stays reproducible.
    double seconds = 0.0;
};

struct SuiteOptions {
    std::uint64_t seed = 20240601;
    /// Degrees for the two-dimensional Besicovitch runs. The full sweep dominates the
    /// suite's runtime (about a minute); trim it for quick runs.
    std::vector<int> besicovitch_d2_degrees = {1, 2, 3, 4, 5, 6, 7, 8, 9};
};

/// Acceptance criteria 1–12 in order. Criterion 13 (determinism across processes)
/// needs two independent runs and is evaluated by the caller.
std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options);

CriterionResult criterion_orthonormality();
CriterionResult criterion_decay(std::uint64_t seed);
CriterionResult criterion_concentration(std::uint64_t seed);
CriterionResult criterion_bernstein(std::uint64_t seed);
CriterionResult criterion_bad_mass(std::uint64_t seed);
CriterionResult criterion_sharp_constant();
CriterionResult criterion_bound_direction();
CriterionResult criterion_counterexample();
CriterionResult criterion_gramian();
CriterionResult criterion_hum(std::uint64_t seed);
CriterionResult criterion_besicovitch(const std::vector<int>& d2_degrees);
CriterionResult criterion_scaling(std::uint64_t seed);

/// criterion,name,status,value,tolerance
std::string summary_csv(const std::vector<CriterionResult>& results);
/// criterion,key,value
std::string details_csv(const std::vector<CriterionResult>& results);
/// "AC<id> pass|fail <value> <tolerance>"
std::string manifest_line(const CriterionResult& result);
std::string criterion_label(int id);

}  // namespace hermspec
