#pragma once
#include <string>
#include <vector>

namespace nlgrad {

// One end-to-end check of the numerical pipeline. id runs 1..12; detail is a
// short human-readable measurement summary whether or not the check passed.
struct CriterionResult {
    int id = 0;
    bool pass = false;
    std::string detail;
};

inline constexpr int kCriterionCount = 12;

// Runs a single criterion. scratch_dir is only touched by the criteria that
// write and compare artifact files; it is created on demand.
CriterionResult run_criterion(int id, const std::string& scratch_dir);

// Formats the standard one-line report for a result.
std::string format_criterion_line(const CriterionResult& r);

// Writes the deterministic artifact set (kernel dump, small constant-
// convolution solve, small localization sweep, seeded eigenvalue constants)
// into dir. The same routine backs the determinism criterion, which runs it
// twice and compares bytes.
void write_selftest_artifacts(const std::string& dir);

} // namespace nlgrad
