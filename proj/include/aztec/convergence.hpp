#pragma once

#include <string>
#include <vector>

#include "aztec/gue.hpp"
#include "aztec/sampler.hpp"

namespace aztec {

struct KernelRow {
    ScaledPoint p1, p2;
    long N = 0;
    double finite_value = 0, limit_value = 0;
    double abs_err = 0, rel_err = 0;
    double quad_error = 0;
    bool boundedness_only = false;  // mu1 == mu2 rows
    bool failed = false;
};

struct ProcessRow {
    std::string statistic;
    double empirical = 0, predicted = 0, stderr_ = 0, zscore = 0;
    double threshold = 0;  // in stderr units (or absolute for KS rows)
    bool failed = false;
};

struct ConvergenceReport {
    // provenance
    WeightConfig cfg;
    std::uint64_t seed = 0;
    long mc_count = 0;
    double tol = 0;
    std::vector<KernelRow> kernel_rows;
    std::vector<ProcessRow> process_rows;
    bool any_failed() const;
    std::string summary() const;
    void write_csv(const std::string& path) const;
};

// Finite-N rescaled kernel against nu sigma^{-1} K_GUE on a grid, across the
// N-list. The limit is evaluated at the actual lattice positions (floor + mark
// offset); convergence is asserted as a non-increasing trend (20% slack) with
// final rel_err < 0.05, where rel_err floors the denominator at 0.1 * the grid
// scale. Equal-mu rows are boundedness-only.
ConvergenceReport kernel_convergence(const WeightConfig& cfg,
                                     const std::vector<std::pair<ScaledPoint, ScaledPoint>>& grid,
                                     const std::vector<long>& n_list, double tol = 1e-6);

// Monte Carlo process-level checks against the marked GUE-corners predictions.
ConvergenceReport process_convergence(const WeightConfig& cfg, long N, long count,
                                      std::uint64_t seed, int threads = 0);

// Default grid used by the CLI: t <= 3, mu in {-1, -0.3, 0.4, 1.1}, j in {0,1}.
std::vector<std::pair<ScaledPoint, ScaledPoint>> default_kernel_grid();

}  // namespace aztec
