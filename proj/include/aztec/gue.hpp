#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aztec/kernel.hpp"

namespace aztec {

// K_GUE by double quadrature: z1 on a circle around the origin, z2 on a
// vertical line placed right of the circle when mu1 <= mu2 and left otherwise
// (the diagonal adopts the mu1 < mu2 placement).
KernelValue k_gue(long t1, double mu1, long t2, double mu2, double tol = 1e-8);

// Forced line placement (+1 right of the circle, -1 left); the automatic rule
// uses right when mu1 <= mu2. Exposed for the residue-identity property test.
KernelValue k_gue_placed(long t1, double mu1, long t2, double mu2, int side,
                         double tol = 1e-8);

// Marked kernel: (theta(t1,mu1) delta_{1 j1} + (1-theta) delta_{0 j1}) K_GUE.
using ThetaFn = std::function<double(long, double)>;
KernelValue k_gue_marked(const ScaledPoint& p1, const ScaledPoint& p2, const ThetaFn& theta,
                         double tol = 1e-8);

// One draw of the corners process up to level t_max with Bernoulli marks.
struct CornersSample {
    // eig[t-1][s-1] = xi^t_s (ascending per level), mark in {0,1}
    std::vector<std::vector<double>> eig;
    std::vector<std::vector<int>> marks;
};

// Eigenvalues of the nested principal minors of one infinite-GUE prefix.
// Reproducible per (seed, index); draws are independent across indices.
CornersSample corners_sample(int t_max, const ThetaFn& theta, std::uint64_t seed,
                             std::uint64_t index);

// Kolmogorov-Smirnov distance of a sample against a reference CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
double normal_cdf(double x);

}  // namespace aztec
