#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "aztec/spectral.hpp"

namespace aztec {

struct SurfacePoint {
    cd z;
    cd w;
};

// On-curve residual |w^2 - Tr Phi(z) w + 1| scaled by max(1, |w|^2).
double on_curve_residual(const WeightConfig& cfg, cd z, cd w);

// The two solutions of w^2 - Tr Phi(z) w + 1 = 0, |w_plus| >= |w_minus|
// (ties by larger real part). Throws Error("BranchPoint...") at roots of p
// and Error("PoleAtZ...") at z in {0, 1}.
std::pair<cd, cd> w_branches(const WeightConfig& cfg, cd z);
std::pair<cd, cd> w_branches(const SpectralData& sd, cd z);

// Analytic continuation by nearest-root tracking with adaptive bisection.
// Throws Error("AmbiguousContinuation...") when refinement is exhausted.
std::vector<SurfacePoint> continue_along(const WeightConfig& cfg,
                                         const std::vector<cd>& z_path,
                                         const SurfacePoint& start);
// Single continuation step used internally (and by tests).
cd continue_step(const WeightConfig& cfg, cd z0, cd w0, cd z1, int depth = 0);

// Winding-certificate record for a constructed contour (re-checked in tests).
struct ContourCertificate {
    double z_winding = 0;          // (a) total arg increase / (2 pi) around z = 0
    int cut_crossings = 0;         // (b) negative-axis crossings
    double max_crossing_radius = 0;
    bool sheet_pattern_ok = false; // (c) |w| large near z=1 on rev 1, small on rev 2
    double min_gap = 0;            // (d) same-angle radial gap to the partner contour
    double closure = 0;            // (e) |w(end) - w(start)| relative
    double max_residual = 0;       // on-curve residual over nodes
    bool passed = false;
    std::string detail;
};

// A closed angle-parameterized contour on the spectral curve. theta runs over
// [0, 4 pi) (two z-revolutions); dz holds z'(theta) * (4 pi / n) per node.
struct Contour {
    std::vector<double> theta;
    std::vector<cd> z, w, dz;
    std::vector<int> crossings;    // node indices nearest the cut crossings
    ContourCertificate certified;
    size_t size() const { return z.size(); }
};

// Radius-profile parameters for the generic (small-N) family: a smooth
// log-trigonometric interpolation through r_big (angle 0), r_cut (crossings)
// and r_small (angle 2 pi). gamma_s uses shrink * the gamma_l radii.
struct ContourShape {
    double r_big = 1.5;
    double r_cut = 0.0;   // 0 => 0.5 |z_1| (or 0.5 when ell = 1)
    double r_small = 0.5;
    double shrink = 0.8;
    int nodes_per_rev = 512;
};

// Builds the certified pair (gamma_s inside gamma_l). scale in (0, 1] shrinks
// the radii toward 1 (used by the shape-independence tests). Throws
// Error("GenusDegenerate...") or Error("ContourInfeasible...").
std::pair<Contour, Contour> make_contours(const WeightConfig& cfg, const SpectralData& sd,
                                          double scale = 1.0, ContourShape shape = {});

// Builds one contour from an explicit smooth radius profile r(theta) given by
// log r(theta) = c0 + c1 cos(theta/2) + c2 cos(theta) (4 pi periodic).
Contour contour_from_radii(const WeightConfig& cfg, double r_big, double r_cut,
                           double r_small, int nodes);

// Re-runs the certification checks against a partner contour (nullptr: skip
// the gap check). gap_min is the required same-angle radial separation.
ContourCertificate certify_contour(const WeightConfig& cfg, const SpectralData& sd,
                                   const Contour& c, const Contour* partner,
                                   double gap_min);

// CSV export: angle, Re z, Im z, Re w, Im w, sheet tag (+1 big / -1 small).
void write_contour_csv(const Contour& c, const std::string& path);

}  // namespace aztec
