#pragma once

#include "aztec/surface.hpp"

namespace aztec {

struct KernelValue {
    cd value{0.0, 0.0};
    double quad_error = 0.0;
    long node_count = 0;
};

// Kernel coordinates of a black vertex: (ell x + i, 2y + j) with
// x in [0, 2N), i in [0, ell), y in [0, ell N), j in {0, 1}.
struct BlackIndex {
    long x = 0;
    int i = 0;
    long y = 0;
    int j = 0;

    long level(int ell) const { return static_cast<long>(ell) * x + i; }
    Vertex vertex(int ell) const {
        return Vertex{Color::black, static_cast<int>(2 * (ell * x + i)),
                      static_cast<int>(2 * (2 * y + j) + 1)};
    }
    static BlackIndex from_level_pos(int ell, long level, long pos) {
        BlackIndex b;
        b.x = level / ell;
        b.i = static_cast<int>(level % ell);
        b.y = pos / 2;
        b.j = static_cast<int>(pos % 2);
        return b;
    }
};

// Scaled-window coordinates near the right turning point.
struct ScaledPoint {
    long t = 1;      // level counted from the right, t >= 1
    double mu = 0;   // vertical fluctuation coordinate
    int j = 0;       // mark
};

// The (j1+1, j2+1) entry of adj(A_{i1}(z1)) Q(z1,w1) Q(z2,w2) A_{i2}(z2),
// the matrix part of the double-contour integrand. The prefix inverses use
// the adjugate (det A_i = 1), never numeric inversion.
cd matrix_integrand(const WeightConfig& cfg, int i1, int j1, int i2, int j2,
                    const SurfacePoint& p1, const SurfacePoint& p2);
Mat2 matrix_integrand_full(const WeightConfig& cfg, int i1, int i2,
                           const SurfacePoint& p1, const SurfacePoint& p2);

// K_Int(b1; b2) for the size-2*ell*N diamond by contour quadrature over the
// certified pair (gamma_s, gamma_l). log_prefactor is added to the integrand
// exponent (0 for the plain kernel; the gauge ratio for the rescaled form).
//
// Orientation note: the kernel is stored in the orientation for which the
// gauged rescaled entries converge to nu(t2,j2) sigma^{-1} K_GUE(t1,.;t2,.)
// pointwise; z1 on gamma_s carries (i1, x1, y1) and z2 on gamma_l carries
// (i2, x2, y2), and the single integral is present when t1 > t2. Correlation
// determinants are orientation-independent.
KernelValue k_int(const WeightConfig& cfg, const SpectralData& sd, const Contour& gamma_s,
                  const Contour& gamma_l, const BlackIndex& b1, const BlackIndex& b2,
                  double tol = 1e-8, double log_prefactor = 0.0);

// rho_k from k_int determinants at the given black points.
double correlation_from_kernel(const WeightConfig& cfg, const SpectralData& sd,
                               const Contour& gamma_s, const Contour& gamma_l,
                               const std::vector<BlackIndex>& pts, double tol = 1e-8);

// g(b1)/g(b2) * sqrt(N) * K_Int(b1; b2) at the scaled coordinates
// ell x + i = 2 ell N - t, y = floor(N tau + sqrt(N) mu). Contours are built
// per evaluation, adapted to the saddle at z = 1 (exponent-certified), so the
// evaluation stays conditioned at large N.
KernelValue rescaled_kernel(const WeightConfig& cfg, const SpectralData& sd,
                            const ScaledPoint& p1, const ScaledPoint& p2, long N,
                            double tol = 1e-6);

// The lattice positions the rescaled kernel actually evaluates at;
// mu_actual = (y - N tau)/sqrt(N) + j/(2 sqrt(N)) (the u = 2y + j embedding).
BlackIndex scaled_to_black(const WeightConfig& cfg, const SpectralData& sd,
                           const ScaledPoint& p, long N);
double mu_actual(const SpectralData& sd, const ScaledPoint& p, long N);

}  // namespace aztec
