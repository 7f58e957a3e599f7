#include "aztec/surface.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace aztec {

double on_curve_residual(const WeightConfig& cfg, cd z, cd w) {
    cd tr = big_phi(cfg, z).trace();
    return std::abs(w * w - tr * w + 1.0) / std::max(1.0, std::norm(w));
}

std::pair<cd, cd> w_branches(const WeightConfig& cfg, cd z) {
    if (z == cd(0.0) || z == cd(1.0)) throw Error("PoleAtZ: z in {0, 1}");
    cd tr = big_phi(cfg, z).trace();
    cd disc = tr * tr - 4.0;
    cd d = std::sqrt(disc);
    cd w1 = (tr + d) / 2.0, w2 = (tr - d) / 2.0;
    // guard against cancellation in the small root: w1 w2 = 1
    if (std::abs(w1) >= std::abs(w2)) {
        w2 = 1.0 / w1;
    } else {
        std::swap(w1, w2);
        w2 = 1.0 / w1;
    }
    if (std::abs(w1) == std::abs(w2) && w2.real() > w1.real()) std::swap(w1, w2);
    return {w1, w2};
}

std::pair<cd, cd> w_branches(const SpectralData& sd, cd z) {
    for (double r : sd.roots)
        if (std::abs(z - r) < 1e-9) throw Error("BranchPoint: z at a root of p");
    return w_branches(sd.cfg, z);
}

cd continue_step(const WeightConfig& cfg, cd z0, cd w0, cd z1, int depth) {
    auto [w1, w2] = w_branches(cfg, z1);
    double d1 = std::abs(w1 - w0), d2 = std::abs(w2 - w0);
    if (3.0 * std::min(d1, d2) <= std::max(d1, d2) || depth >= 40)
        return d1 <= d2 ? w1 : w2;
    cd zm = 0.5 * (z0 + z1);
    cd wm = continue_step(cfg, z0, w0, zm, depth + 1);
    return continue_step(cfg, zm, wm, z1, depth + 1);
}

std::vector<SurfacePoint> continue_along(const WeightConfig& cfg,
                                         const std::vector<cd>& z_path,
                                         const SurfacePoint& start) {
    if (on_curve_residual(cfg, start.z, start.w) > 1e-8)
        throw Error("NotOnCurve: continuation start off the curve");
    std::vector<SurfacePoint> out;
    out.reserve(z_path.size());
    cd zp = start.z, wp = start.w;
    for (cd z : z_path) {
        cd w = continue_step(cfg, zp, wp, z);
        auto [wa, wb] = w_branches(cfg, z);
        double da = std::abs(w - wa), db = std::abs(w - wb);
        double sep = std::abs(wa - wb);
        if (std::min(da, db) > 0.45 * sep && sep > 0)
            throw Error("AmbiguousContinuation: branch tracking lost");
        out.push_back({z, w});
        zp = z;
        wp = w;
    }
    return out;
}

namespace {

struct Profile {
    double c0, c1, c2;  // log r = c0 + c1 cos(theta/2) + c2 cos(theta)
    double r(double th) const { return std::exp(c0 + c1 * std::cos(th / 2) + c2 * std::cos(th)); }
    double dlogr(double th) const { return -c1 * std::sin(th / 2) / 2 - c2 * std::sin(th); }
};

Profile fit_profile(double r_big, double r_cut, double r_small) {
    // Conditions: r(0) = r_big, r(pi) = r(3 pi) = r_cut, r(2 pi) = r_small.
    double A = std::log(r_big), B = std::log(r_small), C = std::log(r_cut);
    Profile p;
    p.c1 = (A - B) / 2;
    p.c0 = (A + B) / 4 + C / 2;
    p.c2 = (A + B) / 4 - C / 2;
    return p;
}

}  // namespace

Contour contour_from_radii(const WeightConfig& cfg, double r_big, double r_cut,
                           double r_small, int nodes) {
    Profile prof = fit_profile(r_big, r_cut, r_small);
    Contour c;
    int n = nodes;
    c.theta.resize(n);
    c.z.resize(n);
    c.dz.resize(n);
    double dth = 4.0 * M_PI / n;
    for (int k = 0; k < n; ++k) {
        double th = k * dth;
        double r = prof.r(th);
        cd e = std::exp(cd(0.0, th));
        c.theta[k] = th;
        c.z[k] = r * e;
        c.dz[k] = (prof.dlogr(th) + cd(0.0, 1.0)) * c.z[k] * dth;  // z'(th) dth
    }
    // continue w from the large branch at theta = 0
    c.w.resize(n);
    cd w0 = w_branches(cfg, c.z[0]).first;
    c.w[0] = w0;
    cd zp = c.z[0], wp = w0;
    for (int k = 1; k < n; ++k) {
        c.w[k] = continue_step(cfg, zp, wp, c.z[k]);
        zp = c.z[k];
        wp = c.w[k];
    }
    c.crossings = {n / 4 * 1, n / 4 * 3};  // theta = pi and 3 pi
    return c;
}

ContourCertificate certify_contour(const WeightConfig& cfg, const SpectralData& sd,
                                   const Contour& c, const Contour* partner,
                                   double gap_min) {
    ContourCertificate cert;
    std::ostringstream detail;
    int n = static_cast<int>(c.size());
    // (a) winding of the z-projection around 0
    double wind = 0;
    for (int k = 0; k < n; ++k) {
        cd r = c.z[(k + 1) % n] / c.z[k];
        wind += std::arg(r);
    }
    cert.z_winding = wind / (2 * M_PI);
    // (b) negative-axis crossings and their radii
    cert.cut_crossings = 0;
    cert.max_crossing_radius = 0;
    for (int k = 0; k < n; ++k) {
        cd a = c.z[k], b = c.z[(k + 1) % n];
        if (a.imag() == 0.0) continue;
        if ((a.imag() > 0) != (b.imag() > 0)) {
            double t = a.imag() / (a.imag() - b.imag());
            double xc = a.real() + t * (b.real() - a.real());
            if (xc < 0) {
                ++cert.cut_crossings;
                cert.max_crossing_radius = std::max(cert.max_crossing_radius, -xc);
            }
        }
    }
    // (c) sheet pattern: |w| > 1 where rev-1 passes nearest z = 1, |w| < 1 and
    // |z| < 1 where rev-2 does.
    int k1 = 0, k2 = n / 2;
    cert.sheet_pattern_ok = std::abs(c.w[k1]) > 1.0 && std::abs(c.w[k2]) < 1.0 &&
                            std::abs(c.z[k2]) < 1.0 && std::abs(c.z[k1]) > 1.0;
    // (d) pointwise same-angle radial gap
    cert.min_gap = 1e300;
    if (partner && partner->size() == c.size()) {
        for (int k = 0; k < n; ++k)
            cert.min_gap = std::min(cert.min_gap, std::abs(std::abs(c.z[k]) - std::abs(partner->z[k])));
    } else if (partner) {
        cert.min_gap = 0;  // mismatched parameterizations: report failure
    }
    // (e) closure of the continuation
    cd wc = continue_step(cfg, c.z[n - 1], c.w[n - 1], c.z[0]);
    cert.closure = std::abs(wc - c.w[0]) / std::max(1.0, std::abs(c.w[0]));
    cert.max_residual = 0;
    for (int k = 0; k < n; ++k)
        cert.max_residual = std::max(cert.max_residual, on_curve_residual(cfg, c.z[k], c.w[k]));
    double z1cap = sd.has_z1() ? sd.abs_z1() : 1e300;
    bool crossings_ok = cert.cut_crossings == 2 && cert.max_crossing_radius < z1cap;
    bool gap_ok = !partner || cert.min_gap >= gap_min;
    cert.passed = std::abs(cert.z_winding - 2.0) < 1e-6 && crossings_ok &&
                  cert.sheet_pattern_ok && gap_ok && cert.closure < 1e-8 &&
                  cert.max_residual < 1e-8;
    if (!cert.passed) {
        detail << "winding=" << cert.z_winding << " crossings=" << cert.cut_crossings
               << " max_cross_r=" << cert.max_crossing_radius << " (cap " << z1cap << ")"
               << " sheet_ok=" << cert.sheet_pattern_ok << " min_gap=" << cert.min_gap
               << " closure=" << cert.closure << " resid=" << cert.max_residual;
        cert.detail = detail.str();
    }
    return cert;
}

std::pair<Contour, Contour> make_contours(const WeightConfig& cfg, const SpectralData& sd,
                                          double scale, ContourShape shape) {
    if (!sd.genus_maximal)
        throw Error("GenusDegenerate: contour construction requires maximal genus");
    double z1 = sd.has_z1() ? sd.abs_z1() : std::numeric_limits<double>::infinity();
    double r_cut = shape.r_cut > 0 ? shape.r_cut : (sd.has_z1() ? 0.5 * sd.abs_z1() : 0.5);
    double r_big = 1.0 + (shape.r_big - 1.0) * scale;
    double r_small = 1.0 - (1.0 - shape.r_small) * scale;
    if (!(r_big > 1.0) || !(r_small < 1.0) || !(r_cut < z1))
        throw Error("ContourInfeasible: radii violate r_big > 1 > r_small, r_cut < |z_1|");
    double shrink = shape.shrink;
    if (!(shrink * r_big > 1.0)) {
        std::ostringstream os;
        os << "ContourInfeasible: shrunken r_big " << shrink * r_big
           << " fails to enclose z = 1";
        throw Error(os.str());
    }
    int nodes = 2 * shape.nodes_per_rev;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Contour gl = contour_from_radii(cfg, r_big, r_cut, r_small, nodes);
        Contour gs = contour_from_radii(cfg, shrink * r_big, shrink * r_cut,
                                        shrink * r_small, nodes);
        double gap_min = 0.05 * (1.0 - shrink) * r_small;
        gl.certified = certify_contour(cfg, sd, gl, &gs, gap_min);
        gs.certified = certify_contour(cfg, sd, gs, &gl, gap_min);
        if (gl.certified.passed && gs.certified.passed) return {gs, gl};
        nodes *= 2;
    }
    Contour gl = contour_from_radii(cfg, r_big, r_cut, r_small, nodes);
    Contour gs = contour_from_radii(cfg, shrink * r_big, shrink * r_cut, shrink * r_small, nodes);
    gl.certified = certify_contour(cfg, sd, gl, &gs, 0.0);
    gs.certified = certify_contour(cfg, sd, gs, &gl, 0.0);
    throw Error("ContourInfeasible: certification failed: " + gl.certified.detail + " | " +
                gs.certified.detail);
}

void write_contour_csv(const Contour& c, const std::string& path) {
    std::ofstream out(path);
    out.precision(17);
    out << "theta,re_z,im_z,re_w,im_w,sheet\n";
    for (size_t k = 0; k < c.size(); ++k) {
        int sheet = std::abs(c.w[k]) >= 1.0 ? 1 : -1;
        out << c.theta[k] << ',' << c.z[k].real() << ',' << c.z[k].imag() << ','
            << c.w[k].real() << ',' << c.w[k].imag() << ',' << sheet << '\n';
    }
}

}  // namespace aztec
