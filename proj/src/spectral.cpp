#include "aztec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace aztec {

Mat2 phi(const WeightConfig& cfg, int m, cd z) {
    if (z == cd(0.0)) throw Error("PoleAtZ: z = 0");
    Mat2 out;
    int idx = ((m - 1) / 2) % cfg.ell;  // 0-based fundamental-domain column
    if (m % 2 == 1) {
        double a = cfg.alphas[idx];
        out << 1.0, 1.0 / (a * z), a, 1.0;
    } else {
        if (z == cd(1.0)) throw Error("PoleAtZ: z = 1 for even factor");
        double b = cfg.betas[idx];
        out << 1.0, 1.0 / (b * z), b, 1.0;
        out /= (1.0 - 1.0 / z);
    }
    return out;
}

Mat2 big_phi(const WeightConfig& cfg, cd z) {
    Mat2 m = Mat2::Identity();
    for (int k = 1; k <= 2 * cfg.ell; ++k) m = m * phi(cfg, k, z);
    return m;
}

Mat2 phi_prefix(const WeightConfig& cfg, int i, cd z) {
    Mat2 m = Mat2::Identity();
    for (int k = 1; k <= 2 * i; ++k) m = m * phi(cfg, k, z);
    return m;
}

Mat2 adjugate(const Mat2& m) {
    Mat2 a;
    a << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return a;
}

cd poly_eval(const std::vector<double>& coeffs, cd z) {
    cd v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
    return v;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
    std::vector<double> d;
    for (size_t k = 1; k < coeffs.size(); ++k) d.push_back(k * coeffs[k]);
    return d;
}

double SpectralData::sigma() const { return std::sqrt(sigma2); }
double SpectralData::q_at(double z) const { return poly_eval(q_coeffs, cd(z)).real(); }
double SpectralData::p_at(double z) const { return poly_eval(p_coeffs, cd(z)).real(); }
cd SpectralData::p_at(cd z) const { return poly_eval(p_coeffs, z); }

namespace {

std::vector<double> interpolate_q(const WeightConfig& cfg) {
    // q(z) = (z-1)^ell Tr Phi(z) is a degree-ell polynomial; sample it at
    // ell+1 Chebyshev points on [2, 4] and solve the Vandermonde system.
    int deg = cfg.ell;
    int n = deg + 1;
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd f(n);
    for (int k = 0; k < n; ++k) {
        double node = 3.0 + std::cos(M_PI * (2 * k + 1) / (2.0 * n));
        cd q = std::pow(cd(node) - 1.0, cfg.ell) * big_phi(cfg, cd(node)).trace();
        f(k) = q.real();
        double p = 1.0;
        for (int c = 0; c < n; ++c) {
            V(k, c) = p;
            p *= node;
        }
    }
    Eigen::VectorXd coef = V.colPivHouseholderQr().solve(f);
    return std::vector<double>(coef.data(), coef.data() + n);
}

std::vector<double> compute_p(const std::vector<double>& q, int ell) {
    // p = q^2 - 4 (z-1)^{2 ell}; the top coefficient cancels (q is monic-ish
    // times 2 at the top: q_ell = 2, see Tr Phi asymptotics), leaving degree
    // 2 ell - 1 with p(0) = 0.
    size_t n = 2 * ell + 1;
    std::vector<double> p(n, 0.0);
    for (size_t a = 0; a < q.size(); ++a)
        for (size_t b = 0; b < q.size(); ++b) p[a + b] += q[a] * q[b];
    // subtract 4 (z-1)^{2 ell}
    double binom = 1.0;
    for (int k = 0; k <= 2 * ell; ++k) {
        double sign = ((2 * ell - k) % 2 == 0) ? 1.0 : -1.0;
        p[k] -= 4.0 * sign * binom;
        binom = binom * (2 * ell - k) / (k + 1);
    }
    double scale = 0.0;
    for (double c : p) scale = std::max(scale, std::abs(c));
    if (std::abs(p[n - 1]) > 1e-9 * scale)
        throw Error("RootFindingFailed: leading coefficient of p did not cancel");
    p.pop_back();
    return p;
}

std::vector<double> real_roots_descending(const std::vector<double>& p) {
    // Companion-matrix eigenvalues, then Newton polish.
    int deg = static_cast<int>(p.size()) - 1;
    while (deg > 0 && p[deg] == 0.0) --deg;
    if (deg <= 0) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int k = 0; k < deg; ++k) comp(k, deg - 1) = -p[k] / p[deg];
    for (int k = 1; k < deg; ++k) comp(k, k - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<double> pd = poly_derivative(p);
    double scale = 1.0;
    for (double c : p) scale = std::max(scale, std::abs(c));
    std::vector<double> roots;
    for (int k = 0; k < deg; ++k) {
        cd r = es.eigenvalues()(k);
        for (int it = 0; it < 50; ++it) {
            cd f = poly_eval(p, r);
            cd df = poly_eval(std::vector<double>(pd.begin(), pd.end()), r);
            if (std::abs(df) == 0.0) break;
            cd step = f / df;
            r -= step;
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r))) break;
        }
        // double roots (degenerate genus) perturb eigenvalues by O(sqrt(eps));
        // realness cannot be certified tighter than ~1e-6 in double precision
        if (std::abs(r.imag()) > 1e-5 * std::max(1.0, std::abs(r))) {
            std::ostringstream os;
            os << "RootFindingFailed: complex root of p at " << r;
            throw Error(os.str());
        }
        double rr = r.real();
        double resid = std::abs(poly_eval(p, cd(rr)));
        double local = std::max(scale, std::abs(std::pow(rr, deg)) * std::abs(p[deg]));
        if (resid > 1e-10 * local) {
            std::ostringstream os;
            os << "RootFindingFailed: residual " << resid << " at root " << rr;
            throw Error(os.str());
        }
        roots.push_back(rr);
    }
    std::sort(roots.begin(), roots.end(), std::greater<double>());
    return roots;
}

}  // namespace

SpectralData q_and_p(const WeightConfig& cfg) {
    validate_config(cfg);
    SpectralData sd;
    sd.cfg = cfg;
    sd.q_coeffs = interpolate_q(cfg);
    sd.p_coeffs = compute_p(sd.q_coeffs, cfg.ell);
    sd.roots = real_roots_descending(sd.p_coeffs);
    if (static_cast<int>(sd.roots.size()) != 2 * cfg.ell - 1)
        throw Error("RootFindingFailed: wrong root count for p");
    // z_0 = 0 should be the first (largest) root.
    if (std::abs(sd.roots.front()) > 1e-8)
        throw Error("RootFindingFailed: missing root at z = 0");
    sd.roots.front() = 0.0;
    for (size_t k = 1; k < sd.roots.size(); ++k)
        if (!(sd.roots[k] < 0.0))
            throw Error("RootFindingFailed: root ordering violated");
    // Degenerate genus: coinciding pair boundaries (z_{2k-1}, z_{2k}).
    sd.genus_maximal = true;
    for (size_t k = 1; k + 1 < sd.roots.size(); k += 2)
        if (std::abs(sd.roots[k] - sd.roots[k + 1]) <
            1e-6 * std::max(1.0, std::abs(sd.roots[k])))
            sd.genus_maximal = false;
    sd.B = sd.q_at(1.0);
    return sd;
}

double tau_closed_form(const WeightConfig& cfg) {
    double t = 0.0;
    for (int k = 1; k <= cfg.ell; ++k) {
        double ak = cfg.alpha(k) / cfg.beta(k - 1);
        double bk = cfg.beta(k) / cfg.alpha(k);
        double ak1 = cfg.alpha(k + 1) / cfg.beta(k);
        t += (1 + ak + ak * bk + ak * bk * ak1) / ((1 + ak) * (1 + bk) * (1 + ak1));
    }
    return t;
}

double sigma2_series_form(const WeightConfig& cfg) {
    double s = 0.0;
    for (int k = 1; k <= cfg.ell; ++k) {
        double ak = cfg.alpha(k) / cfg.beta(k - 1);
        double bk = cfg.beta(k) / cfg.alpha(k);
        double ak1 = cfg.alpha(k + 1) / cfg.beta(k);
        double num = (1 + ak + ak * bk + ak * bk * ak1) * (bk + ak1 + bk * ak1 + ak * ak1);
        double den = (1 + ak) * (1 + bk) * (1 + ak1);
        s += num / (den * den);
    }
    return s;
}

double sigma2_curvature(const WeightConfig& cfg) {
    SpectralData sd = q_and_p(cfg);
    double q1 = sd.q_at(1.0);
    auto qd = poly_derivative(sd.q_coeffs);
    auto qdd = poly_derivative(qd);
    double qp = poly_eval(qd, cd(1.0)).real();
    double qpp = poly_eval(qdd, cd(1.0)).real();
    double tau = qp / q1;
    double s2 = qpp / q1 - tau * tau + tau;
    // d^2/dz^2 [4 (z-1)^{2 ell}] vanishes at z = 1 only for ell >= 2; the
    // ell = 1 curvature carries the corresponding correction.
    if (cfg.ell == 1) s2 -= 2.0 / (q1 * q1);
    return s2;
}

SpectralData make_spectral_data(const WeightConfig& cfg) {
    SpectralData sd = q_and_p(cfg);
    double q1 = sd.q_at(1.0);
    auto qd = poly_derivative(sd.q_coeffs);
    auto qdd = poly_derivative(qd);
    double qp = poly_eval(qd, cd(1.0)).real();
    double qpp = poly_eval(qdd, cd(1.0)).real();
    double tau_d = qp / q1;
    double tau_c = tau_closed_form(cfg);
    auto pd = poly_derivative(sd.p_coeffs);
    double tau_p = 0.5 * poly_eval(pd, cd(1.0)).real() / sd.p_at(1.0);
    double ref = std::max({std::abs(tau_c), std::abs(tau_d), std::abs(tau_p)});
    if (std::abs(tau_c - tau_d) > 1e-10 * ref || std::abs(tau_c - tau_p) > 1e-10 * ref) {
        std::ostringstream os;
        os << "CrossCheckFailed: tau closed=" << tau_c << " deriv=" << tau_d
           << " p-form=" << tau_p;
        throw Error(os.str());
    }
    sd.tau = tau_c;
    if (!(sd.tau > 0.0 && sd.tau < cfg.ell))
        throw Error("CrossCheckFailed: tau outside (0, ell)");
    sd.sigma2 = qpp / q1 - tau_d * tau_d + tau_d;
    if (cfg.ell == 1) sd.sigma2 -= 2.0 / (q1 * q1);
    sd.sigma2_series = sigma2_series_form(cfg);
    if (!(sd.sigma2 > 0.0)) throw Error("CrossCheckFailed: sigma2 <= 0");
    return sd;
}

double theta_fn(const WeightConfig& cfg, long t) {
    long ka = cfg.ell + 1 - t, kb = cfg.ell - t;  // indices are periodic
    double r = cfg.alpha(static_cast<int>(((ka - 1) % cfg.ell + cfg.ell) % cfg.ell + 1)) /
               cfg.beta(static_cast<int>(((kb - 1) % cfg.ell + cfg.ell) % cfg.ell + 1));
    return r / (1.0 + r);
}

double nu_fn(const WeightConfig& cfg, long t, int j) {
    double th = theta_fn(cfg, t);
    return j == 1 ? th : 1.0 - th;
}

double log_gauge(const SpectralData& sd, long x, int i, long /*y*/, int j, long N) {
    const WeightConfig& cfg = sd.cfg;
    double lg = 0.5 * (cfg.ell * static_cast<double>(x) + i) * std::log(static_cast<double>(N));
    lg += static_cast<double>(x) * std::log(sd.B);
    lg += (cfg.ell * static_cast<double>(x) + i) * std::log(sd.sigma());
    for (int m = 1; m <= i; ++m) {
        lg += std::log(1.0 + cfg.beta(m) / cfg.alpha(m));
        lg += std::log(1.0 + cfg.alpha(m + 1) / cfg.beta(m));
    }
    lg -= j * std::log(cfg.alpha(i + 1));
    return lg;
}

Mat2 q_matrix(const WeightConfig& cfg, cd z, cd w) {
    Mat2 F = big_phi(cfg, z);
    cd tr = F.trace();
    cd resid = w * w - tr * w + 1.0;
    double scale = std::max(1.0, std::norm(w));
    if (std::abs(resid) > 1e-8 * scale) {
        std::ostringstream os;
        os << "NotOnCurve: |w^2 - Tr Phi w + 1| = " << std::abs(resid);
        throw Error(os.str());
    }
    cd den = 2.0 * w - tr;
    if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(w)))
        throw Error("BranchPointDivision: 2w - Tr Phi ~ 0");
    Mat2 m = w * Mat2::Identity() - F;
    return adjugate(m) / den;
}

}  // namespace aztec
