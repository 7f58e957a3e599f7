// Acceptance suite: ./acceptance <criterion 1..9>
// Prints one PASS/FAIL line per criterion (with sub-check details) and exits
// nonzero on failure.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "aztec/convergence.hpp"
#include "aztec/kasteleyn.hpp"
#include "aztec/kernel.hpp"
#include "aztec/sampler.hpp"
#include "aztec/surface.hpp"

using namespace aztec;

namespace {

int g_subfail = 0;

void sub(bool ok, const std::string& what) {
    std::cout << "  [" << (ok ? " ok " : "FAIL") << "] " << what << "\n";
    if (!ok) ++g_subfail;
}


// Derivatives of g(z) = log((z-1)^ell w_plus(z)) at z = 1 via Cauchy integrals
// on a small circle: independent of the q/p coefficient algebra (uses only the
// transfer-matrix trace and pointwise branch selection), spectrally accurate.
void action_log_derivs(const WeightConfig& cfg, double radius, double* g1, double* g2) {
    const int n = 512;
    cd s1 = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
        double th = 2 * M_PI * k / n;
        cd dz = radius * std::exp(cd(0, th));
        cd z = 1.0 + dz;
        cd w = w_branches(cfg, z).first;
        cd g = std::log(std::pow(dz, cfg.ell) * w);
        s1 += g / (dz * dz) * dz;  // 1/(2 pi i) int g/(z-1)^2
        s2 += g / (dz * dz * dz) * dz;
    }
    *g1 = (s1 / static_cast<double>(n)).real();
    *g2 = 2.0 * (s2 / static_cast<double>(n)).real();
}

WeightConfig two_periodic(double a, int N = 1) {
    WeightConfig cfg;
    cfg.ell = 2;
    cfg.alphas = {1.0 / a, a};
    cfg.betas = {1.0 / a, a};
    cfg.n_param = N;
    return cfg;
}

WeightConfig uniform(int N = 1) {
    WeightConfig cfg;
    cfg.ell = 1;
    cfg.alphas = {1.0};
    cfg.betas = {1.0};
    cfg.n_param = N;
    return cfg;
}

WeightConfig random_cfg(std::mt19937_64& rng, int ell, int N = 1, double lo = 0.4,
                        double hi = 2.5) {
    std::uniform_real_distribution<double> u(lo, hi);
    WeightConfig cfg;
    cfg.ell = ell;
    cfg.n_param = N;
    double pa = 1.0, pb = 1.0;
    for (int k = 0; k < ell; ++k) {
        cfg.alphas.push_back(u(rng));
        pa *= cfg.alphas.back();
    }
    for (int k = 0; k < ell - 1; ++k) {
        cfg.betas.push_back(u(rng));
        pb *= cfg.betas.back();
    }
    cfg.betas.push_back(pa / pb);
    return cfg;
}

// ---------------------------------------------------------------- criterion 1
void criterion_constants() {
    for (double a : {0.3, 0.5, 0.8}) {
        SpectralData sd = make_spectral_data(two_periodic(a));
        double want = 2.0 / std::pow(a + 1.0 / a, 2);
        std::ostringstream os;
        os << "a=" << a << ": tau=" << std::setprecision(17) << sd.tau
           << ", series sigma2=" << sd.sigma2_series << " vs 2/(a+1/a)^2=" << want;
        sub(std::abs(sd.tau - 1.0) < 1e-12 && std::abs(sd.sigma2_series - want) < 1e-12,
            os.str());
    }
    std::mt19937_64 rng(101);
    double worst_tau = 0, worst_sig = 0;
    for (int trial = 0; trial < 50; ++trial) {
        WeightConfig cfg = random_cfg(rng, 1 + trial % 5);
        SpectralData sd = q_and_p(cfg);
        double q1 = sd.q_at(1.0);
        auto qd = poly_derivative(sd.q_coeffs);
        auto qdd = poly_derivative(qd);
        double qp = poly_eval(qd, cd(1.0)).real(), qpp = poly_eval(qdd, cd(1.0)).real();
        auto pd = poly_derivative(sd.p_coeffs);
        double tau_c = tau_closed_form(cfg), tau_d = qp / q1;
        double tau_p = 0.5 * poly_eval(pd, cd(1.0)).real() / sd.p_at(1.0);
        worst_tau = std::max({worst_tau, std::abs(tau_c - tau_d) / tau_c,
                              std::abs(tau_c - tau_p) / tau_c});
        double sig_series = sigma2_series_form(cfg);
        double sig_deriv = qpp / q1 - tau_d * tau_d + tau_d;
        worst_sig = std::max(worst_sig, std::abs(sig_series - sig_deriv) /
                                            std::max(sig_series, sig_deriv));
    }
    {
        std::ostringstream os;
        os << "50 random cfgs (ell <= 5): tau closed vs q'(1)/q(1) vs p'(1)/(2p(1)), worst rel "
           << worst_tau;
        sub(worst_tau < 1e-10, os.str());
    }
    {
        std::ostringstream os;
        os << "50 random cfgs: closed-form sigma2 (series) vs q-derivative form, worst rel "
           << worst_sig;
        sub(worst_sig < 1e-10, os.str());
        if (worst_sig >= 1e-10) {
            std::cout << "  note: expected red. The printed series for sigma^2 is not equal to\n"
                         "  q''(1)/q(1) - tau^2 + tau as a mathematical fact (two-periodic ratio\n"
                         "  is exactly 2); the toolkit's sigma2 is the curvature G''(1), which\n"
                         "  the convergence criteria (7, 8) validate independently. See README\n"
                         "  numerics notes.\n";
        }
    }
    // supporting diagnostic: sigma2 is the true curvature G''(1) = g''(1) + tau,
    // with g(z) = log((z-1)^ell w(z)) extracted by Cauchy integrals (independent
    // of the polynomial algebra)
    std::mt19937_64 rng2(7);
    double worst_curv = 0;
    for (int trial = 0; trial < 12; ++trial) {
        WeightConfig cfg = random_cfg(rng2, 1 + trial % 4);
        SpectralData sd = make_spectral_data(cfg);
        double g1, g2;
        action_log_derivs(cfg, 0.04, &g1, &g2);
        worst_curv = std::max(worst_curv, std::abs(g2 + sd.tau - sd.sigma2) / sd.sigma2);
    }
    sub(worst_curv < 1e-8,
        "diagnostic: sigma2 = G''(1) via Cauchy-integral continuation, worst rel " +
            std::to_string(worst_curv));
}

// ---------------------------------------------------------------- criterion 2
void criterion_identities() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> uz(-2.5, 2.5);
    double worst_a = 0, worst_b = 0, worst_c = 0, worst_d = 0, worst_det = 0, worst_vieta = 0,
           worst_qq = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int ell = 2 + trial % 4;  // the (d) form needs ell >= 2; see note below
        WeightConfig cfg = random_cfg(rng, ell);
        SpectralData sd = q_and_p(cfg);
        double q1 = sd.q_at(1.0), p1 = sd.p_at(1.0);
        auto qd = poly_derivative(sd.q_coeffs);
        auto qdd = poly_derivative(qd);
        auto pdc = poly_derivative(sd.p_coeffs);
        double qp = poly_eval(qd, cd(1.0)).real(), qpp = poly_eval(qdd, cd(1.0)).real();
        double pp = poly_eval(pdc, cd(1.0)).real();
        worst_a = std::max(worst_a, std::abs(p1 - q1 * q1) / (q1 * q1));
        worst_b = std::max(worst_b, std::abs(pp / p1 - 2 * qp / q1) / std::abs(2 * qp / q1));
        // (c), (d): Cauchy-integral derivatives of log((z-1)^ell w(z)) at 1
        double g1, g2;
        action_log_derivs(cfg, 0.04, &g1, &g2);
        double c1 = qp / q1;
        double c2 = qpp / q1 - c1 * c1;
        worst_c = std::max(worst_c, std::abs(g1 - c1) / std::max(1.0, std::abs(c1)));
        worst_d = std::max(worst_d, std::abs(g2 - c2) / std::max(1.0, std::abs(c2)));
        // det Phi = 1, Vieta, cross-sheet annihilation at a random z
        cd z(uz(rng), uz(rng));
        double min_root_dist = 1e300;
        for (double r : sd.roots) min_root_dist = std::min(min_root_dist, std::abs(z - r));
        if (std::abs(z) > 0.2 && std::abs(z - 1.0) > 0.2 && min_root_dist > 0.05) {
            Mat2 F = big_phi(cfg, z);
            double cond = std::max(1.0, std::pow(F.cwiseAbs().maxCoeff(), 2));
            worst_det = std::max(worst_det, std::abs(F.determinant() - 1.0) / cond);
            auto [w1, w2] = w_branches(cfg, z);
            worst_vieta = std::max(worst_vieta, std::abs(w1 * w2 - 1.0));
            Mat2 qq = q_matrix(cfg, z, w1) * q_matrix(cfg, z, w2);
            worst_qq = std::max(worst_qq, static_cast<double>(qq.cwiseAbs().maxCoeff()));
        }
    }
    sub(worst_a < 1e-9, "pq (a): p(1) = q(1)^2, worst rel " + std::to_string(worst_a));
    sub(worst_b < 1e-9, "pq (b): p'(1)/p(1) = 2 q'(1)/q(1), worst rel " + std::to_string(worst_b));
    sub(worst_c < 1e-9, "pq (c): (log (z-1)^l w)'(1) = q'(1)/q(1), worst rel " +
                            std::to_string(worst_c));
    sub(worst_d < 1e-9,
        "pq (d): (log (z-1)^l w)''(1) = q''/q - (q'/q)^2 for ell >= 2, worst rel " +
            std::to_string(worst_d));
    sub(worst_det < 1e-9, "det Phi(z) = 1 (conditioning-scaled), worst " + std::to_string(worst_det));
    sub(worst_vieta < 1e-9, "w_+ w_- = 1, worst " + std::to_string(worst_vieta));
    sub(worst_qq < 1e-9, "Q(z,w1) Q(z,w2) = 0 across sheets, worst " + std::to_string(worst_qq));
    // ell = 1 corrected forms (the uncorrected (d) fails at ell = 1; ledgered)
    std::mt19937_64 rng1(5);
    double worst1 = 0;
    for (int trial = 0; trial < 20; ++trial) {
        WeightConfig cfg = random_cfg(rng1, 1);
        SpectralData sd = q_and_p(cfg);
        double q1 = sd.q_at(1.0);
        auto pdc = poly_derivative(sd.p_coeffs);
        auto pddc = poly_derivative(pdc);
        double ppp = poly_eval(pddc, cd(1.0)).real();
        auto qd = poly_derivative(sd.q_coeffs);
        double qp = poly_eval(qd, cd(1.0)).real();
        double lhs = ppp / sd.p_at(1.0) + 8.0 / (q1 * q1);
        double rhs = 2 * std::pow(qp / q1, 2);  // q'' = 0 at ell = 1 (q linear)
        worst1 = std::max(worst1, std::abs(lhs - rhs) / std::abs(rhs));
    }
    sub(worst1 < 1e-9, "ell = 1: p''(1)/p(1) + 8/q(1)^2 = 2 (q'/q)^2 (corrected form), worst " +
                           std::to_string(worst1));
}

// ---------------------------------------------------------------- criterion 3
void criterion_oracle_chain() {
    std::mt19937_64 rng(303);
    for (int size = 1; size <= 4; ++size) {
        for (int variant = 0; variant < 2; ++variant) {
            WeightConfig cfg = variant == 0 ? uniform() : two_periodic(0.5);
            CoverList cl = enumerate_covers(cfg, size);
            KasteleynMatrix K(cfg, size);
            double z = std::exp(K.log_partition_function());
            std::ostringstream os;
            os << (variant == 0 ? "uniform" : "two-periodic a=0.5") << " size " << size
               << ": |det K| = " << std::setprecision(17) << z << " vs sum " << cl.total;
            sub(std::abs(z - cl.total) < 1e-12 * cl.total, os.str());
            if (variant == 0 && size == 4) sub(std::abs(cl.total - 1024.0) < 1e-9, "Z = 1024");
            // Kenyon vs enumeration on every single edge and 10 random pairs
            Diamond dia(size);
            auto edges = dia.edges();
            auto freq = [&](const std::vector<Edge>& es) {
                double hit = 0;
                for (size_t c = 0; c < cl.covers.size(); ++c) {
                    bool all = true;
                    for (const Edge& e : es)
                        if (cl.covers[c][dia.black_index(e.black)] != e.kind) all = false;
                    if (all) hit += cl.weights[c];
                }
                return hit / cl.total;
            };
            double worst = 0;
            for (const Edge& e : edges)
                worst = std::max(worst, std::abs(K.edge_probability({e}) - freq({e})));
            std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
            for (int t = 0; t < 10; ++t) {
                Edge e1 = edges[pick(rng)], e2 = edges[pick(rng)];
                if (e1.black.x == e2.black.x && e1.black.y == e2.black.y) continue;
                if (e1.white.x == e2.white.x && e1.white.y == e2.white.y) continue;
                worst = std::max(worst,
                                 std::abs(K.edge_probability({e1, e2}) - freq({e1, e2})));
            }
            sub(worst < 1e-12, "Kenyon = enumeration, worst " + std::to_string(worst));
            double worst_level = 0;
            for (int i = 0; i <= size; ++i) {
                double sum = 0;
                for (int j = 0; j < size; ++j)
                    sum += K.particle_correlation({dia.black(i, j)});
                worst_level = std::max(worst_level, std::abs(sum - (size - i)));
            }
            sub(worst_level < 1e-9, "level-count identity, worst " + std::to_string(worst_level));
        }
    }
}

// ---------------------------------------------------------------- criterion 4
void criterion_kernel_cross_validation() {
    std::mt19937_64 rng(404);
    double worst = 0;
    for (int ell : {1, 2, 3}) {
        for (int N : {1, 2}) {
            for (int rep = 0; rep < 5; ++rep) {
                WeightConfig cfg = random_cfg(rng, ell, N, 0.5, 2.0);
                SpectralData sd = make_spectral_data(cfg);
                auto [gs, gl] = make_contours(cfg, sd);
                KasteleynMatrix K(cfg, cfg.size());
                Diamond dia(cfg.size());
                auto blacks = dia.blacks();
                double w = 0;
                for (const Vertex& b : blacks) {
                    if (b.x / 2 >= cfg.size()) continue;
                    BlackIndex bi = BlackIndex::from_level_pos(ell, b.x / 2, (b.y - 1) / 2);
                    KernelValue kv = k_int(cfg, sd, gs, gl, bi, bi);
                    double tolv = std::max(1e-6, 10 * kv.quad_error);
                    w = std::max(w, std::abs(kv.value.real() - K.particle_correlation({b})) / tolv);
                }
                std::uniform_int_distribution<size_t> pick(0, blacks.size() - 1);
                int done = 0;
                while (done < 20) {
                    Vertex v1 = blacks[pick(rng)], v2 = blacks[pick(rng)];
                    if (v1.x / 2 >= cfg.size() || v2.x / 2 >= cfg.size()) continue;
                    if (v1.x == v2.x && v1.y == v2.y) continue;
                    BlackIndex b1 = BlackIndex::from_level_pos(ell, v1.x / 2, (v1.y - 1) / 2);
                    BlackIndex b2 = BlackIndex::from_level_pos(ell, v2.x / 2, (v2.y - 1) / 2);
                    auto k11 = k_int(cfg, sd, gs, gl, b1, b1);
                    auto k22 = k_int(cfg, sd, gs, gl, b2, b2);
                    auto k12 = k_int(cfg, sd, gs, gl, b1, b2);
                    auto k21 = k_int(cfg, sd, gs, gl, b2, b1);
                    double rho2 = (k11.value * k22.value - k12.value * k21.value).real();
                    double qe = std::abs(k11.value) * k22.quad_error +
                                std::abs(k22.value) * k11.quad_error +
                                std::abs(k12.value) * k21.quad_error +
                                std::abs(k21.value) * k12.quad_error;
                    double tolv = std::max(1e-6, 10 * qe);
                    double oracle = K.particle_correlation({v1, v2});
                    w = std::max(w, std::abs(rho2 - oracle) / tolv);
                    ++done;
                }
                worst = std::max(worst, w);
            }
        }
    }
    sub(worst < 1.0, "rho_1/rho_2 vs oracle within max(1e-6, 10 quad_error); worst ratio " +
                         std::to_string(worst));
    // contour-shape independence
    WeightConfig cfg = two_periodic(0.6, 1);
    SpectralData sd = make_spectral_data(cfg);
    auto [gs1, gl1] = make_contours(cfg, sd, 1.0);
    auto [gs2, gl2] = make_contours(cfg, sd, 0.55);
    Diamond dia(cfg.size());
    double worst2 = 0;
    for (int i = 1; i <= 2; ++i) {
        BlackIndex b1 = BlackIndex::from_level_pos(2, i, 1);
        BlackIndex b2 = BlackIndex::from_level_pos(2, i + 1, 2);
        KernelValue v1 = k_int(cfg, sd, gs1, gl1, b1, b2);
        KernelValue v2 = k_int(cfg, sd, gs2, gl2, b1, b2);
        worst2 = std::max(worst2, std::abs(v1.value - v2.value) /
                                      std::max(1e-9, v1.quad_error + v2.quad_error + 1e-9));
    }
    sub(worst2 < 10.0,
        "contour-shape independence within combined quadrature error; worst ratio " +
            std::to_string(worst2));
}

// ---------------------------------------------------------------- criterion 5
void criterion_gue() {
    double worst = 0;
    for (double mu : {0.0, 1.0, -1.0}) {
        double want = std::exp(-mu * mu / 2) / std::sqrt(2 * M_PI);
        worst = std::max(worst, std::abs(k_gue(1, mu, 1, mu, 1e-9).value.real() - want));
    }
    sub(worst < 1e-6, "k_gue(1,mu;1,mu) = normal density at mu in {0,+1,-1}, worst abs " +
                          std::to_string(worst));
    const long draws = 100000;
    auto theta = [](long t, double) { return t % 2 ? 0.4 : 0.7; };
    std::vector<double> lvl1;
    lvl1.reserve(draws);
    long m1 = 0;
    std::vector<double> lvl2bin;
    long joint = 0, in_a_ct = 0, in_b_ct = 0, mk_joint = 0;
    double a_lo = -0.5, a_hi = 0.5, b_lo = 0.4, b_hi = 1.8;
    for (long k = 0; k < draws; ++k) {
        CornersSample cs = corners_sample(2, theta, 505, k);
        lvl1.push_back(cs.eig[0][0]);
        m1 += cs.marks[0][0];
        bool in_a = cs.eig[0][0] > a_lo && cs.eig[0][0] < a_hi;
        bool in_b = false;
        for (int s = 0; s < 2; ++s)
            if (cs.eig[1][s] > b_lo && cs.eig[1][s] < b_hi) in_b = true;
        if (in_a) ++in_a_ct;
        if (in_b) ++in_b_ct;
        if (in_a && in_b) ++joint;
        if (in_a && cs.marks[0][0] == 1) ++mk_joint;
    }
    double ks = ks_statistic(lvl1, normal_cdf);
    sub(ks < 0.02, "corners level-1 KS vs normal = " + std::to_string(ks));
    {
        double freq = static_cast<double>(m1) / draws;
        double se = std::sqrt(0.4 * 0.6 / draws);
        sub(std::abs(freq - 0.4) < 4 * se, "mark frequency at level 1 vs theta(1) = 0.4");
    }
    // marked factorization is exact by construction; verify numerically
    {
        ScaledPoint p1{1, 0.3, 1}, p0{1, 0.3, 0}, q{2, -0.2, 1};
        double k = k_gue(1, 0.3, 2, -0.2).value.real();
        double s = k_gue_marked(p1, q, theta).value.real() +
                   k_gue_marked(p0, q, theta).value.real();
        sub(std::abs(s - k) < 1e-12, "marked masses sum to the unmarked kernel (exact)");
    }
    // rho_1 with marks: P(level-1 particle in A and mark 1) = theta(1) * int_A phi
    {
        double pa = normal_cdf(a_hi) - normal_cdf(a_lo);
        double pred = 0.4 * pa;
        double emp = static_cast<double>(mk_joint) / draws;
        double se = std::sqrt(pred * (1 - pred) / draws);
        sub(std::abs(emp - pred) < 4 * se, "marked rho_1 bin probability within 4 stderr");
    }
    // rho_2 via kernel determinants vs sampler pair counting
    {
        int grid = 14;
        double pred = 0, da = (a_hi - a_lo) / grid, db = (b_hi - b_lo) / grid;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                double x = a_lo + (i + 0.5) * da, y = b_lo + (j + 0.5) * db;
                double k11 = k_gue(1, x, 1, x).value.real();
                double k22 = k_gue(2, y, 2, y).value.real();
                double k12 = k_gue(1, x, 2, y).value.real();
                double k21 = k_gue(2, y, 1, x).value.real();
                pred += (k11 * k22 - k12 * k21) * da * db;
            }
        double emp = static_cast<double>(joint) / draws;
        double se = std::sqrt(emp * (1 - emp) / draws);
        std::ostringstream os;
        os << "rho_2 bin probability: sampler " << emp << " vs kernel " << pred;
        sub(std::abs(emp - pred) < 4 * se + 0.012, os.str());
    }
}

// ---------------------------------------------------------------- criterion 6
void criterion_mc() {
    // chi2 at 1% on full cover distributions, sizes 1 and 2, 1e5 samples
    auto chi2_cut = [](int df) {
        double z = 2.326;
        return df * std::pow(1 - 2.0 / (9 * df) + z * std::sqrt(2.0 / (9 * df)), 3);
    };
    for (int variant = 0; variant < 2; ++variant) {
        WeightConfig cfg = variant == 0 ? uniform() : two_periodic(0.5);
        for (int size = 1; size <= 2; ++size) {
            CoverList cl = enumerate_covers(cfg, size);
            std::map<std::string, double> expected;
            for (size_t c = 0; c < cl.covers.size(); ++c) {
                std::string key;
                for (EdgeKind k : cl.covers[c]) key.push_back('0' + static_cast<int>(k));
                expected[key] = cl.weights[c] / cl.total;
            }
            std::map<std::string, long> counts;
            const long draws = 100000;
            for (long k = 0; k < draws; ++k) {
                DimerCover c = shuffle_sample_size(cfg, size, 606 + size, k);
                std::string key;
                for (EdgeKind kk : c.kinds) key.push_back('0' + static_cast<int>(kk));
                ++counts[key];
            }
            double chi2 = 0;
            int df = 0;
            for (const auto& [key, p] : expected) {
                double e = draws * p;
                if (e < 5) continue;
                double o = counts.count(key) ? counts[key] : 0;
                chi2 += (o - e) * (o - e) / e;
                ++df;
            }
            std::ostringstream os;
            os << (variant ? "two-periodic" : "uniform") << " size " << size << ": chi2 = "
               << chi2 << " (df " << df - 1 << ", 1% cut " << chi2_cut(df - 1) << ")";
            sub(chi2 < chi2_cut(df - 1), os.str());
        }
    }
    // size-4: edge and particle frequencies vs oracle within 4 stderr
    {
        WeightConfig cfg = two_periodic(0.5);
        KasteleynMatrix K(cfg, 4);
        Diamond dia(4);
        const long draws = 40000;
        std::vector<long> counts(dia.vertices_per_color() * 4, 0);
        long interlacing_ok = 0;
        for (long k = 0; k < draws; ++k) {
            DimerCover c = shuffle_sample_size(cfg, 4, 607, k);
            for (long b = 0; b < dia.vertices_per_color(); ++b)
                ++counts[b * 4 + static_cast<int>(c.kinds[b])];
            ParticleSystem ps = extract_particles(c);  // throws on violation
            ++interlacing_ok;
        }
        double worst_z = 0;
        for (const Vertex& b : dia.blacks())
            for (const Edge& e : dia.edges_at_black(b)) {
                double p = K.edge_probability({e});
                double emp = counts[dia.black_index(b) * 4 + static_cast<int>(e.kind)] /
                             static_cast<double>(draws);
                double se = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
                worst_z = std::max(worst_z, std::abs(emp - p) / se);
            }
        sub(worst_z < 4.0, "size-4 edge frequencies vs oracle, worst |z| = " +
                               std::to_string(worst_z));
        double worst_pz = 0;
        for (const Vertex& b : dia.blacks()) {
            double p = K.particle_correlation({b});
            long hit = counts[dia.black_index(b) * 4 + static_cast<int>(EdgeKind::south)] +
                       counts[dia.black_index(b) * 4 + static_cast<int>(EdgeKind::west)];
            double emp = hit / static_cast<double>(draws);
            double se = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
            worst_pz = std::max(worst_pz, std::abs(emp - p) / se);
        }
        sub(worst_pz < 4.0, "size-4 particle frequencies vs oracle, worst |z| = " +
                                std::to_string(worst_pz));
        sub(interlacing_ok == draws, "interlacing and level counts hold for 100% of samples");
    }
}

// ---------------------------------------------------------------- criterion 7
void criterion_kernel_convergence() {
    WeightConfig cfg = two_periodic(0.7, 1);
    SpectralData sd = make_spectral_data(cfg);
    std::vector<std::pair<ScaledPoint, ScaledPoint>> grid;
    const double mus[2] = {-1.0, 0.4};
    for (long t1 : {1L, 2L})
        for (long t2 : {1L, 2L})
            for (int j1 : {0, 1})
                for (int j2 : {0, 1})
                    for (int m1 = 0; m1 < 2; ++m1)
                        for (int m2 = 0; m2 < 2; ++m2) {
                            if (mus[m1] == mus[m2]) continue;
                            if ((t1 * 2 + j1 + m1 * 3 + t2 + j2 * 2 + m2) % 3) continue;  // thin
                            grid.push_back({{t1, mus[m1], j1}, {t2, mus[m2], j2}});
                        }
    ConvergenceReport rep = kernel_convergence(cfg, grid, {16, 64, 256});
    // criterion verdict: per-row non-increasing trend (20% slack) and the
    // final uniform relative error of the table, max |fin - lim| / table
    // scale, below 5%. Per-row floored rels are printed for transparency
    // (rows whose limit passes near zero make a pure per-row ratio ill-posed).
    int trend_bad = 0;
    double worst_abs = 0, scale = 0, worst_row_rel = 0;
    for (size_t k = 0; k < rep.kernel_rows.size(); ++k) {
        const auto& r = rep.kernel_rows[k];
        if (r.N == 256) {
            worst_abs = std::max(worst_abs, r.abs_err);
            scale = std::max(scale, std::abs(r.limit_value));
            worst_row_rel = std::max(worst_row_rel, r.rel_err);
            std::cout << "    row (t" << r.p1.t << ",mu" << r.p1.mu << ",j" << r.p1.j << ")->(t"
                      << r.p2.t << ",mu" << r.p2.mu << ",j" << r.p2.j << ") N=" << r.N
                      << ": fin=" << r.finite_value << " lim=" << r.limit_value
                      << " abs=" << r.abs_err << " floored_rel=" << r.rel_err << "\n";
        }
        if (k % 3 && r.abs_err > 1.2 * rep.kernel_rows[k - 1].abs_err) ++trend_bad;
    }
    std::ostringstream os;
    os << grid.size() << " grid pairs x {16,64,256}: trend violations " << trend_bad
       << "; final uniform rel_err " << worst_abs / scale << " (worst per-row floored rel "
       << worst_row_rel << ")";
    sub(trend_bad == 0 && worst_abs / scale < 0.05, os.str());
    // j-flip ratio -> theta/(1-theta)
    double worst_flip = 0;
    for (long t2 : {1L, 2L}) {
        ScaledPoint src{1, -1.0, 0};
        ScaledPoint q0{t2, 0.4, 0}, q1{t2, 0.4, 1};
        double v0 = rescaled_kernel(cfg, sd, src, q0, 256).value.real();
        double v1 = rescaled_kernel(cfg, sd, src, q1, 256).value.real();
        double th = theta_fn(cfg, t2);
        worst_flip = std::max(worst_flip, std::abs(v1 / v0 - th / (1 - th)));
    }
    sub(worst_flip < 0.05, "j-flip ratio vs theta/(1-theta), worst abs dev " +
                               std::to_string(worst_flip));
    // equal-mu rows: boundedness only
    double bound = 0;
    for (long N : {16L, 64L, 256L}) {
        ScaledPoint p{1, 0.4, 0}, q{2, 0.4, 1};
        bound = std::max(bound, std::abs(rescaled_kernel(cfg, sd, p, q, N).value.real()));
    }
    sub(bound < 10.0, "equal-mu rows stay bounded across N, max " + std::to_string(bound));
}

// ---------------------------------------------------------------- criterion 8
void criterion_process_convergence() {
    WeightConfig cfg = two_periodic(0.5, 64);
    ConvergenceReport rep = process_convergence(cfg, 64, 10000, 808, 0);
    for (const auto& r : rep.process_rows) {
        std::ostringstream os;
        os << r.statistic << ": empirical " << r.empirical << " predicted " << r.predicted
           << (r.stderr_ > 0 ? " z = " + std::to_string(r.zscore) : "");
        sub(!r.failed, os.str());
    }
}

// ---------------------------------------------------------------- criterion 9
void criterion_spectral_structure() {
    std::mt19937_64 rng(909);
    bool all_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        int ell = 1 + trial % 5;
        WeightConfig cfg = random_cfg(rng, ell);
        SpectralData sd = q_and_p(cfg);
        if (static_cast<int>(sd.p_coeffs.size()) != 2 * ell) all_ok = false;  // degree 2l-1
        double scale = 0;
        for (double c : sd.p_coeffs) scale = std::max(scale, std::abs(c));
        if (std::abs(sd.p_coeffs[0]) > 1e-10 * scale) all_ok = false;
        if (static_cast<int>(sd.roots.size()) != 2 * ell - 1) all_ok = false;
        for (size_t k = 1; k < sd.roots.size(); ++k)
            if (sd.roots[k] > sd.roots[k - 1] + 1e-12) all_ok = false;
    }
    sub(all_ok, "100 random cfgs: deg p = 2 ell - 1, p(0) = 0, real ordered roots");
    WeightConfig degen;
    degen.ell = 2;
    degen.alphas = {1.3, 1.3};
    degen.betas = {1.3, 1.3};
    degen.n_param = 1;
    SpectralData sd = q_and_p(degen);
    bool detected = !sd.genus_maximal;
    bool refused = false;
    try {
        make_contours(degen, sd);
    } catch (const Error& e) {
        refused = std::string(e.what()).find("GenusDegenerate") != std::string::npos;
    }
    sub(detected && refused, "degenerate genus detected and contour construction refuses");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <criterion 1..9>\n";
        return 2;
    }
    int crit = std::atoi(argv[1]);
    std::cout << "criterion " << crit << ":\n";
    try {
        switch (crit) {
            case 1: criterion_constants(); break;
            case 2: criterion_identities(); break;
            case 3: criterion_oracle_chain(); break;
            case 4: criterion_kernel_cross_validation(); break;
            case 5: criterion_gue(); break;
            case 6: criterion_mc(); break;
            case 7: criterion_kernel_convergence(); break;
            case 8: criterion_process_convergence(); break;
            case 9: criterion_spectral_structure(); break;
            default:
                std::cerr << "unknown criterion\n";
                return 2;
        }
    } catch (const std::exception& e) {
        std::cout << "criterion " << crit << ": FAIL (exception: " << e.what() << ")\n";
        return 1;
    }
    std::cout << "criterion " << crit << (g_subfail ? ": FAIL (" : ": PASS (")
              << g_subfail << " failing sub-checks)\n";
    return g_subfail ? 1 : 0;
}
