#include "aztec/gue.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "aztec/rng.hpp"

namespace aztec {

namespace {

cd k_gue_nodes(long t1, double mu1, long t2, double mu2, int n_circ, int n_line, double radius,
               double L, int side) {
    double c = side * (radius + 1.0);
    cd total = 0.0;
    double dy = 2.0 * L / (n_line - 1);
    for (int k = 0; k < n_circ; ++k) {
        double th = 2.0 * M_PI * k / n_circ;
        cd z1 = radius * std::exp(cd(0.0, th));
        cd dz1 = cd(0.0, 1.0) * z1 * (2.0 * M_PI / n_circ);
        cd inner = 0.0;
        for (int m = 0; m < n_line; ++m) {
            cd z2(c, -L + m * dy);
            double wgt = (m == 0 || m == n_line - 1) ? 0.5 : 1.0;  // trapezoid ends
            cd f = std::exp(0.5 * (z2 * z2 - z1 * z1) + mu1 * z1 - mu2 * z2) *
                   std::pow(z2, static_cast<double>(t2)) /
                   (std::pow(z1, static_cast<double>(t1)) * (z2 - z1));
            inner += f * wgt;
        }
        total += inner * cd(0.0, dy) * dz1;
    }
    return total / (cd(0.0, 2.0 * M_PI) * cd(0.0, 2.0 * M_PI));
}

}  // namespace

KernelValue k_gue_placed(long t1, double mu1, long t2, double mu2, int side, double tol) {
    if (t1 < 1 || t2 < 1) throw Error("IndexOutOfRange: GUE levels start at 1");
    double radius = 1.0;
    // Gaussian tail: |e^{z2^2/2}| = e^{(c^2 - y^2)/2}; truncate where the tail
    // bound times a crude polynomial factor is below tol/10.
    double c = radius + 1.0;
    double L = 4.0;
    auto tail = [&](double Lv) {
        return std::exp(0.5 * (c * c - Lv * Lv)) * std::pow(Lv + 3.0, static_cast<double>(t2)) *
               std::exp(std::abs(mu2) * c) / std::max(1.0, Lv - radius);
    };
    while (tail(L) > tol / 10 && L < 60) L += 1.0;
    int n_circ = 128, n_line = static_cast<int>(64 * L);
    KernelValue kv;
    cd prev = k_gue_nodes(t1, mu1, t2, mu2, n_circ, n_line, radius, L, side);
    for (int it = 0; it < 6; ++it) {
        n_circ *= 2;
        n_line = 2 * n_line - 1;
        cd cur = k_gue_nodes(t1, mu1, t2, mu2, n_circ, n_line, radius, L, side);
        kv.value = cur;
        kv.quad_error = std::abs(cur - prev);
        kv.node_count = static_cast<long>(n_circ) + n_line;
        if (kv.quad_error < tol) return kv;
        prev = cur;
    }
    throw Error("QuadratureNotConverged: k_gue");
}

KernelValue k_gue(long t1, double mu1, long t2, double mu2, double tol) {
    return k_gue_placed(t1, mu1, t2, mu2, mu1 <= mu2 ? 1 : -1, tol);
}

KernelValue k_gue_marked(const ScaledPoint& p1, const ScaledPoint& p2, const ThetaFn& theta,
                         double tol) {
    double th = theta(p1.t, p1.mu);
    double pref = p1.j == 1 ? th : 1.0 - th;
    KernelValue kv = k_gue(p1.t, p1.mu, p2.t, p2.mu, tol);
    kv.value *= pref;
    kv.quad_error *= pref;
    return kv;
}

CornersSample corners_sample(int t_max, const ThetaFn& theta, std::uint64_t seed,
                             std::uint64_t index) {
    auto rng = make_stream(seed, index);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXcd X(t_max, t_max);
    for (int r = 0; r < t_max; ++r) {
        X(r, r) = normal(rng);
        for (int cidx = r + 1; cidx < t_max; ++cidx) {
            cd v(normal(rng) / std::sqrt(2.0), normal(rng) / std::sqrt(2.0));
            X(r, cidx) = v;
            X(cidx, r) = std::conj(v);
        }
    }
    CornersSample out;
    out.eig.resize(t_max);
    out.marks.resize(t_max);
    for (int t = 1; t <= t_max; ++t) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X.topLeftCorner(t, t));
        if (es.info() != Eigen::Success) throw Error("SolverFailure: eigensolver");
        auto& lv = out.eig[t - 1];
        lv.assign(es.eigenvalues().data(), es.eigenvalues().data() + t);
        std::sort(lv.begin(), lv.end());
        for (double xi : lv)
            out.marks[t - 1].push_back(unif(rng) < theta(t, xi) ? 1 : 0);
    }
    return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double ks = 0.0;
    for (size_t k = 0; k < sample.size(); ++k) {
        double f = cdf(sample[k]);
        ks = std::max(ks, std::abs(f - k / n));
        ks = std::max(ks, std::abs(f - (k + 1) / n));
    }
    return ks;
}

}  // namespace aztec
