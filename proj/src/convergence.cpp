#include "aztec/convergence.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace aztec {

bool ConvergenceReport::any_failed() const {
    for (const auto& r : kernel_rows)
        if (r.failed) return true;
    for (const auto& r : process_rows)
        if (r.failed) return true;
    return false;
}

std::string ConvergenceReport::summary() const {
    std::ostringstream os;
    os.precision(6);
    for (const auto& r : kernel_rows) {
        os << "kernel (t" << r.p1.t << ",mu" << r.p1.mu << ",j" << r.p1.j << ")->(t" << r.p2.t
           << ",mu" << r.p2.mu << ",j" << r.p2.j << ") N=" << r.N << ": finite=" << r.finite_value
           << " limit=" << r.limit_value << " abs=" << r.abs_err << " rel=" << r.rel_err
           << (r.boundedness_only ? " [boundedness-only]" : "")
           << (r.failed ? "  FAILED" : "") << '\n';
    }
    for (const auto& r : process_rows) {
        os << "process " << r.statistic << ": empirical=" << r.empirical
           << " predicted=" << r.predicted << " stderr=" << r.stderr_ << " z=" << r.zscore
           << (r.failed ? "  FAILED" : "") << '\n';
    }
    return os.str();
}

void ConvergenceReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    out.precision(17);
    out << "kind,t1,mu1,j1,t2,mu2,j2,N,finite,limit,abs_err,rel_err,quad_error,flag\n";
    for (const auto& r : kernel_rows)
        out << "kernel," << r.p1.t << ',' << r.p1.mu << ',' << r.p1.j << ',' << r.p2.t << ','
            << r.p2.mu << ',' << r.p2.j << ',' << r.N << ',' << r.finite_value << ','
            << r.limit_value << ',' << r.abs_err << ',' << r.rel_err << ',' << r.quad_error << ','
            << (r.failed ? "FAILED" : (r.boundedness_only ? "boundedness" : "ok")) << '\n';
    for (const auto& r : process_rows)
        out << "process,,,,,,,," << r.empirical << ',' << r.predicted << ',' << r.stderr_ << ','
            << r.zscore << ",," << (r.failed ? "FAILED" : "ok") << " " << r.statistic << '\n';
}

std::vector<std::pair<ScaledPoint, ScaledPoint>> default_kernel_grid() {
    const double mus[4] = {-1.0, -0.3, 0.4, 1.1};
    std::vector<std::pair<ScaledPoint, ScaledPoint>> grid;
    for (long t1 = 1; t1 <= 3; ++t1)
        for (long t2 = 1; t2 <= 3; ++t2)
            for (int j1 : {0, 1})
                for (int j2 : {0, 1}) {
                    // one representative distinct-mu pair per index combo
                    ScaledPoint p1{t1, mus[(t1 + j1) % 4], j1};
                    ScaledPoint p2{t2, mus[(t2 + j2 + 1) % 4], j2};
                    if (p1.mu == p2.mu) p2.mu = mus[(t2 + j2 + 2) % 4];
                    grid.push_back({p1, p2});
                }
    return grid;
}

ConvergenceReport kernel_convergence(const WeightConfig& cfg,
                                     const std::vector<std::pair<ScaledPoint, ScaledPoint>>& grid,
                                     const std::vector<long>& n_list, double tol) {
    SpectralData sd = make_spectral_data(cfg);
    double sig = sd.sigma();
    ConvergenceReport rep;
    rep.cfg = cfg;
    rep.tol = tol;
    // grid scale for the rel_err floor (largest-N limit values)
    std::vector<std::vector<KernelRow>> rows(grid.size());
    double grid_scale = 0.0;
    for (size_t g = 0; g < grid.size(); ++g) {
        for (long N : n_list) {
            KernelRow row;
            row.p1 = grid[g].first;
            row.p2 = grid[g].second;
            row.N = N;
            KernelValue kv = rescaled_kernel(cfg, sd, row.p1, row.p2, N, tol);
            double m1 = mu_actual(sd, row.p1, N), m2 = mu_actual(sd, row.p2, N);
            row.boundedness_only = row.p1.mu == row.p2.mu;
            KernelValue lim = k_gue(row.p1.t, m1 / sig, row.p2.t, m2 / sig, tol * 1e-2);
            row.limit_value = nu_fn(cfg, row.p2.t, row.p2.j) / sig * lim.value.real();
            row.finite_value = kv.value.real();
            row.abs_err = std::abs(row.finite_value - row.limit_value);
            row.quad_error = kv.quad_error + lim.quad_error;
            rows[g].push_back(row);
            if (N == n_list.back()) grid_scale = std::max(grid_scale, std::abs(row.limit_value));
        }
    }
    for (size_t g = 0; g < grid.size(); ++g) {
        for (size_t k = 0; k < rows[g].size(); ++k) {
            KernelRow& row = rows[g][k];
            double floor_ = std::max(std::abs(row.limit_value), 0.1 * grid_scale);
            row.rel_err = row.abs_err / floor_;
            if (row.boundedness_only) {
                row.failed = !(std::abs(row.finite_value) < 10.0 * std::max(1.0, grid_scale));
            } else {
                bool trend_ok = true;
                if (k > 0) trend_ok = row.abs_err <= 1.2 * rows[g][k - 1].abs_err;
                bool final_ok = k + 1 < rows[g].size() || row.rel_err < 0.05;
                row.failed = !(trend_ok && final_ok);
            }
            rep.kernel_rows.push_back(row);
        }
    }
    return rep;
}

ConvergenceReport process_convergence(const WeightConfig& cfg, long N, long count,
                                      std::uint64_t seed, int threads) {
    WeightConfig cfgN = cfg;
    cfgN.n_param = static_cast<int>(N);
    SpectralData sd = make_spectral_data(cfgN);
    ConvergenceReport rep;
    rep.cfg = cfgN;
    rep.seed = seed;
    rep.mc_count = count;
    const int t_max = 3;
    StatReport st = batch_stats(cfgN, seed, count, t_max, sd.tau, sd.sigma(), threads);

    // (a) level-1 rescaled positions vs standard normal (KS)
    {
        ProcessRow r;
        r.statistic = "level1_ks_vs_normal";
        r.empirical = ks_statistic(st.level1_rescaled, normal_cdf);
        r.predicted = 0.0;
        r.threshold = 0.05;
        r.failed = !(r.empirical < r.threshold);
        rep.process_rows.push_back(r);
    }
    // (b) per-level mark frequencies vs theta(t), 3 stderr
    for (int t = 1; t <= t_max; ++t) {
        ProcessRow r;
        std::ostringstream name;
        name << "mark_freq_level_" << t;
        r.statistic = name.str();
        double th = theta_fn(cfgN, t);
        double tot = static_cast<double>(st.mark_total[t - 1]);
        r.empirical = st.mark_ones[t - 1] / tot;
        r.predicted = th;
        r.stderr_ = std::sqrt(th * (1 - th) / tot);
        r.zscore = (r.empirical - r.predicted) / r.stderr_;
        r.threshold = 3.0;
        r.failed = !(std::abs(r.zscore) < r.threshold);
        rep.process_rows.push_back(r);
    }
    // (c) level-1 x level-2(top) mark independence, 4 stderr
    {
        ProcessRow r;
        r.statistic = "mark_independence_l1_l2top";
        double n = static_cast<double>(st.count);
        double p1 = st.mark_ones[0] / static_cast<double>(st.mark_total[0]);
        double p2 = st.level2_top_one / n;
        r.empirical = st.joint11 / n;
        r.predicted = p1 * p2;
        r.stderr_ = std::sqrt(std::max(r.predicted * (1 - r.predicted), 1e-12) / n);
        r.zscore = (r.empirical - r.predicted) / r.stderr_;
        r.threshold = 4.0;
        r.failed = !(std::abs(r.zscore) < r.threshold);
        rep.process_rows.push_back(r);
    }
    // (d) thinned (j = 1) counts per level vs theta(t) * t, 3 stderr
    for (int t = 1; t <= t_max; ++t) {
        ProcessRow r;
        std::ostringstream name;
        name << "thinned_count_level_" << t;
        r.statistic = name.str();
        double th = theta_fn(cfgN, t);
        double n = static_cast<double>(st.count);
        r.empirical = st.thinned_counts[t - 1] / n;
        r.predicted = th * t;
        r.stderr_ = std::sqrt(t * th * (1 - th) / n);
        r.zscore = (r.empirical - r.predicted) / r.stderr_;
        r.threshold = 3.0;
        r.failed = !(std::abs(r.zscore) < r.threshold);
        rep.process_rows.push_back(r);
    }
    // (e) marks-forgotten level-2 gap vs GUE(2) corners sampler (KS)
    {
        ProcessRow r;
        r.statistic = "level2_gap_ks_vs_corners";
        long m = static_cast<long>(st.level2_gap_rescaled.size());
        std::vector<double> ref;
        ref.reserve(m);
        auto theta_c = [](long, double) { return 0.5; };
        for (long k = 0; k < m; ++k) {
            CornersSample cs = corners_sample(2, theta_c, rep.seed ^ 0x9e37u, 1000000 + k);
            ref.push_back(cs.eig[1][1] - cs.eig[1][0]);
        }
        std::sort(ref.begin(), ref.end());
        auto ref_cdf = [&](double x) {
            auto it = std::upper_bound(ref.begin(), ref.end(), x);
            return static_cast<double>(it - ref.begin()) / ref.size();
        };
        r.empirical = ks_statistic(st.level2_gap_rescaled, ref_cdf);
        r.threshold = 0.05;
        r.failed = !(r.empirical < r.threshold);
        rep.process_rows.push_back(r);
    }
    return rep;
}

}  // namespace aztec
