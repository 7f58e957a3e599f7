// Command-line driver: one binary, subcommands for each layer of the toolkit.
//
// Exit codes: 0 success, 2 validation/usage error, 3 numeric non-convergence,
// 4 convergence report contains FAILED rows.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "aztec/convergence.hpp"
#include "aztec/io.hpp"
#include "aztec/kasteleyn.hpp"
#include "aztec/kernel.hpp"
#include "aztec/rng.hpp"
#include "aztec/sampler.hpp"
#include "aztec/surface.hpp"

using namespace aztec;

namespace {

WeightConfig load_and_normalize(const std::string& path) {
    WeightConfig cfg = load_config(path);
    if (normalize_config(cfg))
        std::cerr << "warning: betas rescaled to satisfy prod(alpha) = prod(beta)\n";
    validate_config(cfg);
    return cfg;
}

void write_manifest(const std::string& prefix, const std::string& sub, const WeightConfig& cfg,
                    std::uint64_t seed, double tol, int threads) {
    RunManifest m;
    m.subcommand = sub;
    m.cfg = cfg;
    m.seed = seed;
    m.tolerance = tol;
    m.threads = threads;
    m.write(prefix + ".manifest.json");
}

int cmd_spectral(const std::string& config, const std::string& out) {
    WeightConfig cfg = load_and_normalize(config);
    SpectralData sd = make_spectral_data(cfg);
    std::cout << "tau     = " << fmt17(sd.tau) << "\n";
    std::cout << "sigma2  = " << fmt17(sd.sigma2) << "   (curvature G''(1); series form "
              << fmt17(sd.sigma2_series) << ")\n";
    std::cout << "B       = " << fmt17(sd.B) << "\n";
    std::cout << "genus_maximal = " << (sd.genus_maximal ? "yes" : "no") << "\n";
    std::cout << "roots of p: ";
    for (double r : sd.roots) std::cout << fmt17(r) << ' ';
    std::cout << "\ntheta(t), t = 1.." << cfg.ell << ": ";
    for (int t = 1; t <= cfg.ell; ++t) std::cout << fmt17(theta_fn(cfg, t)) << ' ';
    std::cout << '\n';
    if (!out.empty()) {
        std::ofstream csv(out + ".spectral.csv");
        csv << "quantity,value\n";
        csv << "tau," << fmt17(sd.tau) << "\nsigma2," << fmt17(sd.sigma2) << "\nsigma2_series,"
            << fmt17(sd.sigma2_series) << "\nB," << fmt17(sd.B) << '\n';
        for (size_t k = 0; k < sd.roots.size(); ++k)
            csv << "root_" << k << ',' << fmt17(sd.roots[k]) << '\n';
        for (int t = 1; t <= cfg.ell; ++t)
            csv << "theta_" << t << ',' << fmt17(theta_fn(cfg, t)) << '\n';
        write_manifest(out, "spectral", cfg, 0, 0, 1);
    }
    return 0;
}

int cmd_oracle(const std::string& config, const std::string& out, bool partition, int size_arg) {
    WeightConfig cfg = load_and_normalize(config);
    int size = size_arg > 0 ? size_arg : cfg.size();
    KasteleynMatrix K(cfg, size);
    if (partition) {
        double logz = K.log_partition_function();
        std::cout << "log Z = " << fmt17(logz) << "  (Z = " << fmt17(std::exp(logz)) << ")\n";
    }
    if (!out.empty()) {
        std::ofstream csv(out + ".rho1.csv");
        csv << "i,j,x,y,rho1\n";
        csv.precision(17);
        for (const Vertex& b : K.diamond().blacks()) {
            double r = K.particle_correlation({b});
            csv << b.i() << ',' << b.j() << ',' << b.x << ',' << b.y << ',' << r << '\n';
        }
        write_manifest(out, "oracle", cfg, 0, 0, 1);
    }
    return 0;
}

int cmd_sample(const std::string& config, const std::string& out, std::uint64_t seed, long count,
               int threads, const std::string& format) {
    WeightConfig cfg = load_and_normalize(config);
    SpectralData sd = make_spectral_data(cfg);
    if (format == "jsonl") {
        std::ofstream jl(out + ".covers.jsonl");
        for (long idx = 0; idx < count; ++idx) {
            DimerCover cov = shuffle_sample(cfg, seed, idx);
            ParticleSystem ps = extract_particles(cov);
            jl << "{\"sample\":" << idx << ",\"levels\":[";
            for (int t = 1; t <= ps.size; ++t) {
                jl << (t == 1 ? "[" : ",[");
                for (size_t s = 0; s < ps.levels[t - 1].size(); ++s)
                    jl << (s ? "," : "") << ps.levels[t - 1][s];
                jl << "]";
            }
            jl << "]}\n";
        }
    } else {
        StatReport st = batch_stats(cfg, seed, count, std::min(cfg.size(), 3), sd.tau, sd.sigma(),
                                    threads);
        std::ofstream csv(out + ".stats.csv");
        csv.precision(17);
        csv << "statistic,value\n";
        csv << "count," << st.count << '\n';
        for (int t = 1; t <= st.t_max; ++t)
            csv << "mark_freq_level_" << t << ','
                << static_cast<double>(st.mark_ones[t - 1]) / st.mark_total[t - 1] << '\n';
        for (double v : st.level1_rescaled) csv << "level1_rescaled," << v << '\n';
    }
    write_manifest(out, "sample", cfg, seed, 0, threads);
    std::cout << "wrote " << count << " samples to " << out << ".*\n";
    return 0;
}

int cmd_kernel(const std::string& config, const std::string& out, double tol,
               const std::vector<double>& tmuj) {
    WeightConfig cfg = load_and_normalize(config);
    SpectralData sd = make_spectral_data(cfg);
    std::vector<ScaledPoint> pts;
    for (size_t k = 0; k + 2 < tmuj.size(); k += 3)
        pts.push_back({static_cast<long>(tmuj[k]), tmuj[k + 1], static_cast<int>(tmuj[k + 2])});
    if (pts.empty()) pts = {{1, 0.0, 0}, {1, 0.5, 1}, {2, -0.5, 0}};
    std::ofstream csv(out.empty() ? "/dev/stdout" : out + ".kernel.csv");
    csv.precision(17);
    csv << "t1,mu1,j1,t2,mu2,j2,value,quad_error\n";
    for (const auto& p1 : pts)
        for (const auto& p2 : pts) {
            KernelValue kv = rescaled_kernel(cfg, sd, p1, p2, cfg.n_param, tol);
            csv << p1.t << ',' << p1.mu << ',' << p1.j << ',' << p2.t << ',' << p2.mu << ','
                << p2.j << ',' << kv.value.real() << ',' << kv.quad_error << '\n';
        }
    if (!out.empty()) write_manifest(out, "kernel", cfg, 0, tol, 1);
    return 0;
}

int cmd_gue(const std::string& out, double tol, std::uint64_t seed, long samples, int t_max) {
    std::ofstream csv(out.empty() ? "/dev/stdout" : out + ".gue.csv");
    csv.precision(17);
    csv << "t1,mu1,t2,mu2,value,quad_error\n";
    for (long t1 = 1; t1 <= t_max; ++t1)
        for (double mu : {-1.0, 0.0, 1.0}) {
            KernelValue kv = k_gue(t1, mu, t1, mu, tol);
            csv << t1 << ',' << mu << ',' << t1 << ',' << mu << ',' << kv.value.real() << ','
                << kv.quad_error << '\n';
        }
    if (samples > 0) {
        std::ofstream jl(out + ".corners.jsonl");
        auto theta = [](long, double) { return 0.5; };
        for (long k = 0; k < samples; ++k) {
            CornersSample cs = corners_sample(t_max, theta, seed, k);
            jl << "{\"sample\":" << k << ",\"levels\":[";
            for (int t = 0; t < t_max; ++t) {
                jl << (t ? ",{" : "{") << "\"eig\":[";
                for (size_t s = 0; s < cs.eig[t].size(); ++s)
                    jl << (s ? "," : "") << cs.eig[t][s];
                jl << "],\"marks\":[";
                for (size_t s = 0; s < cs.marks[t].size(); ++s)
                    jl << (s ? "," : "") << cs.marks[t][s];
                jl << "]}";
            }
            jl << "]}\n";
        }
    }
    if (!out.empty()) {
        WeightConfig dummy;
        dummy.alphas = {1.0};
        dummy.betas = {1.0};
        write_manifest(out, "gue", dummy, seed, tol, 1);
    }
    return 0;
}

int cmd_converge(const std::string& config, const std::string& out, std::uint64_t seed,
                 long count, int threads, bool kernel_part, bool process_part) {
    WeightConfig cfg = load_and_normalize(config);
    bool failed = false;
    if (kernel_part) {
        std::vector<long> n_list = {16, 64, 256};
        ConvergenceReport rep = kernel_convergence(cfg, default_kernel_grid(), n_list);
        std::cout << rep.summary();
        if (!out.empty()) rep.write_csv(out + ".kernel_convergence.csv");
        failed = failed || rep.any_failed();
    }
    if (process_part) {
        ConvergenceReport rep = process_convergence(cfg, cfg.n_param, count, seed, threads);
        std::cout << rep.summary();
        if (!out.empty()) rep.write_csv(out + ".process_convergence.csv");
        failed = failed || rep.any_failed();
    }
    if (!out.empty()) write_manifest(out, "converge", cfg, seed, 0, threads);
    return failed ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2 x ell periodically weighted Aztec diamond toolkit"};
    app.require_subcommand(1);

    std::string config, out;
    std::uint64_t seed = 1;
    long count = 1000;
    int threads = 0;
    double tol = 1e-6;

    auto* sp = app.add_subcommand("spectral", "print tau, sigma^2, B, theta table, roots of p");
    sp->add_option("--config", config)->required();
    sp->add_option("--out", out);

    bool partition = false;
    int oracle_size = 0;
    auto* orc = app.add_subcommand("oracle", "exact finite-size quantities via Kasteleyn");
    orc->add_option("--config", config)->required();
    orc->add_option("--out", out);
    orc->add_option("--size", oracle_size, "explicit diamond size (default 2*ell*N)");
    orc->add_flag("--partition", partition, "print the partition function");

    std::string format = "stats";
    auto* smp = app.add_subcommand("sample", "exact Monte Carlo via domino shuffling");
    smp->add_option("--config", config)->required();
    smp->add_option("--out", out)->required();
    smp->add_option("--seed", seed);
    smp->add_option("--count", count);
    smp->add_option("--threads", threads);
    smp->add_option("--format", format)->check(CLI::IsMember({"stats", "jsonl"}));

    std::vector<double> tmuj;
    auto* krn = app.add_subcommand("kernel", "rescaled finite-N kernel on a (t, mu, j) grid");
    krn->add_option("--config", config)->required();
    krn->add_option("--out", out);
    krn->add_option("--tol", tol);
    krn->add_option("--point", tmuj, "t mu j triples (repeatable)")->expected(-3);

    long gue_samples = 0;
    int gue_tmax = 3;
    auto* gue = app.add_subcommand("gue", "K_GUE tables and corners-process samples");
    gue->add_option("--out", out);
    gue->add_option("--tol", tol);
    gue->add_option("--seed", seed);
    gue->add_option("--samples", gue_samples);
    gue->add_option("--tmax", gue_tmax);

    bool no_kernel = false, no_process = false;
    auto* cnv = app.add_subcommand("converge", "kernel + process convergence reports");
    cnv->add_option("--config", config)->required();
    cnv->add_option("--out", out);
    cnv->add_option("--seed", seed);
    cnv->add_option("--count", count);
    cnv->add_option("--threads", threads);
    cnv->add_flag("--no-kernel", no_kernel);
    cnv->add_flag("--no-process", no_process);

    try {
        app.parse(argc, argv);
        if (sp->parsed()) return cmd_spectral(config, out);
        if (orc->parsed()) return cmd_oracle(config, out, partition, oracle_size);
        if (smp->parsed()) return cmd_sample(config, out, seed, count, threads, format);
        if (krn->parsed()) return cmd_kernel(config, out, tol, tmuj);
        if (gue->parsed()) return cmd_gue(out, tol, seed, gue_samples, gue_tmax);
        if (cnv->parsed()) return cmd_converge(config, out, seed, count, threads, !no_kernel, !no_process);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::string what = e.what();
        std::cerr << "error: " << what << '\n';
        if (what.find("QuadratureNotConverged") != std::string::npos) return 3;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
