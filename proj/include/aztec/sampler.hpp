#pragma once

#include <cstdint>
#include <vector>

#include "aztec/model.hpp"

namespace aztec {

// A dimer cover of the size-n diamond: the matched edge kind per black vertex
// (one byte each), indexed by Diamond::black_index.
struct DimerCover {
    int size = 0;
    std::vector<EdgeKind> kinds;
};

// Exact sampling by weighted domino shuffling: grow the diamond from size 0,
// each round = destruction of facing pairs, slide, and creation with block
// fill probabilities from the stage weight schedule (see notes in the
// implementation; validated against brute-force enumeration).
// Deterministic in (cfg.seed XOR seed, stream).
DimerCover shuffle_sample(const WeightConfig& cfg, std::uint64_t seed, std::uint64_t stream = 0);

// As above but to an explicit final size (debug sizes included).
DimerCover shuffle_sample_size(const WeightConfig& cfg, int size, std::uint64_t seed,
                               std::uint64_t stream);

// The fill probability of block (center parity coordinates u, v) at creation
// stage `stage` of a size-n run: P(fill with the {N, S} pair).
double shuffle_fill_probability(const WeightConfig& cfg, int n_final, int stage, int u, int v);

// The marked interlacing particle system extracted from a cover: positions
// u^t_s (ascending) per level t = 1..n; the mark is the position parity.
struct ParticleSystem {
    int size = 0;
    std::vector<std::vector<int>> levels;  // levels[t-1] = sorted positions on level t

    // throws Error("MalformedCover...") on violation
    void validate() const;
};

ParticleSystem extract_particles(const DimerCover& cover);

struct MarkedPoint {
    long t;
    double mu;
    int j;
};

// (u - 2 N tau) / (2 sigma sqrt(N)) per particle; marks preserved.
std::vector<MarkedPoint> rescale_particles(const ParticleSystem& ps, double tau, double sigma,
                                           long N);

// Batch statistics for the Monte Carlo convergence reports.
struct StatReport {
    long count = 0;
    int t_max = 0;
    std::vector<double> level1_rescaled;          // centered/scaled level-1 positions
    std::vector<long> mark_ones, mark_total;      // per level t = 1..t_max
    long joint11 = 0;                             // level-1 and level-2 top mark both 1
    long level2_top_one = 0;                      // marginal of the level-2 top particle
    std::vector<long> thinned_counts;             // j = 1 particles per level
    std::vector<double> level2_gap_rescaled;      // rescaled level-2 spacing (marks forgotten)
};

StatReport batch_stats(const WeightConfig& cfg, std::uint64_t seed, long count, int t_max,
                       double tau, double sigma, int threads = 0);

void merge(StatReport& into, const StatReport& part);

}  // namespace aztec
