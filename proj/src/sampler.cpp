#include "aztec/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "aztec/rng.hpp"

namespace aztec {

namespace {

constexpr std::uint8_t kNone = 255;

// Working buffers for one growth run, reused across stages.
struct ShuffleState {
    int n = 0;                          // current size
    std::vector<std::uint8_t> kind;     // per black (i * n + j), kNone if unmatched

    static long bid(int n, int i, int j) { return static_cast<long>(i) * n + j; }
};

// White partner (i', j') of black (i, j) under kind k.
inline void white_partner(int i, int j, EdgeKind k, int& wi, int& wj) {
    switch (k) {
        case EdgeKind::north: wi = i - 1; wj = j + 1; break;
        case EdgeKind::east: wi = i - 1; wj = j; break;
        case EdgeKind::south: wi = i; wj = j; break;
        case EdgeKind::west: wi = i; wj = j + 1; break;
    }
}

}  // namespace

double shuffle_fill_probability(const WeightConfig& cfg, int n_final, int stage, int u, int v) {
    int m = n_final - stage;
    double x;
    if (m % 2 == 0) {
        double b = cfg.beta(u + m / 2 + 1) / cfg.alpha(u + m / 2 + 1);
        x = (v % 2 == 0) ? b : 1.0 / b;
    } else {
        int k = u + (m + 1) / 2 + 1;
        double a = cfg.alpha(k) / cfg.beta(k - 1);
        x = (v % 2 == 0) ? 1.0 / a : a;
    }
    return x / (1.0 + x);
}

DimerCover shuffle_sample_size(const WeightConfig& cfg, int size, std::uint64_t seed,
                               std::uint64_t stream) {
    auto rng = make_stream(seed ^ cfg.seed, stream);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::uint8_t> cur;  // size s
    // coordinate grids sized for the largest stage: squares (x, y) with
    // x + y odd, 0 <= x, y <= 2 size
    int W = 2 * size + 1;
    std::vector<std::uint8_t> covered(static_cast<size_t>(W) * W);
    std::vector<std::uint8_t> cand(static_cast<size_t>(W) * W);    // candidate centers
    std::vector<std::uint8_t> owners(static_cast<size_t>(W) * W);  // candidate count per square
    auto at = [&](std::vector<std::uint8_t>& a, int x, int y) -> std::uint8_t& {
        return a[static_cast<size_t>(x) * W + y];
    };

    for (int s = 0; s < size; ++s) {
        int ns = s + 1;  // the size being created
        std::vector<std::uint8_t> nxt(static_cast<size_t>(ns + 1) * ns, kNone);
        // destruction + slide
        for (int i = 0; i <= s; ++i) {
            for (int j = 0; j < s; ++j) {
                std::uint8_t k = cur.empty() ? kNone : cur[ShuffleState::bid(s, i, j)];
                if (k == kNone) continue;
                auto kd = static_cast<EdgeKind>(k);
                if (kd == EdgeKind::north && j + 1 < s &&
                    cur[ShuffleState::bid(s, i, j + 1)] == static_cast<std::uint8_t>(EdgeKind::south))
                    continue;  // facing pair: destroyed
                if (kd == EdgeKind::south && j - 1 >= 0 &&
                    cur[ShuffleState::bid(s, i, j - 1)] == static_cast<std::uint8_t>(EdgeKind::north))
                    continue;
                if (kd == EdgeKind::east && j - 1 >= 0 &&
                    cur[ShuffleState::bid(s, i, j - 1)] == static_cast<std::uint8_t>(EdgeKind::west))
                    continue;
                if (kd == EdgeKind::west && j + 1 < s &&
                    cur[ShuffleState::bid(s, i, j + 1)] == static_cast<std::uint8_t>(EdgeKind::east))
                    continue;
                int ni = i, nj = j;
                switch (kd) {
                    case EdgeKind::north: ni = i + 1; nj = j + 1; break;
                    case EdgeKind::south: break;
                    case EdgeKind::east: ni = i + 1; break;
                    case EdgeKind::west: nj = j + 1; break;
                }
                nxt[ShuffleState::bid(ns, ni, nj)] = k;
            }
        }
        // covered maps for blacks and whites of size ns
        int box = 2 * ns + 1;
        for (int x = 0; x < box; ++x)
            for (int y = 0; y < box; ++y) at(covered, x, y) = 0;
        long uncovered = 0;
        for (int i = 0; i <= ns; ++i)
            for (int j = 0; j < ns; ++j) {
                std::uint8_t k = nxt[ShuffleState::bid(ns, i, j)];
                if (k != kNone) {
                    at(covered, 2 * i, 2 * j + 1) = 1;
                    int wi, wj;
                    white_partner(i, j, static_cast<EdgeKind>(k), wi, wj);
                    at(covered, 2 * wi + 1, 2 * wj) = 1;
                } else {
                    ++uncovered;
                }
            }
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j <= ns; ++j)
                if (!at(covered, 2 * i + 1, 2 * j)) ++uncovered;
        // candidate centers: (c0 + c1) even, all four members uncovered squares
        auto members_ok = [&](int c0, int c1) {
            if (c0 - 1 < 0 || c1 - 1 < 0 || c0 + 1 >= box || c1 + 1 >= box) return false;
            auto sq_ok = [&](int x, int y) {
                if (((x + y) & 1) == 0) return false;
                if (x % 2 == 0) {
                    int bi = x / 2, bj = (y - 1) / 2;
                    if (y % 2 == 0 || bi > ns || bj < 0 || bj >= ns) return false;
                } else {
                    int wi = (x - 1) / 2, wj = y / 2;
                    if (y % 2 != 0 || wi >= ns || wj > ns) return false;
                }
                return !at(covered, x, y);
            };
            return sq_ok(c0 - 1, c1) && sq_ok(c0 + 1, c1) && sq_ok(c0, c1 - 1) && sq_ok(c0, c1 + 1);
        };
        for (int x = 0; x < box; ++x)
            for (int y = 0; y < box; ++y) {
                at(cand, x, y) = 0;
                at(owners, x, y) = 0;
            }
        std::vector<std::pair<int, int>> queue;
        for (int c0 = 1; c0 < box - 1; ++c0)
            for (int c1 = 1; c1 < box - 1; ++c1)
                if (((c0 + c1) & 1) == 0 && members_ok(c0, c1)) {
                    at(cand, c0, c1) = 1;
                    for (auto [dx, dy] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}})
                        ++at(owners, c0 + dx, c1 + dy);
                }
        auto push_single = [&](int x, int y) {
            if (!at(covered, x, y) && at(owners, x, y) == 1) queue.emplace_back(x, y);
        };
        for (int x = 0; x < box; ++x)
            for (int y = 0; y < box; ++y)
                if (((x + y) & 1) && !at(covered, x, y)) push_single(x, y);
        long filled = 0;
        static const std::pair<int, int> kOff[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        while (!queue.empty()) {
            auto [sx, sy] = queue.back();
            queue.pop_back();
            if (at(covered, sx, sy) || at(owners, sx, sy) != 1) continue;
            int c0 = -1, c1 = -1;
            for (auto [dx, dy] : kOff) {
                int cx = sx + dx, cy = sy + dy;
                if (cx >= 0 && cy >= 0 && cx < box && cy < box && at(cand, cx, cy)) {
                    c0 = cx;
                    c1 = cy;
                    break;
                }
            }
            if (c0 < 0) throw Error("MalformedCover: block forcing failed");
            // choose fill for block (c0, c1)
            int u = (c0 - 1) / 2, v = (c1 - 1) / 2;
            double p = shuffle_fill_probability(cfg, size, ns, u, v);
            bool ns_pair = unif(rng) < p;
            // write kinds at the two black members
            if (c0 % 2 == 1) {
                int bi_m = (c0 - 1) / 2, bi_p = (c0 + 1) / 2, bj = (c1 - 1) / 2;
                if (ns_pair) {
                    nxt[ShuffleState::bid(ns, bi_p, bj)] = static_cast<std::uint8_t>(EdgeKind::north);
                    nxt[ShuffleState::bid(ns, bi_m, bj)] = static_cast<std::uint8_t>(EdgeKind::south);
                } else {
                    nxt[ShuffleState::bid(ns, bi_p, bj)] = static_cast<std::uint8_t>(EdgeKind::east);
                    nxt[ShuffleState::bid(ns, bi_m, bj)] = static_cast<std::uint8_t>(EdgeKind::west);
                }
            } else {
                int bi = c0 / 2, bj_m = (c1 - 1) / 2 - 0, bj_p = (c1 + 1) / 2 - 0;
                // members: blacks (c0, c1 -/+ 1) -> j = (c1 - 1 - 1)/2 and (c1 + 1 - 1)/2
                bj_m = (c1 - 2) / 2;
                bj_p = c1 / 2;
                if (ns_pair) {
                    nxt[ShuffleState::bid(ns, bi, bj_m)] = static_cast<std::uint8_t>(EdgeKind::north);
                    nxt[ShuffleState::bid(ns, bi, bj_p)] = static_cast<std::uint8_t>(EdgeKind::south);
                } else {
                    nxt[ShuffleState::bid(ns, bi, bj_p)] = static_cast<std::uint8_t>(EdgeKind::east);
                    nxt[ShuffleState::bid(ns, bi, bj_m)] = static_cast<std::uint8_t>(EdgeKind::west);
                }
            }
            // retire the block and invalidate overlapping candidates
            at(cand, c0, c1) = 0;
            int mem[4][2] = {{c0 - 1, c1}, {c0 + 1, c1}, {c0, c1 - 1}, {c0, c1 + 1}};
            for (auto& mxy : mem) at(covered, mxy[0], mxy[1]) = 1;
            filled += 4;
            for (auto& mxy : mem) {
                for (auto [dx, dy] : kOff) {
                    int cx = mxy[0] + dx, cy = mxy[1] + dy;
                    if (cx < 0 || cy < 0 || cx >= box || cy >= box || !at(cand, cx, cy)) continue;
                    at(cand, cx, cy) = 0;
                    int m2[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
                    for (auto& q : m2) {
                        --at(owners, q[0], q[1]);
                        if (!at(covered, q[0], q[1]) && at(owners, q[0], q[1]) == 1)
                            queue.emplace_back(q[0], q[1]);
                    }
                }
            }
        }
        if (filled != uncovered) throw Error("MalformedCover: creation left holes");
        cur = std::move(nxt);
    }
    DimerCover out;
    out.size = size;
    out.kinds.resize(cur.size());
    for (size_t k = 0; k < cur.size(); ++k) {
        if (cur[k] == kNone) throw Error("MalformedCover: unmatched black vertex");
        out.kinds[k] = static_cast<EdgeKind>(cur[k]);
    }
    return out;
}

DimerCover shuffle_sample(const WeightConfig& cfg, std::uint64_t seed, std::uint64_t stream) {
    return shuffle_sample_size(cfg, cfg.size(), seed, stream);
}

void ParticleSystem::validate() const {
    for (int t = 1; t <= size; ++t) {
        const auto& lv = levels[t - 1];
        if (static_cast<int>(lv.size()) != t)
            throw Error("MalformedCover: level count violated");
        for (size_t s = 0; s + 1 < lv.size(); ++s)
            if (lv[s] > lv[s + 1]) throw Error("MalformedCover: level not sorted");
        if (t < size) {
            const auto& nxt = levels[t];
            for (int s = 0; s < t; ++s)
                if (!(nxt[s] <= lv[s] && lv[s] <= nxt[s + 1]))
                    throw Error("MalformedCover: interlacing violated");
        }
    }
}

ParticleSystem extract_particles(const DimerCover& cover) {
    int n = cover.size;
    ParticleSystem ps;
    ps.size = n;
    ps.levels.assign(n, {});
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j) {
            EdgeKind k = cover.kinds[static_cast<long>(i) * n + j];
            if (k == EdgeKind::south || k == EdgeKind::west) {
                int t = n - i;
                if (t >= 1) ps.levels[t - 1].push_back(j);
            }
        }
    for (auto& lv : ps.levels) std::sort(lv.begin(), lv.end());
    ps.validate();
    return ps;
}

std::vector<MarkedPoint> rescale_particles(const ParticleSystem& ps, double tau, double sigma,
                                           long N) {
    std::vector<MarkedPoint> out;
    double denom = 2.0 * sigma * std::sqrt(static_cast<double>(N));
    for (int t = 1; t <= ps.size; ++t)
        for (int u : ps.levels[t - 1])
            out.push_back({t, (u - 2.0 * N * tau) / denom, u % 2});
    return out;
}

void merge(StatReport& into, const StatReport& part) {
    into.count += part.count;
    into.level1_rescaled.insert(into.level1_rescaled.end(), part.level1_rescaled.begin(),
                                part.level1_rescaled.end());
    into.level2_gap_rescaled.insert(into.level2_gap_rescaled.end(),
                                    part.level2_gap_rescaled.begin(),
                                    part.level2_gap_rescaled.end());
    if (into.mark_ones.empty()) {
        into.mark_ones = part.mark_ones;
        into.mark_total = part.mark_total;
        into.thinned_counts = part.thinned_counts;
        into.t_max = part.t_max;
        into.joint11 = part.joint11;
        into.level2_top_one = part.level2_top_one;
        return;
    }
    for (size_t k = 0; k < part.mark_ones.size(); ++k) {
        into.mark_ones[k] += part.mark_ones[k];
        into.mark_total[k] += part.mark_total[k];
        into.thinned_counts[k] += part.thinned_counts[k];
    }
    into.joint11 += part.joint11;
    into.level2_top_one += part.level2_top_one;
}

StatReport batch_stats(const WeightConfig& cfg, std::uint64_t seed, long count, int t_max,
                       double tau, double sigma, int threads) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    threads = std::min<long>(threads, std::max<long>(1, count));
    long N = cfg.n_param;
    double denom = 2.0 * sigma * std::sqrt(static_cast<double>(N));
    auto work = [&](long lo, long hi) {
        StatReport r;
        r.t_max = t_max;
        r.mark_ones.assign(t_max, 0);
        r.mark_total.assign(t_max, 0);
        r.thinned_counts.assign(t_max, 0);
        for (long idx = lo; idx < hi; ++idx) {
            DimerCover cov = shuffle_sample(cfg, seed, static_cast<std::uint64_t>(idx));
            ParticleSystem ps = extract_particles(cov);
            ++r.count;
            r.level1_rescaled.push_back((ps.levels[0][0] - 2.0 * N * tau) / denom);
            for (int t = 1; t <= t_max && t <= ps.size; ++t)
                for (int u : ps.levels[t - 1]) {
                    ++r.mark_total[t - 1];
                    if (u % 2 == 1) {
                        ++r.mark_ones[t - 1];
                        ++r.thinned_counts[t - 1];
                    }
                }
            if (ps.size >= 2) {
                if (ps.levels[1][1] % 2 == 1) ++r.level2_top_one;
                if (ps.levels[0][0] % 2 == 1 && ps.levels[1][1] % 2 == 1) ++r.joint11;
                r.level2_gap_rescaled.push_back((ps.levels[1][1] - ps.levels[1][0]) / denom);
            }
        }
        return r;
    };
    std::vector<StatReport> parts(threads);
    std::vector<std::thread> pool;
    long chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        long lo = t * chunk, hi = std::min<long>(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, t, lo, hi] { parts[t] = work(lo, hi); });
    }
    for (auto& th : pool) th.join();
    StatReport out;
    for (auto& p : parts) merge(out, p);
    return out;
}

}  // namespace aztec
