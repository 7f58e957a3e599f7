#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aztec {

// Errors carry a short machine-readable tag followed by detail.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Periodic 2 x ell edge weights for the Aztec diamond dimer model.
// alphas[k], betas[k] are alpha_{k+1}, beta_{k+1} (1-based in formulas);
// indices are taken mod ell everywhere.
struct WeightConfig {
    int ell = 1;
    std::vector<double> alphas;  // size ell, all > 0
    std::vector<double> betas;   // size ell, all > 0, prod betas == prod alphas
    int n_param = 1;             // N; the paper-facing diamond has size 2*ell*N
    std::uint64_t seed = 0;

    int size() const { return 2 * ell * n_param; }
    double alpha(int k) const;  // alpha_k, 1-based, periodic
    double beta(int k) const;   // beta_k, 1-based, periodic
};

// Validates invariants. Throws Error("NonPositiveWeight..."),
// Error("ProductConstraintViolated...") or Error("ZeroSize...").
void validate_config(const WeightConfig& cfg);

// Rescales betas.back() so that prod alphas == prod betas exactly.
// Returns true if a correction larger than the tolerance was applied
// (callers log a warning in that case).
bool normalize_config(WeightConfig& cfg, double rel_tol = 1e-12);

// Parses the key-value config grammar:
//   ell = 2
//   alphas = 2, 1/2        (decimals or rationals p/q)
//   betas  = 2, 0.5
//   N = 4
//   seed = 17
//   a = 0.5                (two-periodic shorthand; sets ell=2 and all weights)
WeightConfig parse_config_text(const std::string& text);
WeightConfig load_config(const std::string& path);

enum class Color : std::uint8_t { black, white };
enum class EdgeKind : std::uint8_t { north, east, south, west };

const char* to_string(EdgeKind k);

// A vertex of the size-n Aztec diamond graph.
// black: (2i, 2j+1), i in [0,n], j in [0,n-1]
// white: (2i+1, 2j), i in [0,n-1], j in [0,n]
struct Vertex {
    Color color;
    int x = 0, y = 0;
    int i() const { return color == Color::black ? x / 2 : (x - 1) / 2; }
    int j() const { return color == Color::black ? (y - 1) / 2 : y / 2; }
    bool operator==(const Vertex&) const = default;
};

struct Edge {
    Vertex white;
    Vertex black;
    EdgeKind kind;
};

// Size-n diamond addressed arithmetically; nothing is materialized.
struct Diamond {
    int n;
    explicit Diamond(int n_) : n(n_) {
        if (n <= 0) throw Error("ZeroSize: diamond size must be positive");
    }

    long vertices_per_color() const { return static_cast<long>(n) * (n + 1); }

    bool in_graph(int x, int y) const;
    Vertex black(int i, int j) const;  // by (i, j) index
    Vertex white(int i, int j) const;
    long black_index(const Vertex& b) const;  // row-major over (i, j)
    long white_index(const Vertex& w) const;

    // The four potential neighbors of a black vertex, with kinds.
    // Returns only the ones inside the graph.
    std::vector<Edge> edges_at_black(const Vertex& b) const;
    std::vector<Vertex> blacks() const;
    std::vector<Vertex> whites() const;
    std::vector<Edge> edges() const;
};

// Edge kind from coordinate offsets (black - white); throws on non-edges.
EdgeKind classify_edge(const Vertex& w, const Vertex& b);

// w(e) per the five-case table; indices periodic mod ell.
double edge_weight(const WeightConfig& cfg, const Edge& e);

}  // namespace aztec
