#include "aztec/model.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace aztec {

double WeightConfig::alpha(int k) const {
    int m = (k - 1) % ell;
    if (m < 0) m += ell;
    return alphas[m];
}

double WeightConfig::beta(int k) const {
    int m = (k - 1) % ell;
    if (m < 0) m += ell;
    return betas[m];
}

void validate_config(const WeightConfig& cfg) {
    if (cfg.ell <= 0 || cfg.n_param <= 0)
        throw Error("ZeroSize: ell and N must be positive");
    if (static_cast<int>(cfg.alphas.size()) != cfg.ell ||
        static_cast<int>(cfg.betas.size()) != cfg.ell)
        throw Error("ZeroSize: need exactly ell alphas and ell betas");
    double pa = 1.0, pb = 1.0;
    for (double a : cfg.alphas) {
        if (!(a > 0.0)) throw Error("NonPositiveWeight: alpha <= 0");
        pa *= a;
    }
    for (double b : cfg.betas) {
        if (!(b > 0.0)) throw Error("NonPositiveWeight: beta <= 0");
        pb *= b;
    }
    double rel = std::abs(pa - pb) / std::max(pa, pb);
    if (rel > 1e-12) {
        std::ostringstream os;
        os << "ProductConstraintViolated: prod(alpha)/prod(beta) = " << pa / pb;
        throw Error(os.str());
    }
}

bool normalize_config(WeightConfig& cfg, double rel_tol) {
    if (cfg.alphas.empty() || cfg.betas.empty()) return false;
    double pa = 1.0, pb = 1.0;
    for (double a : cfg.alphas) pa *= a;
    for (size_t k = 0; k + 1 < cfg.betas.size(); ++k) pb *= cfg.betas[k];
    double want = pa / pb;
    double rel = std::abs(cfg.betas.back() - want) / std::max(std::abs(want), 1e-300);
    cfg.betas.back() = want;
    return rel > rel_tol;
}

namespace {

double parse_number(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash != std::string::npos) {
        double p = std::stod(tok.substr(0, slash));
        double q = std::stod(tok.substr(slash + 1));
        if (q == 0.0) throw Error("ConfigParse: rational with zero denominator");
        return p / q;
    }
    return std::stod(tok);
}

std::vector<double> parse_list(const std::string& rhs) {
    std::vector<double> out;
    std::string tok;
    std::istringstream is(rhs);
    while (std::getline(is, tok, ',')) {
        std::istringstream t(tok);
        std::string v;
        t >> v;
        if (!v.empty()) out.push_back(parse_number(v));
    }
    return out;
}

}  // namespace

WeightConfig parse_config_text(const std::string& text) {
    WeightConfig cfg;
    cfg.ell = 0;
    bool have_a_shorthand = false;
    double a_value = 0.0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key, rhs = line.substr(eq + 1);
        {
            std::istringstream k(line.substr(0, eq));
            k >> key;
        }
        if (key == "ell")
            cfg.ell = static_cast<int>(parse_number(rhs));
        else if (key == "alphas")
            cfg.alphas = parse_list(rhs);
        else if (key == "betas")
            cfg.betas = parse_list(rhs);
        else if (key == "N")
            cfg.n_param = static_cast<int>(parse_number(rhs));
        else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(parse_number(rhs));
        else if (key == "a") {
            have_a_shorthand = true;
            a_value = parse_number(rhs);
        } else {
            throw Error("ConfigParse: unknown key '" + key + "'");
        }
    }
    if (have_a_shorthand) {
        if (!(a_value > 0.0)) throw Error("NonPositiveWeight: a <= 0");
        cfg.ell = 2;
        cfg.alphas = {1.0 / a_value, a_value};
        cfg.betas = {1.0 / a_value, a_value};
    }
    if (cfg.ell == 0) cfg.ell = static_cast<int>(cfg.alphas.size());
    validate_config(cfg);
    return cfg;
}

WeightConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("ConfigParse: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::north: return "north";
        case EdgeKind::east: return "east";
        case EdgeKind::south: return "south";
        case EdgeKind::west: return "west";
    }
    return "?";
}

bool Diamond::in_graph(int x, int y) const {
    if (((x + y) & 1) == 0) return false;
    if (x % 2 == 0) {
        int i = x / 2, j = (y - 1) / 2;
        return y % 2 != 0 && y >= 1 && i >= 0 && i <= n && j >= 0 && j < n;
    }
    int i = (x - 1) / 2, j = y / 2;
    return y % 2 == 0 && i >= 0 && i < n && j >= 0 && j <= n;
}

Vertex Diamond::black(int i, int j) const { return Vertex{Color::black, 2 * i, 2 * j + 1}; }
Vertex Diamond::white(int i, int j) const { return Vertex{Color::white, 2 * i + 1, 2 * j}; }

long Diamond::black_index(const Vertex& b) const {
    if (b.color != Color::black || !in_graph(b.x, b.y))
        throw Error("InvalidEdge: vertex out of range");
    return static_cast<long>(b.i()) * n + b.j();
}

long Diamond::white_index(const Vertex& w) const {
    if (w.color != Color::white || !in_graph(w.x, w.y))
        throw Error("InvalidEdge: vertex out of range");
    return static_cast<long>(w.i()) * (n + 1) + w.j();
}

EdgeKind classify_edge(const Vertex& w, const Vertex& b) {
    int dx = b.x - w.x, dy = b.y - w.y;
    if (dx == 1 && dy == -1) return EdgeKind::north;
    if (dx == 1 && dy == 1) return EdgeKind::east;
    if (dx == -1 && dy == 1) return EdgeKind::south;
    if (dx == -1 && dy == -1) return EdgeKind::west;
    throw Error("InvalidEdge: not an edge");
}

std::vector<Edge> Diamond::edges_at_black(const Vertex& b) const {
    std::vector<Edge> out;
    static const int off[4][2] = {{-1, 1}, {-1, -1}, {1, -1}, {1, 1}};
    for (auto& d : off) {
        int wx = b.x + d[0], wy = b.y + d[1];
        if (in_graph(wx, wy)) {
            Vertex w{Color::white, wx, wy};
            out.push_back(Edge{w, b, classify_edge(w, b)});
        }
    }
    return out;
}

std::vector<Vertex> Diamond::blacks() const {
    std::vector<Vertex> out;
    out.reserve(vertices_per_color());
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j) out.push_back(black(i, j));
    return out;
}

std::vector<Vertex> Diamond::whites() const {
    std::vector<Vertex> out;
    out.reserve(vertices_per_color());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j) out.push_back(white(i, j));
    return out;
}

std::vector<Edge> Diamond::edges() const {
    std::vector<Edge> out;
    for (const Vertex& b : blacks())
        for (const Edge& e : edges_at_black(b)) out.push_back(e);
    return out;
}

double edge_weight(const WeightConfig& cfg, const Edge& e) {
    switch (e.kind) {
        case EdgeKind::south: {
            // e_south = ((2i+1, 2j), (2i, 2j+1)); white x = 2i+1
            int i = (e.white.x - 1) / 2, j = e.white.y / 2;
            double a = cfg.alpha(i + 1);
            return (j % 2 == 0) ? 1.0 / a : a;
        }
        case EdgeKind::east: {
            // e_east = ((2i-1, 2j), (2i, 2j+1)); white x = 2i-1
            int i = (e.white.x + 1) / 2, j = e.white.y / 2;
            double b = cfg.beta(i);
            return (j % 2 == 0) ? 1.0 / b : b;
        }
        default:
            return 1.0;
    }
}

}  // namespace aztec
