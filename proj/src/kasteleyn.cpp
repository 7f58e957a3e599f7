#include "aztec/kasteleyn.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <sstream>

namespace aztec {

KasteleynMatrix::KasteleynMatrix(const WeightConfig& cfg, int size, long size_cap)
    : cfg_(cfg), dia_(size) {
    if (dia_.vertices_per_color() > size_cap) {
        std::ostringstream os;
        os << "SizeCap: " << dia_.vertices_per_color() << " vertices per color exceeds cap "
           << size_cap;
        throw Error(os.str());
    }
    long m = dia_.vertices_per_color();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * m);
    for (const Vertex& b : dia_.blacks()) {
        for (const Edge& e : dia_.edges_at_black(b)) {
            double sgn = e.kind == EdgeKind::north ? -1.0 : 1.0;
            trips.emplace_back(dia_.white_index(e.white), dia_.black_index(b),
                               sgn * edge_weight(cfg_, e));
        }
    }
    mat_.resize(m, m);
    mat_.setFromTriplets(trips.begin(), trips.end());
    mat_.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(mat_);
    if (lu_->info() != Eigen::Success)
        throw Error("SingularMatrix: sparse LU of the Kasteleyn matrix failed");
}

double KasteleynMatrix::entry(const Vertex& w, const Vertex& b) const {
    if (std::abs(w.x - b.x) != 1 || std::abs(w.y - b.y) != 1) return 0.0;
    Edge e{w, b, classify_edge(w, b)};
    double sgn = e.kind == EdgeKind::north ? -1.0 : 1.0;
    return sgn * edge_weight(cfg_, e);
}

double KasteleynMatrix::log_partition_function() const {
    return lu_->logAbsDeterminant();
}

Eigen::VectorXd KasteleynMatrix::solve_column(long white_index) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(mat_.rows());
    e(white_index) = 1.0;
    Eigen::VectorXd u = lu_->solve(e);
    // one step of iterative refinement
    Eigen::VectorXd r = e - mat_ * u;
    u += lu_->solve(r);
    r = e - mat_ * u;
    if (r.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, u.cwiseAbs().maxCoeff()))
        throw Error("SolverFailure: Kasteleyn solve residual too large");
    return u;
}

std::vector<double> KasteleynMatrix::inverse_entries(
    const std::vector<std::pair<Vertex, Vertex>>& pairs) const {
    std::map<long, Eigen::VectorXd> cols;
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [b, w] : pairs) {
        long wi = dia_.white_index(w);
        auto it = cols.find(wi);
        if (it == cols.end()) it = cols.emplace(wi, solve_column(wi)).first;
        out.push_back(it->second(dia_.black_index(b)));
    }
    return out;
}

double KasteleynMatrix::edge_probability(const std::vector<Edge>& edges) const {
    size_t k = edges.size();
    if (k == 0) return 1.0;
    if (k > 8) throw Error("SolverFailure: at most 8 edges in a joint probability");
    std::map<long, Eigen::VectorXd> cols;
    for (const Edge& e : edges) {
        long wi = dia_.white_index(e.white);
        if (!cols.count(wi)) cols.emplace(wi, solve_column(wi));
    }
    Eigen::MatrixXd m(k, k);
    for (size_t p = 0; p < k; ++p)
        for (size_t q = 0; q < k; ++q) {
            double kaz = entry(edges[q].white, edges[q].black);
            m(p, q) = kaz * cols.at(dia_.white_index(edges[q].white))(dia_.black_index(edges[p].black));
        }
    return m.determinant();
}

double KasteleynMatrix::particle_correlation(const std::vector<Vertex>& blacks) const {
    size_t k = blacks.size();
    if (k == 0) return 1.0;
    std::map<long, Eigen::VectorXd> cols;
    auto sw_whites = [&](const Vertex& b) {
        std::vector<Vertex> out;
        // south partner (b.x+1, b.y-1), west partner (b.x+1, b.y+1)
        for (int dy : {-1, 1}) {
            int wx = b.x + 1, wy = b.y + dy;
            if (dia_.in_graph(wx, wy)) out.push_back(Vertex{Color::white, wx, wy});
        }
        return out;
    };
    for (const Vertex& b : blacks)
        for (const Vertex& w : sw_whites(b)) {
            long wi = dia_.white_index(w);
            if (!cols.count(wi)) cols.emplace(wi, solve_column(wi));
        }
    Eigen::MatrixXd m(k, k);
    for (size_t p = 0; p < k; ++p)
        for (size_t q = 0; q < k; ++q) {
            double acc = 0.0;
            for (const Vertex& w : sw_whites(blacks[q]))
                acc += entry(w, blacks[q]) * cols.at(dia_.white_index(w))(dia_.black_index(blacks[p]));
            m(p, q) = acc;
        }
    return m.determinant();
}

double KasteleynMatrix::kernel_entry(const Vertex& b1, const Vertex& b2) const {
    // orientation matching k_int: sum over the S/W partners of the FIRST
    // argument, inverse entries in the second argument's row
    double acc = 0.0;
    for (int dy : {-1, 1}) {
        int wx = b1.x + 1, wy = b1.y + dy;
        if (!dia_.in_graph(wx, wy)) continue;
        Vertex w{Color::white, wx, wy};
        acc += entry(w, b1) * solve_column(dia_.white_index(w))(dia_.black_index(b2));
    }
    return acc;
}

CoverList enumerate_covers(const WeightConfig& cfg, int size) {
    if (size > 4) throw Error("SizeCap: enumeration limited to size <= 4");
    Diamond dia(size);
    auto blacks = dia.blacks();
    CoverList out;
    std::vector<bool> white_used(dia.vertices_per_color(), false);
    std::vector<EdgeKind> kinds(blacks.size());
    auto rec = [&](auto&& self, size_t bi, double weight) -> void {
        if (bi == blacks.size()) {
            out.covers.push_back(kinds);
            out.weights.push_back(weight);
            out.total += weight;
            return;
        }
        for (const Edge& e : dia.edges_at_black(blacks[bi])) {
            long wi = dia.white_index(e.white);
            if (white_used[wi]) continue;
            white_used[wi] = true;
            kinds[bi] = e.kind;
            self(self, bi + 1, weight * edge_weight(cfg, e));
            white_used[wi] = false;
        }
    };
    rec(rec, 0, 1.0);
    return out;
}

}  // namespace aztec
