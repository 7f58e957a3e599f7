#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "aztec/model.hpp"

namespace aztec {

// Exact finite-size ground truth. Entries are real: the Kasteleyn sign is -1
// on north edges and +1 otherwise. Row index = white, column = black.
class KasteleynMatrix {
public:
    // size_cap bounds vertices per color (sparse solves degrade well before
    // the memory limit; see README numerics notes).
    KasteleynMatrix(const WeightConfig& cfg, int size, long size_cap = 40000);

    const Diamond& diamond() const { return dia_; }
    const Eigen::SparseMatrix<double>& matrix() const { return mat_; }
    double entry(const Vertex& w, const Vertex& b) const;

    // log |det K| (= log Z) from the sparse LU factorization.
    double log_partition_function() const;

    // K^{-1}(b, w) for the requested pairs, via one solve per distinct white.
    std::vector<double> inverse_entries(const std::vector<std::pair<Vertex, Vertex>>& pairs) const;

    // Kenyon's formula: joint inclusion probability of k <= 8 edges.
    double edge_probability(const std::vector<Edge>& edges) const;

    // rho_k at black points: det of the south/west-summed matrix.
    double particle_correlation(const std::vector<Vertex>& blacks) const;

    // The kernel entry L(b1; b2) = sum_q K(w_{1q}, b1) K^{-1}(b2, w_{1q}) with
    // the orientation used by the contour formula (see kernel module notes).
    // Correlation determinants are the same in either orientation.
    double kernel_entry(const Vertex& b1, const Vertex& b2) const;

private:
    Eigen::VectorXd solve_column(long white_index) const;  // K u = e_w

    WeightConfig cfg_;
    Diamond dia_;
    Eigen::SparseMatrix<double> mat_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

// All perfect matchings with weights, sizes <= 4. A cover lists, per black
// index, the kind of its matched edge.
struct CoverList {
    std::vector<std::vector<EdgeKind>> covers;
    std::vector<double> weights;
    double total = 0;
};

CoverList enumerate_covers(const WeightConfig& cfg, int size);

}  // namespace aztec
