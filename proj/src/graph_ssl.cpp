#include "ssae/graph_ssl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace ssae {

namespace {

void check_partial_labels(const Labels& y_partial, int n, int k) {
    require(static_cast<int>(y_partial.size()) == n, "partial labels: length must equal node count");
    std::vector<bool> seen(static_cast<size_t>(k), false);
    for (int label : y_partial) {
        if (label == -1) continue;
        require(label >= 0 && label < k, "partial labels: class id out of range");
        seen[static_cast<size_t>(label)] = true;
    }
    for (int c = 0; c < k; ++c)
        if (!seen[static_cast<size_t>(c)])
            throw ConfigError("graph ssl: class " + std::to_string(c) + " has no labeled sample");
}

Matrix one_hot_rows(const Labels& y_partial, int n, int k) {
    Matrix y0 = Matrix::Zero(n, k);
    for (int i = 0; i < n; ++i)
        if (y_partial[static_cast<size_t>(i)] >= 0) y0(i, y_partial[static_cast<size_t>(i)]) = 1.0;
    return y0;
}

Vector degrees(const AffinityGraph& g) {
    Vector deg = Vector::Zero(g.n);
    for (int i = 0; i < g.n; ++i)
        for (double w : g.weights[static_cast<size_t>(i)]) deg[i] += w;
    return deg;
}

// Rows that received no mass stay uniform; flag them when unlabeled.
void renormalize_rows(LabelDistribution& ld, const Labels& y_partial, int k) {
    for (Index i = 0; i < ld.f.rows(); ++i) {
        const double s = ld.f.row(i).sum();
        if (s <= 1e-300) {
            ld.f.row(i).setConstant(1.0 / static_cast<double>(k));
            if (y_partial[static_cast<size_t>(i)] == -1) ld.has_unreachable = true;
        } else {
            ld.f.row(i) /= s;
        }
    }
}

}  // namespace

AffinityGraph knn_affinity(const Matrix& x, int k_neighbors) {
    const int n = static_cast<int>(x.rows());
    if (k_neighbors < 1 || k_neighbors >= n)
        throw ConfigError("knn_affinity: k_neighbors must be in 1..n-1 (got " +
                          std::to_string(k_neighbors) + " for n=" + std::to_string(n) + ")");

    // Pairwise squared distances via the Gram matrix; clamp tiny negatives.
    const Vector sq = x.rowwise().squaredNorm();
    Matrix d2 = (-2.0 * (x * x.transpose())).eval();
    d2.colwise() += sq;
    d2.rowwise() += sq.transpose();
    d2 = d2.cwiseMax(0.0);

    std::set<std::pair<int, int>> edges;
    std::vector<std::pair<double, int>> candidates;
    candidates.reserve(static_cast<size_t>(n) - 1);
    for (int i = 0; i < n; ++i) {
        candidates.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) candidates.emplace_back(d2(i, j), j);
        std::partial_sort(candidates.begin(), candidates.begin() + k_neighbors, candidates.end());
        for (int t = 0; t < k_neighbors; ++t) {
            const int j = candidates[static_cast<size_t>(t)].second;
            edges.emplace(std::min(i, j), std::max(i, j));
        }
    }

    AffinityGraph g;
    g.n = n;
    g.neighbors.resize(static_cast<size_t>(n));
    g.weights.resize(static_cast<size_t>(n));
    for (const auto& [i, j] : edges) {
        g.neighbors[static_cast<size_t>(i)].push_back(j);
        g.neighbors[static_cast<size_t>(j)].push_back(i);
    }
    for (int i = 0; i < n; ++i) {
        std::sort(g.neighbors[static_cast<size_t>(i)].begin(), g.neighbors[static_cast<size_t>(i)].end());
        g.weights[static_cast<size_t>(i)].assign(g.neighbors[static_cast<size_t>(i)].size(), 1.0);
    }
    return g;
}

LabelDistribution label_propagation(const AffinityGraph& g, const Labels& y_partial, int k,
                                    double tol, int max_iter) {
    check_partial_labels(y_partial, g.n, k);
    const Vector deg = degrees(g);

    LabelDistribution ld;
    ld.f = one_hot_rows(y_partial, g.n, k);
    Matrix next(g.n, k);
    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < g.n; ++i) {
            Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(k);
            const auto& nbrs = g.neighbors[static_cast<size_t>(i)];
            const auto& wts = g.weights[static_cast<size_t>(i)];
            for (size_t t = 0; t < nbrs.size(); ++t) acc += wts[t] * ld.f.row(nbrs[t]);
            next.row(i) = deg[i] > 0.0 ? (acc / deg[i]).eval() : acc;
        }
        for (int i = 0; i < g.n; ++i) {
            const int label = y_partial[static_cast<size_t>(i)];
            if (label >= 0) {
                next.row(i).setZero();
                next(i, label) = 1.0;
            }
        }
        const double delta = (next - ld.f).cwiseAbs().maxCoeff();
        ld.f = next;
        ld.iterations = iter + 1;
        if (delta < tol) break;
    }
    renormalize_rows(ld, y_partial, k);
    return ld;
}

LabelDistribution label_spreading(const AffinityGraph& g, const Labels& y_partial, int k,
                                  double alpha, double tol, int max_iter) {
    require(alpha > 0.0 && alpha < 1.0, "label_spreading: alpha must lie in (0, 1)");
    check_partial_labels(y_partial, g.n, k);
    const Vector deg = degrees(g);
    Vector inv_sqrt_deg(g.n);
    for (int i = 0; i < g.n; ++i) inv_sqrt_deg[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;

    const Matrix y0 = one_hot_rows(y_partial, g.n, k);
    LabelDistribution ld;
    ld.f = y0;
    Matrix next(g.n, k);
    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < g.n; ++i) {
            Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(k);
            const auto& nbrs = g.neighbors[static_cast<size_t>(i)];
            const auto& wts = g.weights[static_cast<size_t>(i)];
            for (size_t t = 0; t < nbrs.size(); ++t)
                acc += wts[t] * inv_sqrt_deg[nbrs[t]] * ld.f.row(nbrs[t]);
            next.row(i) = alpha * inv_sqrt_deg[i] * acc + (1.0 - alpha) * y0.row(i);
        }
        const double delta = (next - ld.f).cwiseAbs().maxCoeff();
        ld.f = next;
        ld.iterations = iter + 1;
        if (delta < tol) break;
    }
    renormalize_rows(ld, y_partial, k);
    return ld;
}

}  // namespace ssae
