#pragma once

#include "ssae/types.hpp"

#include <vector>

namespace ssae {

/// Symmetrized kNN connectivity graph. Edge (i,j) is present iff (j,i) is,
/// with equal weight; no self-loops.
struct AffinityGraph {
    int n = 0;
    std::vector<std::vector<int>> neighbors;   // sorted per node
    std::vector<std::vector<double>> weights;  // parallel to neighbors
};

struct LabelDistribution {
    Matrix f;  // n×k, rows sum to 1
    bool has_unreachable = false;
    int iterations = 0;
};

/// Edges to the k nearest Euclidean neighbors (weight 1), union-symmetrized.
/// Distance ties break toward the lower index.
AffinityGraph knn_affinity(const Matrix& x, int k_neighbors);

/// Hard-clamped diffusion: f ← D⁻¹A·f, labeled rows reset to their one-hot
/// labels, until max |Δf| < tol or max_iter. y_partial uses -1 for unlabeled.
/// Unlabeled nodes unreachable from any labeled node end up uniform and set
/// the has_unreachable flag.
LabelDistribution label_propagation(const AffinityGraph& g, const Labels& y_partial, int k,
                                    double tol = 1e-3, int max_iter = 1000);

/// Soft-clamped diffusion: f ← α·S·f + (1−α)·y0 with S = D^{-1/2} A D^{-1/2}.
LabelDistribution label_spreading(const AffinityGraph& g, const Labels& y_partial, int k,
                                  double alpha = 0.2, double tol = 1e-3, int max_iter = 1000);

}  // namespace ssae
