#pragma once

#include "ssae/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ssae {

/// Euclidean projection of v onto the l1 ball of the given radius.
///
/// Sort-and-scan soft threshold: when ||v||_1 > radius there is a unique
/// theta > 0 with sum_i max(|v_i| - theta, 0) == radius, and the projection
/// is sign(v) * max(|v| - theta, 0). Thresholded entries are written as
/// literal 0.0 so downstream sparsity masks are exact.
template <typename Derived>
Vector project_l1_ball(const Eigen::MatrixBase<Derived>& v, double radius) {
    require(radius >= 0.0, "project_l1_ball: radius must be >= 0");
    Vector x = v;
    const Index n = x.size();
    if (radius == 0.0) return Vector::Zero(n);
    if (x.cwiseAbs().sum() <= radius) return x;

    Vector u = x.cwiseAbs();
    std::sort(u.data(), u.data() + n, std::greater<double>());

    double cumsum = 0.0;
    double theta = 0.0;
    for (Index j = 0; j < n; ++j) {
        cumsum += u[j];
        const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) {
            theta = candidate;
        } else {
            break;
        }
    }

    for (Index i = 0; i < n; ++i) {
        const double mag = std::abs(x[i]) - theta;
        x[i] = mag > 0.0 ? (x[i] > 0.0 ? mag : -mag) : 0.0;
    }
    return x;
}

/// Sum of absolute entries (the quantity the two-stage projection bounds).
template <typename Derived>
double l11_norm(const Eigen::MatrixBase<Derived>& w) {
    return w.cwiseAbs().sum();
}

/// Two-stage l1,1 projection producing row-sparse matrices.
///
/// Stage 1 projects the vector of row l1-norms onto the l1 ball of radius
/// eta, yielding a per-row budget t_i; stage 2 projects each row onto the
/// l1 ball of radius t_i. Rows whose budget is thresholded to zero come out
/// entirely zero, and l11_norm(result) <= eta.
inline Matrix project_l11(const Matrix& w, double eta) {
    require(eta >= 0.0, "project_l11: eta must be >= 0");
    Vector row_norms(w.rows());
    for (Index i = 0; i < w.rows(); ++i) row_norms[i] = w.row(i).cwiseAbs().sum();
    if (row_norms.sum() <= eta) return w;

    const Vector budgets = project_l1_ball(row_norms, eta);
    Matrix out(w.rows(), w.cols());
    for (Index i = 0; i < w.rows(); ++i) {
        if (budgets[i] == 0.0) {
            out.row(i).setZero();
        } else if (row_norms[i] <= budgets[i]) {
            out.row(i) = w.row(i);
        } else {
            out.row(i) = project_l1_ball(w.row(i).transpose(), budgets[i]).transpose();
        }
    }
    return out;
}

}  // namespace ssae
