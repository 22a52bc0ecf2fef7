#pragma once

#include "ssae/rng.hpp"
#include "ssae/types.hpp"

#include <cstdio>
#include <vector>

namespace ssae {

/// Checked matrix product. Eigen's single-threaded GEMM has a fixed
/// summation order, so results are reproducible run to run.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ (" +
                                      std::to_string(a.cols()) + " vs " +
                                      std::to_string(b.rows()) + ")");
    return a * b;
}

/// i.i.d. normal entries, filled in row-major order.
inline Matrix sample_gaussian(Rng& rng, Index rows, Index cols, double mean, double std) {
    require(std >= 0.0, "sample_gaussian: std must be >= 0");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.gaussian(mean, std);
    return m;
}

/// New matrix of the selected rows, in the given order. Duplicates allowed.
inline Matrix row_slice(const Matrix& m, const std::vector<int>& indices) {
    Matrix out(static_cast<Index>(indices.size()), m.cols());
    for (size_t i = 0; i < indices.size(); ++i) {
        require(indices[i] >= 0 && indices[i] < m.rows(),
                "row_slice: index " + std::to_string(indices[i]) + " out of range");
        out.row(static_cast<Index>(i)) = m.row(indices[i]);
    }
    return out;
}

template <typename T>
std::vector<T> subset(const std::vector<T>& v, const std::vector<int>& indices) {
    std::vector<T> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(v.at(static_cast<size_t>(i)));
    return out;
}

}  // namespace ssae
