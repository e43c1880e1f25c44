#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gadepth {

// Dense row-major matrix of doubles. Deliberately minimal: the model code
// only ever gathers sub-matrices and walks rows.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(values.data() + r * cols, cols);
    }
};

// Sub-matrix of the given rows and columns, in the order given.
inline Matrix gather(const Matrix& x, std::span<const std::size_t> row_idx,
                     std::span<const std::size_t> col_idx) {
    Matrix out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        const double* src = x.values.data() + row_idx[i] * x.cols;
        double* dst = out.values.data() + i * out.cols;
        for (std::size_t j = 0; j < col_idx.size(); ++j) dst[j] = src[col_idx[j]];
    }
    return out;
}

}  // namespace gadepth
