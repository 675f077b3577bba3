#pragma once

#include <span>
#include <vector>

#include "core/common.hpp"

namespace scaleprobe {

/// Compressed sparse row matrix assembled from (row, col, value) triplets;
/// duplicate entries are summed in a deterministic order.
class SparseMatrix {
public:
    struct Triplet {
        int row;
        int col;
        double value;
    };

    SparseMatrix() = default;
    static SparseMatrix fromTriplets(int dim, std::vector<Triplet> triplets);
    static SparseMatrix identity(int dim);

    int dim() const { return dim_; }
    std::size_t nonZeroCount() const { return values_.size(); }

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    /// v' * A * u
    double bilinear(std::span<const double> u, std::span<const double> v) const;

    double at(int row, int col) const;
    std::vector<double> diagonal() const;

    /// Submatrix on the given (sorted) index set, reindexed densely.
    SparseMatrix restricted(const std::vector<int>& keep) const;

    SparseMatrix plus(const SparseMatrix& other) const;
    double maxAbsAsymmetry() const;

    std::vector<double> toDense() const; // row-major dim x dim

private:
    int dim_ = 0;
    std::vector<int> rowPtr_;
    std::vector<int> colIdx_;
    std::vector<double> values_;
};

/// Dense LU solve with partial pivoting (row-major matrix, overwritten).
/// Errors with Err::Singularity when a pivot collapses.
std::vector<double> denseSolve(std::vector<double> matrix, std::vector<double> rhs, int dim);

} // namespace scaleprobe
