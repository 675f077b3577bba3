#include "core/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace scaleprobe {

SparseMatrix SparseMatrix::fromTriplets(int dim, std::vector<Triplet> triplets) {
    require(dim >= 0, Err::Dimension, "matrix dimension must be nonnegative");
    for (const Triplet& t : triplets) {
        require(t.row >= 0 && t.row < dim && t.col >= 0 && t.col < dim, Err::Dimension,
                "triplet index outside the matrix dimension");
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.dim_ = dim;
    m.rowPtr_.assign(static_cast<std::size_t>(dim) + 1, 0);
    std::size_t i = 0;
    while (i < triplets.size()) {
        const int row = triplets[i].row;
        const int col = triplets[i].col;
        double sum = 0.0;
        while (i < triplets.size() && triplets[i].row == row && triplets[i].col == col) {
            sum += triplets[i].value;
            ++i;
        }
        m.colIdx_.push_back(col);
        m.values_.push_back(sum);
        m.rowPtr_[static_cast<std::size_t>(row) + 1] = static_cast<int>(m.values_.size());
    }
    for (std::size_t r = 1; r < m.rowPtr_.size(); ++r) {
        m.rowPtr_[r] = std::max(m.rowPtr_[r], m.rowPtr_[r - 1]);
    }
    return m;
}

SparseMatrix SparseMatrix::identity(int dim) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) t.push_back({i, i, 1.0});
    return fromTriplets(dim, std::move(t));
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    require(static_cast<int>(x.size()) == dim_ && static_cast<int>(y.size()) == dim_,
            Err::Dimension, "matvec dimension mismatch");
    for (int r = 0; r < dim_; ++r) {
        double sum = 0.0;
        for (int k = rowPtr_[static_cast<std::size_t>(r)]; k < rowPtr_[static_cast<std::size_t>(r) + 1]; ++k) {
            sum += values_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(colIdx_[static_cast<std::size_t>(k)])];
        }
        y[static_cast<std::size_t>(r)] = sum;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(dim_));
    multiply(x, y);
    return y;
}

double SparseMatrix::bilinear(std::span<const double> u, std::span<const double> v) const {
    require(static_cast<int>(u.size()) == dim_ && static_cast<int>(v.size()) == dim_,
            Err::Dimension, "bilinear form dimension mismatch");
    double total = 0.0;
    for (int r = 0; r < dim_; ++r) {
        double sum = 0.0;
        for (int k = rowPtr_[static_cast<std::size_t>(r)]; k < rowPtr_[static_cast<std::size_t>(r) + 1]; ++k) {
            sum += values_[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(colIdx_[static_cast<std::size_t>(k)])];
        }
        total += v[static_cast<std::size_t>(r)] * sum;
    }
    return total;
}

double SparseMatrix::at(int row, int col) const {
    require(row >= 0 && row < dim_ && col >= 0 && col < dim_, Err::Dimension,
            "matrix index out of range");
    for (int k = rowPtr_[static_cast<std::size_t>(row)]; k < rowPtr_[static_cast<std::size_t>(row) + 1]; ++k) {
        if (colIdx_[static_cast<std::size_t>(k)] == col) return values_[static_cast<std::size_t>(k)];
    }
    return 0.0;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(static_cast<std::size_t>(dim_), 0.0);
    for (int r = 0; r < dim_; ++r) d[static_cast<std::size_t>(r)] = at(r, r);
    return d;
}

SparseMatrix SparseMatrix::restricted(const std::vector<int>& keep) const {
    std::vector<int> map(static_cast<std::size_t>(dim_), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        require(keep[i] >= 0 && keep[i] < dim_, Err::Dimension, "restriction index out of range");
        map[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    }
    std::vector<Triplet> t;
    for (int r = 0; r < dim_; ++r) {
        const int rr = map[static_cast<std::size_t>(r)];
        if (rr < 0) continue;
        for (int k = rowPtr_[static_cast<std::size_t>(r)]; k < rowPtr_[static_cast<std::size_t>(r) + 1]; ++k) {
            const int cc = map[static_cast<std::size_t>(colIdx_[static_cast<std::size_t>(k)])];
            if (cc >= 0) t.push_back({rr, cc, values_[static_cast<std::size_t>(k)]});
        }
    }
    return fromTriplets(static_cast<int>(keep.size()), std::move(t));
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other) const {
    require(dim_ == other.dim_, Err::Dimension, "matrix sum dimension mismatch");
    std::vector<Triplet> t;
    t.reserve(values_.size() + other.values_.size());
    for (int r = 0; r < dim_; ++r) {
        for (int k = rowPtr_[static_cast<std::size_t>(r)]; k < rowPtr_[static_cast<std::size_t>(r) + 1]; ++k) {
            t.push_back({r, colIdx_[static_cast<std::size_t>(k)], values_[static_cast<std::size_t>(k)]});
        }
        for (int k = other.rowPtr_[static_cast<std::size_t>(r)]; k < other.rowPtr_[static_cast<std::size_t>(r) + 1]; ++k) {
            t.push_back({r, other.colIdx_[static_cast<std::size_t>(k)], other.values_[static_cast<std::size_t>(k)]});
        }
    }
    return fromTriplets(dim_, std::move(t));
}

double SparseMatrix::maxAbsAsymmetry() const {
    double worst = 0.0;
    for (int r = 0; r < dim_; ++r) {
        for (int k = rowPtr_[static_cast<std::size_t>(r)]; k < rowPtr_[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = colIdx_[static_cast<std::size_t>(k)];
            worst = std::max(worst, std::abs(values_[static_cast<std::size_t>(k)] - at(c, r)));
        }
    }
    return worst;
}

std::vector<double> SparseMatrix::toDense() const {
    std::vector<double> dense(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_), 0.0);
    for (int r = 0; r < dim_; ++r) {
        for (int k = rowPtr_[static_cast<std::size_t>(r)]; k < rowPtr_[static_cast<std::size_t>(r) + 1]; ++k) {
            dense[static_cast<std::size_t>(r) * dim_ + colIdx_[static_cast<std::size_t>(k)]] =
                values_[static_cast<std::size_t>(k)];
        }
    }
    return dense;
}

std::vector<double> denseSolve(std::vector<double> a, std::vector<double> b, int n) {
    require(static_cast<std::size_t>(n) * n == a.size() && static_cast<int>(b.size()) == n,
            Err::Dimension, "dense solve dimension mismatch");
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double tiny = std::max(scale, 1.0) * 1e-300;

    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(a[static_cast<std::size_t>(k) * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const double cand = std::abs(a[static_cast<std::size_t>(r) * n + k]);
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        require(best > tiny, Err::Singularity, "singular system in dense elimination");
        if (pivot != k) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(k) * n + c], a[static_cast<std::size_t>(pivot) * n + c]);
            }
            std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(pivot)]);
        }
        const double inv = 1.0 / a[static_cast<std::size_t>(k) * n + k];
        for (int r = k + 1; r < n; ++r) {
            const double factor = a[static_cast<std::size_t>(r) * n + k] * inv;
            if (factor == 0.0) continue;
            a[static_cast<std::size_t>(r) * n + k] = 0.0;
            for (int c = k + 1; c < n; ++c) {
                a[static_cast<std::size_t>(r) * n + c] -= factor * a[static_cast<std::size_t>(k) * n + c];
            }
            b[static_cast<std::size_t>(r)] -= factor * b[static_cast<std::size_t>(k)];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double sum = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) {
            sum -= a[static_cast<std::size_t>(r) * n + c] * b[static_cast<std::size_t>(c)];
        }
        b[static_cast<std::size_t>(r)] = sum / a[static_cast<std::size_t>(r) * n + r];
    }
    return b;
}

} // namespace scaleprobe
