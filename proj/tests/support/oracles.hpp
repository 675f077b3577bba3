// Small self-contained numerical oracles for the tests. These deliberately
// avoid the library's solver and assembly paths so the comparisons stay
// independent: Gauss-Jordan elimination for linear systems and a cyclic
// Jacobi eigensolver for symmetric matrices.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracles {

// Solve a dense system by Gauss-Jordan elimination with partial pivoting.
inline std::vector<double> gaussJordanSolve(std::vector<double> a, std::vector<double> b,
                                            int n) {
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        for (int r = k + 1; r < n; ++r) {
            if (std::abs(a[static_cast<size_t>(r) * n + k]) >
                std::abs(a[static_cast<size_t>(pivot) * n + k])) {
                pivot = r;
            }
        }
        if (a[static_cast<size_t>(pivot) * n + k] == 0.0) {
            throw std::runtime_error("oracle: singular matrix");
        }
        for (int c = 0; c < n; ++c) {
            std::swap(a[static_cast<size_t>(k) * n + c], a[static_cast<size_t>(pivot) * n + c]);
        }
        std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(pivot)]);
        const double inv = 1.0 / a[static_cast<size_t>(k) * n + k];
        for (int c = 0; c < n; ++c) a[static_cast<size_t>(k) * n + c] *= inv;
        b[static_cast<size_t>(k)] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == k) continue;
            const double factor = a[static_cast<size_t>(r) * n + k];
            if (factor == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[static_cast<size_t>(r) * n + c] -= factor * a[static_cast<size_t>(k) * n + c];
            }
            b[static_cast<size_t>(r)] -= factor * b[static_cast<size_t>(k)];
        }
    }
    return b;
}

// All eigenvalues of a symmetric matrix by the cyclic Jacobi rotation method.
inline std::vector<double> jacobiEigenvalues(std::vector<double> a, int n) {
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                off += a[static_cast<size_t>(i) * n + j] * a[static_cast<size_t>(i) * n + j];
            }
        }
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<size_t>(p) * n + q];
                if (apq == 0.0) continue;
                const double app = a[static_cast<size_t>(p) * n + p];
                const double aqq = a[static_cast<size_t>(q) * n + q];
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[static_cast<size_t>(k) * n + p];
                    const double akq = a[static_cast<size_t>(k) * n + q];
                    a[static_cast<size_t>(k) * n + p] = c * akp - s * akq;
                    a[static_cast<size_t>(k) * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[static_cast<size_t>(p) * n + k];
                    const double aqk = a[static_cast<size_t>(q) * n + k];
                    a[static_cast<size_t>(p) * n + k] = c * apk - s * aqk;
                    a[static_cast<size_t>(q) * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = a[static_cast<size_t>(i) * n + i];
    return eig;
}

// Dense Cholesky factorization (lower triangular).
inline std::vector<double> cholesky(std::vector<double> a, int n) {
    std::vector<double> l(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a[static_cast<size_t>(i) * n + j];
            for (int k = 0; k < j; ++k) {
                sum -= l[static_cast<size_t>(i) * n + k] * l[static_cast<size_t>(j) * n + k];
            }
            if (i == j) {
                if (sum <= 0.0) throw std::runtime_error("oracle: matrix not SPD");
                l[static_cast<size_t>(i) * n + i] = std::sqrt(sum);
            } else {
                l[static_cast<size_t>(i) * n + j] = sum / l[static_cast<size_t>(j) * n + j];
            }
        }
    }
    return l;
}

} // namespace oracles
