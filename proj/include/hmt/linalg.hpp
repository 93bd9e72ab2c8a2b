#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmt/errors.hpp"

namespace hmt {

/// Row i reads lower[i-1] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
struct TridiagonalSystem {
    std::vector<double> lower;  ///< n - 1 entries
    std::vector<double> diag;   ///< n entries
    std::vector<double> upper;  ///< n - 1 entries
    std::vector<double> rhs;    ///< n entries

    TridiagonalSystem() = default;
    explicit TridiagonalSystem(std::size_t n)
        : lower(n > 0 ? n - 1 : 0, 0.0), diag(n, 0.0), upper(n > 0 ? n - 1 : 0, 0.0), rhs(n, 0.0) {}

    [[nodiscard]] std::size_t size() const { return diag.size(); }
    /// Throws DimensionMismatch on inconsistent lengths.
    void check_shape() const;
    /// First row that is not strictly diagonally dominant, or size() when all are.
    [[nodiscard]] std::size_t first_non_dominant_row() const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
    [[nodiscard]] double norm_inf() const;
};

/// Thomas sweep without pivoting. Throws ZeroPivot when a pivot falls below
/// 1e-14 max|diag|.
std::vector<double> solve_thomas(const TridiagonalSystem& sys);

/// Row-major dense matrix, used as a test oracle.
class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    static DenseMatrix from(const TridiagonalSystem& sys);

    [[nodiscard]] std::size_t size() const { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

private:
    std::size_t n_;
    std::vector<double> a_;
};

/// Gaussian elimination with partial pivoting. Throws SingularMatrix.
std::vector<double> dense_solve(DenseMatrix matrix, std::vector<double> rhs);

}  // namespace hmt
