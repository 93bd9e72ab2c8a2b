#include "hmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hmt {

void TridiagonalSystem::check_shape() const {
    const std::size_t n = diag.size();
    const std::size_t off = n > 0 ? n - 1 : 0;
    if (rhs.size() != n) throw DimensionMismatch(n, rhs.size());
    if (lower.size() != off) throw DimensionMismatch(off, lower.size());
    if (upper.size() != off) throw DimensionMismatch(off, upper.size());
}

std::size_t TridiagonalSystem::first_non_dominant_row() const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        if (i > 0) off += std::abs(lower[i - 1]);
        if (i + 1 < n) off += std::abs(upper[i]);
        if (!(std::abs(diag[i]) > off)) return i;
    }
    return n;
}

std::vector<double> TridiagonalSystem::multiply(std::span<const double> x) const {
    const std::size_t n = diag.size();
    if (x.size() != n) throw DimensionMismatch(n, x.size());
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * x[i];
        if (i > 0) acc += lower[i - 1] * x[i - 1];
        if (i + 1 < n) acc += upper[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

double TridiagonalSystem::norm_inf() const {
    const std::size_t n = diag.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) row += std::abs(lower[i - 1]);
        if (i + 1 < n) row += std::abs(upper[i]);
        best = std::max(best, row);
    }
    return best;
}

std::vector<double> solve_thomas(const TridiagonalSystem& sys) {
    sys.check_shape();
    const std::size_t n = sys.size();
    if (n == 0) return {};

    double max_diag = 0.0;
    for (double d : sys.diag) max_diag = std::max(max_diag, std::abs(d));
    const double pivot_floor = 1e-14 * max_diag;

    std::vector<double> c(n, 0.0);
    std::vector<double> x(n, 0.0);

    double pivot = sys.diag[0];
    if (!(std::abs(pivot) > pivot_floor)) throw ZeroPivot(0);
    if (n > 1) c[0] = sys.upper[0] / pivot;
    x[0] = sys.rhs[0] / pivot;

    // forward elimination
    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.lower[i - 1] * c[i - 1];
        if (!(std::abs(pivot) > pivot_floor)) throw ZeroPivot(i);
        if (i + 1 < n) c[i] = sys.upper[i] / pivot;
        x[i] = (sys.rhs[i] - sys.lower[i - 1] * x[i - 1]) / pivot;
    }
    // back substitution
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

DenseMatrix DenseMatrix::from(const TridiagonalSystem& sys) {
    sys.check_shape();
    const std::size_t n = sys.size();
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = sys.diag[i];
        if (i > 0) m(i, i - 1) = sys.lower[i - 1];
        if (i + 1 < n) m(i, i + 1) = sys.upper[i];
    }
    return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw DimensionMismatch(n_, x.size());
    std::vector<double> y(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n_; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch(n, b.size());

    double scale = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(a(r, c)));
    if (scale == 0.0 && n > 0) throw SingularMatrix("matrix is zero");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
        if (std::abs(a(p, k)) <= 1e-14 * scale)
            throw SingularMatrix("singular matrix at column " + std::to_string(k));
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
            std::swap(b[k], b[p]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double m = a(r, k) / a(k, k);
            if (m == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) a(r, c) -= m * a(k, c);
            b[r] -= m * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double acc = b[k];
        for (std::size_t c = k + 1; c < n; ++c) acc -= a(k, c) * x[c];
        x[k] = acc / a(k, k);
    }
    return x;
}

}  // namespace hmt
