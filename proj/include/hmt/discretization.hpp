#pragma once

// Uniform cell-centred grid on (0,1), discrete mollification, the source
// cutoff and conservative difference operators.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hmt/errors.hpp"

namespace hmt {

struct PhysicalParams;

class Grid {
public:
    /// Throws ConfigError when n < 4.
    explicit Grid(std::size_t n);

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] double h() const { return h_; }
    /// x_i = (i + 1/2) h
    [[nodiscard]] double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h_; }
    /// x_{i-1/2} = i h; face 0 is x = 0, face n is x = 1.
    [[nodiscard]] double face(std::size_t i) const { return static_cast<double>(i) * h_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t n_;
    double h_;
};

namespace detail {
struct CellTag {};
struct FaceTag {};
}  // namespace detail

/// Values on a grid location family. Cell fields carry n values, face fields n + 1.
template <class Tag>
class GridVector {
public:
    GridVector() = default;
    explicit GridVector(std::size_t size, double value = 0.0) : values_(size, value) {}
    explicit GridVector(std::vector<double> values) : values_(std::move(values)) {}

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] const std::vector<double>& vec() const { return values_; }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }
    auto begin() { return values_.begin(); }
    auto end() { return values_.end(); }

    [[nodiscard]] bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const GridVector&, const GridVector&) = default;

private:
    std::vector<double> values_;
};

using Field = GridVector<detail::CellTag>;
using FaceField = GridVector<detail::FaceTag>;

void require_cells(const Field& f, const Grid& grid);
void require_faces(const FaceField& f, const Grid& grid);

enum class Side { left, right };

/// Normalised bump-kernel weights w_0..w_K for offsets k h, |k h| < mu.
/// The symmetric weights (w_K..w_1, w_0, w_1..w_K) sum to one.
std::vector<double> mollifier_weights(double mu, double h);

/// Discrete convolution with the bump kernel of radius mu, f extended by zero
/// outside (0,1).
Field mollify(const Field& f, double mu, const Grid& grid);

/// Clamp at level 1/eps. Taken literally: any |h| >= 1/eps maps to +1/eps,
/// so negative inputs below -1/eps also map to +1/eps. Every call site passes
/// a nonnegative argument, which leaves that branch unreachable.
double cutoff(double hval, double eps);

/// Interior face i carries (f[i] - f[i-1]) / h; both boundary faces are 0.
FaceField face_gradient(const Field& f, const Grid& grid);

/// Cell i carries (flux[i+1] - flux[i]) / h.
Field divergence(const FaceField& flux, const Grid& grid);

/// Total mass flux at a boundary face, in the orientation of the flux inside
/// the divergence: right = alpha1 (s rho_bar1 - rho), left = alpha0 (rho - s rho_bar0).
double robin_mass_flux(double boundary_value, Side side, double s, const PhysicalParams& params);

}  // namespace hmt
