#include "hmt/discretization.hpp"

#include <cmath>

#include "hmt/model.hpp"

namespace hmt {

Grid::Grid(std::size_t n) : n_(n), h_(n == 0 ? 0.0 : 1.0 / static_cast<double>(n)) {
    if (n < 4) throw ConfigError("grid needs at least 4 cells, got " + std::to_string(n));
}

void require_cells(const Field& f, const Grid& grid) {
    if (f.size() != grid.n()) throw DimensionMismatch(grid.n(), f.size());
}

void require_faces(const FaceField& f, const Grid& grid) {
    if (f.size() != grid.n() + 1) throw DimensionMismatch(grid.n() + 1, f.size());
}

std::vector<double> mollifier_weights(double mu, double h) {
    if (!(mu > 0)) throw NonPositiveRadius(mu);
    std::vector<double> w;
    for (std::size_t k = 0;; ++k) {
        const double r = static_cast<double>(k) * h / mu;
        if (r >= 1.0) break;
        w.push_back(std::exp(-1.0 / (1.0 - r * r)));
    }
    double total = w[0];
    for (std::size_t k = 1; k < w.size(); ++k) total += 2.0 * w[k];
    for (double& v : w) v /= total;
    return w;
}

Field mollify(const Field& f, double mu, const Grid& grid) {
    require_cells(f, grid);
    const auto w = mollifier_weights(mu, grid.h());
    if (w.size() == 1) return f;

    const auto n = static_cast<std::ptrdiff_t>(grid.n());
    const auto reach = static_cast<std::ptrdiff_t>(w.size()) - 1;
    Field out(grid.n());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = w[0] * f[static_cast<std::size_t>(i)];
        for (std::ptrdiff_t k = 1; k <= reach; ++k) {
            const double wk = w[static_cast<std::size_t>(k)];
            if (i - k >= 0) acc += wk * f[static_cast<std::size_t>(i - k)];
            if (i + k < n) acc += wk * f[static_cast<std::size_t>(i + k)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

double cutoff(double hval, double eps) {
    const double level = 1.0 / eps;
    return std::abs(hval) <= level ? hval : level;
}

FaceField face_gradient(const Field& f, const Grid& grid) {
    require_cells(f, grid);
    FaceField g(grid.n() + 1, 0.0);
    for (std::size_t i = 1; i < grid.n(); ++i) g[i] = (f[i] - f[i - 1]) / grid.h();
    return g;
}

Field divergence(const FaceField& flux, const Grid& grid) {
    require_faces(flux, grid);
    Field d(grid.n());
    for (std::size_t i = 0; i < grid.n(); ++i) d[i] = (flux[i + 1] - flux[i]) / grid.h();
    return d;
}

double robin_mass_flux(double boundary_value, Side side, double s, const PhysicalParams& params) {
    if (side == Side::right) return params.alpha1 * (s * params.rho_bar1 - boundary_value);
    return params.alpha0 * (boundary_value - s * params.rho_bar0);
}

}  // namespace hmt
