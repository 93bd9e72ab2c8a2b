#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hmt/discretization.hpp"
#include "hmt/model.hpp"
#include "support.hpp"

using namespace hmt;

namespace {

// Direct convolution with the unnormalised kernel exp(-1/(1-r^2)) and zero extension.
double direct_mollified(const Field& f, double mu, const Grid& g, std::size_t i) {
    double total = 0, acc = 0;
    const long n = static_cast<long>(g.n());
    for (long j = -3 * n; j <= 4 * n; ++j) {
        const double r = (static_cast<double>(j) - static_cast<double>(i)) * g.h() / mu;
        if (std::abs(r) >= 1) continue;
        const double w = std::exp(-1.0 / (1.0 - r * r));
        total += w;
        if (j >= 0 && j < n) acc += w * f[static_cast<std::size_t>(j)];
    }
    return acc / total;
}

}  // namespace

TEST(Grid, Geometry) {
    const Grid g(4);
    EXPECT_DOUBLE_EQ(g.h(), 0.25);
    EXPECT_DOUBLE_EQ(g.center(0), 0.125);
    EXPECT_DOUBLE_EQ(g.face(4), 1.0);
    EXPECT_THROW(Grid(3), ConfigError);
}

TEST(Mollify, NarrowKernelIsIdentity) {
    const Grid g(10);
    Field f(10);
    for (std::size_t i = 0; i < 10; ++i) f[i] = std::sin(static_cast<double>(i));
    EXPECT_EQ(mollify(f, 0.4 * g.h(), g), f);
}

TEST(Mollify, PartitionOfUnityAwayFromBoundary) {
    const Grid g(40);
    const double mu = 0.1;
    const Field out = mollify(Field(40, 1.0), mu, g);
    for (std::size_t i = 0; i < 40; ++i)
        if (g.center(i) > mu && g.center(i) < 1 - mu) {
            EXPECT_NEAR(out[i], 1.0, 1e-14);
        }
}

TEST(Mollify, FirstCellMatchesDirectSum) {
    const Grid g(16);
    const Field f(16, 1.0);
    const Field out = mollify(f, 0.25, g);
    EXPECT_NEAR(out[0], direct_mollified(f, 0.25, g, 0), 1e-14);
    EXPECT_LT(out[0], 1.0);
}

TEST(Mollify, RandomFieldMatchesDirectSum) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    const Grid g(30);
    Field f(30);
    for (double& v : f) v = u(rng);
    const Field out = mollify(f, 0.17, g);
    for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(out[i], direct_mollified(f, 0.17, g, i), 1e-14);
}

TEST(Mollify, WeightsSumToOne) {
    const auto w = mollifier_weights(0.3, 0.01);
    double s = w[0];
    for (std::size_t k = 1; k < w.size(); ++k) s += 2 * w[k];
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_THROW(mollifier_weights(0.0, 0.1), NonPositiveRadius);
}

TEST(Cutoff, Examples) {
    EXPECT_DOUBLE_EQ(cutoff(5, 0.1), 5);
    EXPECT_DOUBLE_EQ(cutoff(12, 0.1), 10);
    EXPECT_DOUBLE_EQ(cutoff(2, 0.5), 2);
}

TEST(FaceGradient, ConstantAndLinear) {
    const Grid g(8);
    const FaceField z = face_gradient(Field(8, 3.0), g);
    for (double v : z) EXPECT_EQ(v, 0);
    Field lin(8);
    for (std::size_t i = 0; i < 8; ++i) lin[i] = 2.5 * g.center(i);
    const FaceField d = face_gradient(lin, g);
    EXPECT_EQ(d[0], 0);
    EXPECT_EQ(d[8], 0);
    for (std::size_t f = 1; f < 8; ++f) EXPECT_NEAR(d[f], 2.5, 1e-13);
}

TEST(FaceGradient, RandomMatchesRecomputation) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    const Grid g(8);
    Field f(8);
    for (double& v : f) v = u(rng);
    const FaceField d = face_gradient(f, g);
    for (std::size_t i = 1; i < 8; ++i) EXPECT_DOUBLE_EQ(d[i], (f[i] - f[i - 1]) / g.h());
}

TEST(Divergence, ConstantAndLinearFlux) {
    const Grid g(8);
    for (double v : divergence(FaceField(9, 4.0), g)) EXPECT_EQ(v, 0);
    FaceField lin(9);
    for (std::size_t i = 0; i <= 8; ++i) lin[i] = static_cast<double>(i) * g.h();
    for (double v : divergence(lin, g)) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(Divergence, Telescopes) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    const Grid g(8);
    FaceField flux(9);
    for (double& v : flux) v = u(rng);
    const Field d = divergence(flux, g);
    double s = 0;
    for (double v : d) s += g.h() * v;
    EXPECT_NEAR(s, flux[8] - flux[0], 1e-15);
}

TEST(Shapes, Mismatch) {
    EXPECT_THROW(require_cells(Field(5), Grid(4)), DimensionMismatch);
    EXPECT_THROW(require_faces(FaceField(4), Grid(4)), DimensionMismatch);
    EXPECT_THROW(face_gradient(Field(3), Grid(4)), DimensionMismatch);
}

TEST(RobinMassFlux, Examples) {
    PhysicalParams p = hmt::testing::unit_params();
    p.rho_bar1 = 0.8;
    EXPECT_EQ(robin_mass_flux(0.5 * 0.8, Side::right, 0.5, p), 0);
    p.alpha0 = 2;
    EXPECT_DOUBLE_EQ(robin_mass_flux(3, Side::left, 1, p), 4);
}
