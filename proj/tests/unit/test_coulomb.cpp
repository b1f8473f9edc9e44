#include "doctest.h"

#include "hartree/coulomb.hpp"
#include "hartree/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace hartree;
using std::numbers::pi;

namespace {

std::shared_ptr<const RadialGrid> radial(double r_max, int n, int d) {
    return std::make_shared<const RadialGrid>(make_radial_grid(r_max, n, d));
}

// Potential of e^{-r^2/2}/(2 pi) in the plane under the 3D kernel.
double gaussian_potential_2d(double r) {
    return std::sqrt(pi / 2) * std::exp(-r * r / 4) * std::cyl_bessel_i(0.0, r * r / 4);
}

GridField planar_gaussian(std::shared_ptr<const CartesianGrid> g, double cx = 0) {
    return sample(std::move(g), [cx](const auto& x) {
        const double dx = x[0] - cx;
        return std::exp(-(dx * dx + x[1] * x[1]) / 2) / (2 * pi);
    });
}

} // namespace

TEST_CASE("elliptic integral against the standard library") {
    for (double k : {0.0, 0.1, 0.5, 0.9, 0.99, 0.999999}) {
        CHECK(elliptic_k(k) == doctest::Approx(std::comp_ellint_1(k)).epsilon(1e-12));
        const double kp = std::sqrt(1 - k * k);
        CHECK(elliptic_k_from_complement(kp) == doctest::Approx(std::comp_ellint_1(k)).epsilon(1e-10));
    }
    // log behaviour near k = 1
    const double kp = 1e-9;
    CHECK(elliptic_k_from_complement(kp) == doctest::Approx(std::log(4 / kp)).epsilon(1e-12));
}

TEST_CASE("ring kernel against direct angular quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    for (auto [r, s] : {std::pair{1.0, 0.3}, std::pair{2.0, 5.0}, std::pair{0.7, 0.8}}) {
        const double direct = gauss_kronrod<double, 61>::integrate(
            [r = r, s = s](double t) { return 1 / std::sqrt(r * r + s * s - 2 * r * s * std::cos(t)); }, 0, 2 * pi, 15,
            1e-14);
        CHECK(ring_kernel(r, s) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("radial potential rejects bad dimensions") {
    const auto g = radial(10, 200, 3);
    auto rho = sample(g, [](double r) { return std::exp(-r); });
    auto bad = std::make_shared<RadialGrid>(*g);
    bad->d = 4;
    rho.grid = bad;
    CHECK_THROWS_AS(radial_potential(rho, 4), ConfigError);
}

TEST_CASE("Newton exactness for a uniform ball") {
    const auto g = radial(6, 3000, 3);
    const auto rho = sample(g, [](double r) { return r <= 1 ? 3 / (4 * pi) : 0.0; });
    const double mass = rho.integrate();
    CHECK(mass == doctest::Approx(1).epsilon(1e-2));
    const auto v = radial_potential(rho, 3);
    for (std::size_t i = 0; i < g->size(); ++i)
        if (g->r[i] >= 2) CHECK(std::abs(v.values[i] - mass / g->r[i]) <= 1e-10 * mass);
    CHECK(std::abs(radial_potential_at(rho, 3, 2.0) - mass / 2) <= 1e-10);
}

TEST_CASE("Newton exactness for a compact smooth bump") {
    const auto g = radial(12, 1500, 3);
    const auto rho = sample(g, [](double r) { return r < 3 ? std::pow(1 - r * r / 9, 3) : 0.0; });
    const double mass = rho.integrate();
    const auto v = radial_potential(rho, 3);
    for (std::size_t i = 0; i < g->size(); ++i)
        if (g->r[i] >= 4) CHECK(std::abs(v.values[i] - mass / g->r[i]) <= 1e-10 * mass);
}

TEST_CASE("planar far-field monopole of a narrow Gaussian") {
    const double s = 0.01;
    const auto g = radial(10, 4000, 2);
    const auto rho = sample(g, [s](double r) { return std::exp(-r * r / (2 * s * s)) / (2 * pi * s * s); });
    CHECK(std::abs(radial_potential_at(rho, 2, 5.0) - 0.2) < 1e-4);
}

TEST_CASE("planar Gaussian potential against the closed form") {
    const auto g = radial(40, 2000, 2);
    const auto rho = sample(g, [](double r) { return std::exp(-r * r / 2) / (2 * pi); });
    const auto v = radial_potential(rho, 2);
    double worst = 0;
    for (std::size_t i = 0; i < g->size(); ++i)
        if (g->r[i] < 20) worst = std::max(worst, std::abs(v.values[i] - gaussian_potential_2d(g->r[i])));
    CHECK(worst < 5e-6); // largest at the first node
    CHECK(std::abs(radial_potential_at(rho, 2, 10.0) - gaussian_potential_2d(10.0)) < 1e-10);
}

TEST_CASE("radial potential converges at second order in the plane") {
    double prev = 0;
    for (int n : {250, 500, 1000}) {
        const auto g = radial(30, n, 2);
        const auto rho = sample(g, [](double r) { return std::exp(-r * r / 2) / (2 * pi); });
        const auto v = radial_potential(rho, 2);
        double err = 0;
        for (std::size_t i = 0; i < g->size(); ++i)
            if (g->r[i] < 10) err = std::max(err, std::abs(v.values[i] - gaussian_potential_2d(g->r[i])));
        if (prev > 0) CHECK(prev / err > 3.5);
        prev = err;
    }
}

TEST_CASE("grid potential of zero is zero") {
    const auto g = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {4, 3, 0}, 0.25));
    const auto v = grid_potential(GridField(g, std::vector<double>(g->size(), 0.0)));
    for (double x : v.values) CHECK(x == 0.0);
}

TEST_CASE("grid potential is equivariant under cell shifts") {
    const auto g = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {8, 5, 0}, 0.25));
    const auto rho = planar_gaussian(g, -2.0);
    const auto shifted = GridField(g, shift_axis0(*g, rho.values, 8));
    const auto v = grid_potential(rho);
    const auto vs = grid_potential(shifted);
    const auto expect = shift_axis0(*g, v.values, 8);
    double scale = 0, worst = 0;
    for (int i1 = 0; i1 < g->n[1]; ++i1)
        for (int i0 = 8; i0 < g->n[0]; ++i0) {
            const std::size_t k = g->index(i0, i1);
            scale = std::max(scale, std::abs(vs.values[k]));
            worst = std::max(worst, std::abs(vs.values[k] - expect[k]));
        }
    CHECK(worst <= 1e-13 * scale);
}

TEST_CASE("planar grid potential matches the radial potential at second order") {
    double prev = 0;
    for (double h : {0.4, 0.2, 0.1}) {
        const auto g = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {8, 8, 0}, h));
        const auto v = grid_potential(planar_gaussian(g));
        double err = 0;
        for (int i1 = 0; i1 < g->n[1]; ++i1)
            for (int i0 = 0; i0 < g->n[0]; ++i0) {
                const double r = std::hypot(g->coord(0, i0), g->coord(1, i1));
                err = std::max(err, std::abs(v.values[g->index(i0, i1)] - gaussian_potential_2d(r)));
            }
        if (prev > 0) CHECK(prev / err > 3.0);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("spatial grid potential against the radial potential" * doctest::may_fail()) {
    const double h = 0.2;
    const auto g = std::make_shared<const CartesianGrid>(make_cartesian_grid(3, {5, 5, 5}, h));
    const auto rho = sample(g, [](const auto& x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2) / std::pow(2 * pi, 1.5);
    });
    const auto v = grid_potential(rho);
    // erf(r / sqrt 2) / r for the normalized Gaussian
    double worst = 0;
    for (std::size_t k = 0; k < g->size(); ++k) {
        const int i0 = int(k % g->n[0]), i1 = int(k / g->n[0] % g->n[1]), i2 = int(k / (g->n[0] * g->n[1]));
        const double r = std::hypot(g->coord(0, i0), g->coord(1, i1), g->coord(2, i2));
        const double exact = r > 0 ? std::erf(r / std::sqrt(2.0)) / r : std::sqrt(2 / pi);
        worst = std::max(worst, std::abs(v.values[k] / exact - 1));
    }
    MESSAGE("max relative deviation " << worst);
    CHECK(worst <= 1e-3);
}

TEST_CASE("coulomb energy is a positive symmetric bilinear form") {
    const auto g = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {3, 3, 0}, 0.5));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> n;
    auto random_density = [&](bool signed_values) {
        std::vector<double> v(g->size());
        for (double& x : v) x = signed_values ? n(rng) : u(rng);
        return GridField(g, std::move(v));
    };
    for (int t = 0; t < 1000; ++t) {
        const auto rho = random_density(false), sigma = random_density(false);
        const double rr = coulomb_energy(rho, rho).value;
        const double rs = coulomb_energy(rho, sigma).value, sr = coulomb_energy(sigma, rho).value;
        CHECK(rr >= 0);
        CHECK(std::abs(rs - sr) <= 1e-13 * std::abs(rs));
        CHECK(cauchy_schwarz_check(rho, sigma));
    }
    const auto r1 = random_density(true), r2 = random_density(true), s = random_density(true);
    const double a = 0.7, b = -1.3;
    GridField mix = r1;
    for (std::size_t i = 0; i < mix.values.size(); ++i) mix.values[i] = a * r1.values[i] + b * r2.values[i];
    const double lhs = coulomb_energy(mix, s).value;
    const double rhs = a * coulomb_energy(r1, s).value + b * coulomb_energy(r2, s).value;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs)));
}

TEST_CASE("signed densities keep a positive self energy") {
    const auto g = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {3, 3, 0}, 0.5));
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n;
    for (int t = 0; t < 200; ++t) {
        std::vector<double> v(g->size());
        for (double& x : v) x = n(rng);
        CHECK(coulomb_energy(GridField(g, v), GridField(g, v)).value > 0);
    }
}

TEST_CASE("cauchy-schwarz equality and separation") {
    const auto g = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {10, 4, 0}, 0.25));
    const auto rho = planar_gaussian(g, -5), sigma = planar_gaussian(g, 5);
    const double rr = coulomb_energy(rho, rho).value, ss = coulomb_energy(sigma, sigma).value;
    const double rs = coulomb_energy(rho, sigma).value;
    CHECK(cauchy_schwarz_check(rho, rho));
    CHECK(rr == doctest::Approx(std::sqrt(rr) * std::sqrt(rr)).epsilon(1e-14));
    CHECK(cauchy_schwarz_check(rho, sigma));
    CHECK(rs / std::sqrt(rr * ss) < 0.9);
}

TEST_CASE("radial coulomb energy") {
    const auto g = radial(30, 800, 3);
    const auto rho = sample(g, [](double r) { return std::exp(-r); });
    const auto sigma = sample(g, [](double r) { return std::exp(-2 * r * r); });
    CHECK(coulomb_energy(rho, rho).value > 0);
    CHECK(coulomb_energy(rho, sigma).value == doctest::Approx(coulomb_energy(sigma, rho).value).epsilon(1e-12));
    CHECK(cauchy_schwarz_check(rho, sigma));
    // (1/2) (8 pi)^2 5/16
    CHECK(coulomb_energy(rho, rho).value == doctest::Approx(10 * pi * pi).epsilon(1e-5));
    const auto other = sample(radial(20, 800, 3), [](double r) { return std::exp(-r); });
    CHECK_THROWS_AS(coulomb_energy(rho, other), ConfigError);
}

TEST_CASE("two narrow charges at distance four") {
    const auto g = std::make_shared<const CartesianGrid>(make_axisymmetric_grid(5, 3, 0.1));
    const double s = 0.3;
    auto bump = [&](double c) {
        auto f = sample(g, [&](const auto& x) {
            const double dx = x[0] - c;
            return std::exp(-(dx * dx + x[1] * x[1]) / (2 * s * s));
        });
        const double m = f.integrate();
        for (double& v : f.values) v /= m;
        return f;
    };
    CHECK(std::abs(coulomb_energy(bump(-2), bump(2)).value - 0.125) < 1e-3);
}

TEST_CASE("grid mismatch is a configuration error") {
    const auto a = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {3, 3, 0}, 0.5));
    const auto b = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {4, 3, 0}, 0.5));
    CHECK_THROWS_AS(coulomb_energy(GridField(a, std::vector<double>(a->size(), 1.0)),
                                   GridField(b, std::vector<double>(b->size(), 1.0))),
                    ConfigError);
}
