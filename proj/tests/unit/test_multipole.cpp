#include "doctest.h"

#include "hartree/coulomb.hpp"
#include "hartree/error.hpp"
#include "hartree/multipole.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hartree;
using std::numbers::pi;

namespace {

std::shared_ptr<const RadialGrid> plane(double r_max, int n) {
    return std::make_shared<const RadialGrid>(make_radial_grid(r_max, n, 2));
}

RadialFunction unit_gaussian(std::shared_ptr<const RadialGrid> g) {
    return sample(std::move(g), [](double r) { return std::exp(-r * r / 2) / (2 * pi); });
}

} // namespace

TEST_CASE("moments of simple densities") {
    const auto g = plane(40, 2000);
    const auto m = moments(unit_gaussian(g), {0, 2, 4});
    CHECK(std::abs(m[0] - 1) < 1e-8);
    CHECK(std::abs(m[1] - 2) < 1e-8);
    CHECK(std::abs(m[2] - 8) < 1e-8);

    const auto e = sample(plane(60, 4000), [](double r) { return std::exp(-r) / (2 * pi); });
    const auto me = moments(e, {0, 2});
    CHECK(std::abs(me[0] - 1) < 1e-8);
    CHECK(std::abs(me[1] - 6) < 1e-6);

    CHECK_THROWS_AS(moments(e, {1}), ConfigError);
    CHECK_THROWS_AS(moments(e, {-2}), ConfigError);
}

TEST_CASE("coefficient factors") {
    const auto rho = unit_gaussian(plane(40, 2000));
    const auto c = radial_coeffs(rho, 3);
    REQUIRE(c.coeffs.size() == 3);
    CHECK(c.coeffs[0] == doctest::Approx(c.moments[0]).epsilon(1e-15));
    CHECK(c.coeffs[1] / c.moments[1] == 0.25);
    CHECK(c.coeffs[2] / c.moments[2] == 9.0 / 64.0);
    CHECK(c.coeffs[0] == doctest::Approx(1).epsilon(1e-8));

    const auto a1 = general_coeffs(rho, 1.0, 3);
    for (int n = 0; n < 3; ++n) CHECK(a1.coeffs[n] == doctest::Approx(c.coeffs[n]).epsilon(1e-15));
    CHECK(binomial(-0.5, 1) * binomial(-0.5, 1) == 0.25);
    CHECK(binomial(-1.0, 1) * binomial(-1.0, 1) == 1.0);
    const auto a2 = general_coeffs(rho, 2.0, 2);
    CHECK(a2.coeffs[1] == doctest::Approx(a2.moments[1]).epsilon(1e-15));
    CHECK_THROWS_AS(general_coeffs(rho, 0.0, 2), ConfigError);
    CHECK_THROWS_AS(general_coeffs(rho, -1.0, 2), ConfigError);
}

TEST_CASE("heavy tails are rejected") {
    const auto rho = sample(plane(20, 800), [](double r) { return 1 / (1 + r * r * r * r); });
    CHECK_THROWS_AS(radial_coeffs(rho, 2), DomainError);
}

TEST_CASE("expansion evaluation") {
    MultipoleCoefficients mono;
    mono.order = 1;
    mono.coeffs = {1.0};
    mono.moments = {1.0};
    CHECK(eval_expansion(mono, 4.0) == 0.25);
    CHECK_THROWS_AS(eval_expansion(mono, 0.0), DomainError);
    CHECK_THROWS_AS(eval_expansion(mono, -1.0), DomainError);

    const auto rho = unit_gaussian(plane(40, 2000));
    const double e3 = eval_expansion(radial_coeffs(rho, 3), 10);
    const double e1 = eval_expansion(radial_coeffs(rho, 1), 10);
    // 2/(4 10^3) + 72/(64 10^5)
    CHECK(std::abs(e3 - e1 - 5.1125e-4) < 1e-8);
    CHECK(std::abs(e3 - 0.10051125) < 1e-8);
    // the closed-form potential sits 5e-7 above the three-term value
    const double closed = std::sqrt(pi / 2) * std::exp(-25.0) * std::cyl_bessel_i(0.0, 25.0);
    CHECK(std::abs(radial_potential_at(rho, 2, 10) - closed) < 1e-10);
    CHECK(closed - e3 == doctest::Approx(5.0e-7).epsilon(0.01));
}

TEST_CASE("remainder orders") {
    const auto rho = unit_gaussian(plane(40, 1000));
    std::vector<double> radii;
    for (int i = 0; i <= 10; ++i) radii.push_back(10 * std::pow(2.0, i / 10.0));
    for (int N : {0, 1, 2}) {
        const auto fit = remainder_order_check(rho, N, radii);
        MESSAGE("N = " << N << " slope " << fit.slope);
        CHECK(fit.slope <= -(2 * N + 1) + 0.3);
        CHECK(fit.slope >= -(2 * N + 1) - 0.6);
    }
    CHECK_THROWS_AS(remainder_order_check(rho, 1, {5, 8}), DomainError);
    CHECK_THROWS_AS(remainder_order_check(rho, 1, {15, 12}), DomainError);
}

TEST_CASE("remainder fits drop radii below the floor") {
    const auto rho = unit_gaussian(plane(40, 1000));
    std::vector<double> radii;
    for (int i = 0; i <= 10; ++i) radii.push_back(10 + i);
    const auto fit = remainder_order_check(rho, 3, radii, 1e-8);
    CHECK(!fit.excluded.empty());
    CHECK(fit.radii.size() + fit.excluded.size() == radii.size());
    for (double r : fit.excluded) CHECK(r > fit.radii.front());
}

TEST_CASE("general exponent against cutoff quadrature") {
    const auto rho = unit_gaussian(plane(40, 2000));
    const double r = 12, a = 3;
    const auto c = general_coeffs(rho, a, 2);
    const double direct = cutoff_potential(rho, a, r, 0.1);
    const double rel = std::abs(eval_expansion(c, r) / direct - 1);
    const double next = binomial(-a / 2, 2) * binomial(-a / 2, 2) * 8 / (c.coeffs[0] * std::pow(r, 4));
    MESSAGE("relative error " << rel << ", next term " << next);
    CHECK(rel <= 2 * next);
}

TEST_CASE("legendre angular averages") {
    CHECK(legendre_angular_average(0) == doctest::Approx(2 * pi));
    CHECK(legendre_angular_average(2) == doctest::Approx(pi / 2));
    CHECK(legendre_angular_average(3) == 0.0);
    for (int n = 0; n <= 12; ++n) {
        CHECK(legendre_angular_average_trapezoid(n) == doctest::Approx(legendre_angular_average(n)).scale(1).epsilon(1e-13));
        if (n % 2 == 0) {
            const double b = binomial(n, n / 2);
            CHECK(legendre_angular_average(n) == doctest::Approx(2 * pi * b * b / std::pow(4.0, n)).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(legendre_angular_average(-1), DomainError);
    CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125));
    CHECK(legendre_p(3, 0.5) == doctest::Approx(-0.4375));
}

TEST_CASE("coefficient identity over random radial densities") {
    const auto g = plane(40, 600);
    std::mt19937_64 rng(500);
    std::uniform_real_distribution<double> width(0.2, 2.0), weight(0.1, 1.0);
    for (int t = 0; t < 500; ++t) {
        const double a1 = width(rng), a2 = width(rng), w1 = weight(rng), w2 = weight(rng);
        const auto rho = sample(g, [&](double r) { return w1 * std::exp(-r * r / a1) + w2 * std::exp(-r * r / a2); });
        const auto c = radial_coeffs(rho, 4);
        for (int n = 0; n < 4; ++n)
            CHECK(c.coeffs[n] ==
                  doctest::Approx(legendre_angular_average(2 * n) / (2 * pi) * c.moments[n]).epsilon(1e-14));
    }
}

TEST_CASE("scaling covariance") {
    const int n = 800;
    const auto g = plane(40, n);
    const auto f = [](double r) { return std::exp(-r * r / 3) * (1 + r * r); };
    const auto c = radial_coeffs(sample(g, f), 4);
    for (double lambda : {0.5, 2.0, 3.0}) {
        const auto gl = plane(40 / lambda, n);
        const auto cl = radial_coeffs(sample(gl, [&](double r) { return lambda * lambda * f(lambda * r); }), 4);
        for (int k = 0; k < 4; ++k)
            CHECK(cl.coeffs[k] == doctest::Approx(c.coeffs[k] / std::pow(lambda, 2 * k)).epsilon(1e-13));
    }
}
