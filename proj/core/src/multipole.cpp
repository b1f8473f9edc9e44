#include "hartree/multipole.hpp"

#include "hartree/coulomb.hpp"
#include "hartree/error.hpp"
#include "hartree/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hartree {

using std::numbers::pi;

double binomial(double x, int n) {
    if (n < 0) return 0.0;
    double b = 1.0;
    for (int k = 0; k < n; ++k) b *= (x - k) / (k + 1);
    return b;
}

double legendre_p(int n, double x) {
    if (n == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= n; ++l) {
        const double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double legendre_angular_average(int n) {
    if (n < 0) throw DomainError("Legendre order must be nonnegative");
    if (n % 2 == 1) return 0.0;
    const int m = n / 2;
    const double b = binomial(2.0 * m, m);
    return 2 * pi * b * b / std::pow(4.0, 2 * m);
}

double legendre_angular_average_trapezoid(int n, int points) {
    double s = 0;
    for (int i = 0; i < points; ++i) s += legendre_p(n, std::cos(2 * pi * i / points));
    return s * 2 * pi / points;
}

std::vector<double> moments(const RadialFunction& rho, const std::vector<int>& orders) {
    std::vector<double> m;
    m.reserve(orders.size());
    for (int k : orders) {
        if (k < 0 || k % 2 != 0) throw ConfigError("moment orders must be even and nonnegative");
        double s = 0;
        const auto& g = *rho.grid;
        for (std::size_t i = 0; i < g.size(); ++i) s += g.w[i] * rho.values[i] * std::pow(g.r[i], k);
        m.push_back(s);
    }
    return m;
}

namespace {

void check_tail(const RadialFunction& rho) {
    const auto& g = *rho.grid;
    double total = 0, tail = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = g.w[i] * std::abs(rho.values[i]);
        total += a;
        if (g.r[i] > 0.5 * g.r_max) tail += a;
    }
    if (tail > 1e-12 * std::max(total, 1e-300))
        throw DomainError("density tail beyond r_max/2 too heavy for a multipole expansion");
}

MultipoleCoefficients make_coeffs(const RadialFunction& rho, double a, int N) {
    if (N < 0) throw ConfigError("expansion order must be nonnegative");
    check_tail(rho);
    MultipoleCoefficients c;
    c.d = rho.grid->d;
    c.a = a;
    c.order = N;
    std::vector<int> orders;
    for (int k = 0; k < N; ++k) orders.push_back(2 * k);
    c.moments = moments(rho, orders);
    for (int k = 0; k < N; ++k) {
        const double b = binomial(-a / 2, k);
        c.coeffs.push_back(b * b * c.moments[k]);
    }
    return c;
}

} // namespace

MultipoleCoefficients radial_coeffs(const RadialFunction& rho, int N) {
    if (rho.grid->d != 2) throw ConfigError("radial multipole coefficients are for d = 2");
    // binom(-1/2, n)^2 equals binom(2n, n)^2 / 4^{2n}
    return make_coeffs(rho, 1.0, N);
}

MultipoleCoefficients general_coeffs(const RadialFunction& rho, double a, int N) {
    if (!(a > 0)) throw ConfigError("kernel exponent must be positive");
    return make_coeffs(rho, a, N);
}

double eval_expansion(const MultipoleCoefficients& c, double r) {
    if (!(r > 0)) throw DomainError("expansion needs r > 0");
    double s = 0;
    for (std::size_t n = 0; n < c.coeffs.size(); ++n) s += c.coeffs[n] / std::pow(r, 2.0 * n + c.a);
    return s;
}

RemainderFit remainder_order_check(const RadialFunction& rho, int N, const std::vector<double>& radii,
                                   double floor) {
    const auto& g = *rho.grid;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 0.25 * g.r_max * (1 - 1e-12) || radii[i] > 0.5 * g.r_max * (1 + 1e-12))
            throw DomainError("remainder radii must lie in [r_max/4, r_max/2]");
        if (i > 0 && radii[i] <= radii[i - 1]) throw DomainError("remainder radii must increase");
    }
    const auto c = radial_coeffs(rho, N);
    RadialCoulomb op(rho.grid);
    const auto nodal = op.apply(rho.values);
    RemainderFit fit;
    std::vector<double> x, y;
    for (double r : radii) {
        double direct;
        const std::size_t j = std::lower_bound(g.r.begin(), g.r.end(), r * (1 - 1e-13)) - g.r.begin();
        if (j < g.size() && std::abs(g.r[j] - r) <= 1e-12 * r)
            direct = nodal[j];
        else
            direct = op.potential_at(rho.values, r);
        const double rem = std::abs(direct - eval_expansion(c, r));
        if (rem < floor) {
            fit.excluded.push_back(r);
            continue;
        }
        fit.radii.push_back(r);
        fit.remainders.push_back(rem);
        x.push_back(std::log(r));
        y.push_back(std::log(rem));
    }
    if (x.size() < 2) throw DomainError("remainder below the quadrature floor at almost every radius");
    const auto line = fit_line(x, y);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    return fit;
}

double cutoff_potential(const RadialFunction& rho, double a, double r, double delta) {
    const auto& g = *rho.grid;
    if (g.d != 2) throw ConfigError("cutoff potential is implemented for d = 2");
    const double smax = (1 - delta) * r;
    constexpr int points = 256;
    double total = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = g.r[i];
        if (s > smax) break;
        double ang = 0;
        for (int q = 0; q < points; ++q) {
            const double d2 = r * r + s * s - 2 * r * s * std::cos(2 * pi * q / points);
            ang += std::pow(d2, -0.5 * a);
        }
        ang /= points; // mean over the circle
        total += g.w[i] * rho.values[i] * ang;
    }
    return total;
}

} // namespace hartree
