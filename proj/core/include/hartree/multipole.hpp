#pragma once
// Radial multipole expansions of rho * |.|^{-a} in the plane.

#include "hartree/grids.hpp"

#include <vector>

namespace hartree {

struct MultipoleCoefficients {
    int d = 2;
    double a = 1.0;
    int order = 0;               // number of terms N, n = 0..N-1
    std::vector<double> coeffs;  // c_n
    std::vector<double> moments; // m_{2n}
};

// m_k = int rho |x|^k dx for even k.
std::vector<double> moments(const RadialFunction& rho, const std::vector<int>& orders);

// c_n = binom(2n, n)^2 / 4^{2n} m_{2n}; needs a density with negligible tail
// beyond r_max/2.
MultipoleCoefficients radial_coeffs(const RadialFunction& rho, int N);

// c_n = binom(-a/2, n)^2 m_{2n}.
MultipoleCoefficients general_coeffs(const RadialFunction& rho, double a, int N);

// sum_n c_n / r^{2n + a}
double eval_expansion(const MultipoleCoefficients& c, double r);

struct RemainderFit {
    double slope = 0;
    double intercept = 0;
    std::vector<double> radii;      // radii used in the fit
    std::vector<double> remainders; // |direct - expansion| at those radii
    std::vector<double> excluded;   // radii below the quadrature floor
};

// Fits log|direct - expansion| against log r for radii in [r_max/4, r_max/2].
RemainderFit remainder_order_check(const RadialFunction& rho, int N, const std::vector<double>& radii,
                                   double floor = 1e-11);

// int_{|y| <= (1 - delta) r} rho(y) |x - y|^{-a} dy at |x| = r (d = 2).
double cutoff_potential(const RadialFunction& rho, double a, double r, double delta);

double binomial(double x, int n);
double legendre_p(int n, double x);
// int_0^{2 pi} P_n(cos theta) d theta, closed form.
double legendre_angular_average(int n);
// Same integral by the periodic trapezoid rule.
double legendre_angular_average_trapezoid(int n, int points = 64);

} // namespace hartree
