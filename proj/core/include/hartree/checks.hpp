#pragma once
// Standalone verifications: convolution decay of exponential profiles, the
// stability inequality of the atom and the resolvent form of its equation.

#include "hartree/mono.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace hartree {

// Machine-readable outcome shared by every check.
struct CheckRecord {
    std::string name;
    bool pass = false;
    std::string message;
    std::map<std::string, double> metrics;
    std::map<std::string, std::vector<double>> series;
};

std::string to_json(const CheckRecord& record, int indent = 2);

using RadialProfile = std::function<double(double)>;

// (f * g)(x) at |x| = r for radial f, g on R^d, the outer radius truncated at
// s_max. d = 2 integrates the angle through q = |x - y|, which turns the
// 1/sqrt endpoint factors into tanh-sinh endpoints; d = 3 uses the shell form
// (2 pi / r) int f(s) s int_{|r-s|}^{r+s} g(q) q dq ds.
double radial_convolution(const RadialProfile& f, const RadialProfile& g, int d, double r, double s_max,
                          double tol = 1e-12);

struct ConvolutionDecayReport {
    double nu = 0, k = 0;
    int d = 2;
    std::vector<double> radii;
    std::vector<double> self;       // v * v
    std::vector<double> coulomb;    // v * (v / |.|)
    std::vector<double> ratio_self;    // (v * v) e^{nu r} (1 + r^{k+1-d})
    std::vector<double> ratio_coulomb; // (v * (v/|.|)) e^{nu r} (1 + r^{k+3/2-d})
    double variation_self = 0;    // max / min over radii
    double variation_coulomb = 0;
    double growth_self = 0;       // log-log slope of the ratio
    double growth_coulomb = 0;
    CheckRecord record;
};

// v = e^{-nu r} / (1 + r^k). Empty radii pick 12 geometric points in
// [5/nu, 40/nu]. Contract: both variations below 3.
ConvolutionDecayReport convolution_decay_check(double nu, double k, int d, std::vector<double> radii = {});

// e^{-a r^2} * e^{-b r^2} against (pi/(a+b))^{d/2} e^{-ab/(a+b) r^2}.
CheckRecord gaussian_convolution_oracle(int d, double a = 1.0, double b = 0.5, double tol = 1e-10);

struct StabilityReport {
    int trials = 0;
    double amplitude = 0;
    std::uint64_t seed = 0;
    int violations = 0;
    double fitted_C = 0;   // least squares through the origin
    double min_ratio = 0;  // min (E(v) - E(u)) / dist^2
    double energy_u = 0;
    std::vector<double> distance2;  // min over the sign of ||v -+ u||_{H^1}^2
    std::vector<double> energy_gap; // E(v) - E(u)
    CheckRecord record;
};

// Real radial perturbations v = (u + delta)/||u + delta|| with delta a random
// sum of smooth bumps of H^1 size uniform in (0, amplitude].
StabilityReport stability_check(const MonoatomicSolution& mono, int trials = 200, double amplitude = 0.2,
                                std::uint64_t seed = 20240601);

// Same perturbation applied to u, used by the trivial cases.
struct StabilityPoint {
    double distance2 = 0;
    double energy_gap = 0;
};
StabilityPoint stability_point(const MonoatomicSolution& mono, const std::vector<double>& delta);

struct YukawaReport {
    double identity_residual = 0; // ||u + (-Delta - mu)^{-1}(V^MF u)||_2
    double tolerance = 0;
    double fitted_C = 0;          // max |u'| / u over the window
    double asymptote = 0;         // a in |u'|/u ~ a + b/r
    double asymptote_coefficient = 0;
    double target = 0;            // sqrt|mu|
    double window_lo = 0, window_hi = 0;
    std::vector<double> radii, ratio;
    CheckRecord record;
};

// tol_residual: SCF residual tolerance of the solution; the identity must
// hold to 10 tol_residual and the asymptote to 2% of sqrt|mu|.
YukawaReport yukawa_gradient_check(const MonoatomicSolution& mono, double tol_residual = 1e-9);

} // namespace hartree
