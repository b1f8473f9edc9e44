#include "hartree/checks.hpp"

#include "hartree/coulomb.hpp"
#include "hartree/error.hpp"
#include "hartree/fit.hpp"

#include "json.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hartree {

namespace {

using json = nlohmann::ordered_json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string radius_text(double r) {
    std::ostringstream s;
    s << r;
    return s.str();
}

void require(bool ok, double r) {
    if (!ok) throw NonconvergenceError("convolution quadrature did not converge at r = " + radius_text(r), {});
}

// Accepted ratio of the summed outer error estimate to tol |result|.
constexpr double kQuadSlack = 1e3;

// int_0^pi g(|r e_1 - s e(theta)|) dtheta with q = a cosh t, a = |r - s|,
// b = r + s: the integral becomes int_0^T 2 g(q) q / sqrt(b^2 - q^2) dt with
// T = acosh(b/a), regular at t = 0 and 1/sqrt at t = T.
double angular_2d(const RadialProfile& g, double a, double b, double tol, double r) {
    a = std::max(a, 1e-300 * b);
    const double T = std::acosh(b / a);
    if (!(T > 1e-6)) return std::numbers::pi * g(0.5 * (a + b));
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double t, double tc) {
        // tc is the signed distance to the nearest endpoint.
        const double dT = (tc > 0) ? tc : T - t;
        const double q = a * std::cosh(t);
        const double bq = 2 * a * std::sinh(0.5 * (T + t)) * std::sinh(0.5 * dT); // b - q
        if (!(bq > 0)) return 0.0;
        return 2 * g(q) * q / std::sqrt(bq * (b + q));
    };
    double err = 0;
    const double v = ts.integrate(f, 0.0, T, tol, &err);
    require(std::isfinite(v), r);
    return v;
}

double shell_3d(const RadialProfile& g, double a, double b, double tol, double r) {
    double err = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double q) { return g(q) * q; }, a, b, 12, tol, &err);
    require(std::isfinite(v), r);
    return v;
}

double variation(const std::vector<double>& v) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (double x : v) {
        lo = std::min(lo, std::abs(x));
        hi = std::max(hi, std::abs(x));
    }
    return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

double growth(const std::vector<double>& r, const std::vector<double>& ratio) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < r.size(); ++i) {
        x.push_back(std::log(r[i]));
        y.push_back(std::log(std::abs(ratio[i])));
    }
    return fit_line(x, y).slope;
}

} // namespace

std::string to_json(const CheckRecord& rec, int indent) {
    json j;
    j["name"] = rec.name;
    j["pass"] = rec.pass;
    j["message"] = rec.message;
    json m = json::object();
    for (const auto& [k, v] : rec.metrics) m[k] = num(v);
    j["metrics"] = m;
    json s = json::object();
    for (const auto& [k, v] : rec.series) {
        json a = json::array();
        for (double x : v) a.push_back(num(x));
        s[k] = a;
    }
    j["series"] = s;
    return j.dump(indent);
}

double radial_convolution(const RadialProfile& f, const RadialProfile& g, int d, double r, double s_max,
                          double tol) {
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    if (!(r > 0) || !(s_max > r)) throw DomainError("convolution radius outside (0, s_max)");
    boost::math::quadrature::tanh_sinh<double> ts;
    double total = 0, total_err = 0;
    // The outer variable enters through a = |r - s|, taken from the endpoint
    // distance on the panels that touch s = r.
    auto piece = [&](double lo, double hi, bool touches_left, bool touches_right) {
        auto integrand = [&](double s, double sc) {
            double a = std::abs(r - s);
            if (touches_right && sc > 0) a = sc;
            if (touches_left && sc < 0) a = -sc;
            const double b = r + s;
            const double fs = f(s);
            if (fs == 0) return 0.0;
            if (d == 2) return 2 * fs * s * angular_2d(g, a, b, tol, r);
            return 2 * std::numbers::pi / r * fs * s * shell_3d(g, a, b, tol, r);
        };
        double err = 0;
        const double v = ts.integrate(integrand, lo, hi, tol, &err);
        require(std::isfinite(v), r);
        total_err += err;
        return v;
    };
    const int inner_pieces = std::max(1, static_cast<int>(std::ceil(r / 5.0)));
    for (int i = 0; i < inner_pieces; ++i) {
        const double lo = r * i / inner_pieces, hi = r * (i + 1) / inner_pieces;
        total += piece(lo, hi, false, i + 1 == inner_pieces);
    }
    constexpr int outer_pieces = 8;
    for (int i = 0; i < outer_pieces; ++i) {
        const double lo = r + (s_max - r) * i / outer_pieces, hi = r + (s_max - r) * (i + 1) / outer_pieces;
        total += piece(lo, hi, i == 0, false);
    }
    require(total_err <= kQuadSlack * tol * std::abs(total), r);
    return total;
}

ConvolutionDecayReport convolution_decay_check(double nu, double k, int d, std::vector<double> radii) {
    if (!(nu > 0) || !(k >= 0)) throw ConfigError("convolution check needs nu > 0 and k >= 0");
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    if (radii.empty())
        for (int i = 0; i < 12; ++i) radii.push_back(5.0 / nu * std::pow(8.0, i / 11.0));
    for (double r : radii)
        if (!(r > 0)) throw DomainError("convolution radii must be positive");

    ConvolutionDecayReport rep;
    rep.nu = nu;
    rep.k = k;
    rep.d = d;
    rep.radii = radii;
    const RadialProfile v = [=](double r) { return std::exp(-nu * r) / (1 + std::pow(r, k)); };
    const RadialProfile vc = [=](double r) { return std::exp(-nu * r) / (1 + std::pow(r, k)) / r; };
    for (double r : radii) {
        const double s_max = r + 20.0 / nu;
        const double a = radial_convolution(v, v, d, r, s_max);
        const double b = radial_convolution(v, vc, d, r, s_max);
        rep.self.push_back(a);
        rep.coulomb.push_back(b);
        rep.ratio_self.push_back(a * std::exp(nu * r) * (1 + std::pow(r, k + 1 - d)));
        rep.ratio_coulomb.push_back(b * std::exp(nu * r) * (1 + std::pow(r, k + 1.5 - d)));
    }
    rep.variation_self = variation(rep.ratio_self);
    rep.variation_coulomb = variation(rep.ratio_coulomb);
    if (radii.size() >= 2) {
        rep.growth_self = growth(radii, rep.ratio_self);
        rep.growth_coulomb = growth(radii, rep.ratio_coulomb);
    }

    auto& rec = rep.record;
    rec.name = "convolution_decay";
    rec.pass = rep.variation_self < 3 && rep.variation_coulomb < 3;
    rec.message = rec.pass ? "both ratios vary by less than 3x" : "a ratio varies by 3x or more";
    rec.metrics = {{"nu", nu},
                   {"k", k},
                   {"d", static_cast<double>(d)},
                   {"variation_self", rep.variation_self},
                   {"variation_coulomb", rep.variation_coulomb},
                   {"growth_self", rep.growth_self},
                   {"growth_coulomb", rep.growth_coulomb}};
    rec.series = {{"radii", radii},
                  {"self", rep.self},
                  {"coulomb", rep.coulomb},
                  {"ratio_self", rep.ratio_self},
                  {"ratio_coulomb", rep.ratio_coulomb}};
    return rep;
}

CheckRecord gaussian_convolution_oracle(int d, double a, double b, double tol) {
    if (!(a > 0 && b > 0)) throw ConfigError("Gaussian exponents must be positive");
    const RadialProfile f = [=](double r) { return std::exp(-a * r * r); };
    const RadialProfile g = [=](double r) { return std::exp(-b * r * r); };
    const double c = a * b / (a + b);
    const double pre = std::pow(std::numbers::pi / (a + b), 0.5 * d);
    const double s_max = 40.0 / std::sqrt(std::min(a, b));
    CheckRecord rec;
    rec.name = "gaussian_convolution_oracle";
    std::vector<double> radii{0.25, 0.5, 1.0, 2.0, 3.0}, errs;
    double worst = 0;
    for (double r : radii) {
        const double exact = pre * std::exp(-c * r * r);
        const double v = radial_convolution(f, g, d, r, r + s_max);
        errs.push_back(std::abs(v - exact) / exact);
        worst = std::max(worst, errs.back());
    }
    rec.pass = worst <= tol;
    rec.message = rec.pass ? "closed form reproduced" : "closed form missed";
    rec.metrics = {{"d", static_cast<double>(d)}, {"a", a}, {"b", b}, {"max_relative_error", worst}, {"tolerance", tol}};
    rec.series = {{"radii", radii}, {"relative_error", errs}};
    return rec;
}

//-------------------------------------------------------------------------

namespace {

struct StabilityContext {
    const MonoatomicSolution& mono;
    RadialOperator op;
    RadialCoulomb coulomb;
    double energy_u;

    explicit StabilityContext(const MonoatomicSolution& m)
        : mono(m), op(m.u.grid), coulomb(m.u.grid), energy_u(energy_functional(m.u, m.params, coulomb)) {}

    double h1_norm2(const std::vector<double>& x) const {
        const double n = op.norm(x);
        return op.stiffness_form(x) + n * n;
    }

    StabilityPoint evaluate(const std::vector<double>& delta) const {
        const auto& u = mono.u.values;
        if (delta.size() != u.size()) throw ConfigError("perturbation size does not match the grid");
        std::vector<double> v(u.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] + delta[i];
        v.back() = 0;
        const double s = op.norm(v);
        if (!(s > 0)) throw DomainError("perturbation cancels the state");
        for (double& x : v) x /= s;
        std::vector<double> dp(v.size()), dm(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            dp[i] = v[i] - u[i];
            dm[i] = v[i] + u[i];
        }
        StabilityPoint p;
        p.distance2 = std::min(h1_norm2(dp), h1_norm2(dm));
        p.energy_gap = energy_functional(RadialFunction(mono.u.grid, v), mono.params, coulomb) - energy_u;
        return p;
    }
};

} // namespace

StabilityPoint stability_point(const MonoatomicSolution& mono, const std::vector<double>& delta) {
    const StabilityContext ctx(mono);
    return ctx.evaluate(delta);
}

StabilityReport stability_check(const MonoatomicSolution& mono, int trials, double amplitude, std::uint64_t seed) {
    if (trials < 1) throw ConfigError("stability check needs at least one trial");
    if (!(amplitude > 0 && amplitude <= 0.3)) throw ConfigError("stability amplitude must lie in (0, 0.3]");
    if (!mono.u.grid) throw ConfigError("stability check needs a solved atom");
    const StabilityContext ctx(mono);
    const RadialGrid& g = *mono.u.grid;
    const double ell = 1.0 / std::sqrt(std::abs(mono.mu));

    StabilityReport rep;
    rep.trials = trials;
    rep.amplitude = amplitude;
    rep.seed = seed;
    rep.energy_u = ctx.energy_u;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> weight(0.0, 1.0);
    std::uniform_real_distribution<double> centre(0.0, 3.0 * ell), width(0.2 * ell, 1.5 * ell), unit(0.0, 1.0);
    constexpr int bumps = 6;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    double sxy = 0, sxx = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> delta(g.size(), 0.0);
        for (int b = 0; b < bumps; ++b) {
            const double a = weight(rng), c = centre(rng), w = width(rng);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double z = (g.r[i] - c) / w;
                delta[i] += a * std::exp(-0.5 * z * z);
            }
        }
        delta.back() = 0;
        const double size = amplitude * (1.0 - unit(rng)); // (0, amplitude]
        const double scale = size / std::sqrt(ctx.h1_norm2(delta));
        for (double& x : delta) x *= scale;
        const StabilityPoint p = ctx.evaluate(delta);
        rep.distance2.push_back(p.distance2);
        rep.energy_gap.push_back(p.energy_gap);
        if (p.energy_gap < -1e-10) ++rep.violations;
        if (p.distance2 > 0) rep.min_ratio = std::min(rep.min_ratio, p.energy_gap / p.distance2);
        sxy += p.energy_gap * p.distance2;
        sxx += p.distance2 * p.distance2;
    }
    rep.fitted_C = sxx > 0 ? sxy / sxx : 0.0;

    auto& rec = rep.record;
    rec.name = "stability";
    rec.pass = rep.violations == 0 && rep.fitted_C > 0;
    rec.message = "radial real perturbations; the phase minimum is a sign choice";
    rec.metrics = {{"trials", static_cast<double>(trials)},
                   {"amplitude", amplitude},
                   {"seed", static_cast<double>(seed)},
                   {"violations", static_cast<double>(rep.violations)},
                   {"fitted_C", rep.fitted_C},
                   {"min_ratio", rep.min_ratio},
                   {"energy_u", rep.energy_u}};
    rec.series = {{"distance2", rep.distance2}, {"energy_gap", rep.energy_gap}};
    return rep;
}

//-------------------------------------------------------------------------

YukawaReport yukawa_gradient_check(const MonoatomicSolution& mono, double tol_residual) {
    if (!mono.u.grid) throw ConfigError("Yukawa check needs a solved atom");
    if (!(mono.mu < 0)) throw ModelError("Yukawa check needs a negative multiplier");
    const RadialGrid& g = *mono.u.grid;
    const std::size_t n = g.size();
    const RadialOperator op(mono.u.grid);
    const auto& u = mono.u.values;

    YukawaReport rep;
    rep.tolerance = 10 * tol_residual;
    rep.target = std::sqrt(std::abs(mono.mu));
    std::vector<double> f(n), zero(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) f[i] = mono.vmf.values[i] * u[i];
    const auto z = op.solve_shifted(zero, mono.mu, f);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = u[i] + z[i];
    diff.back() = 0;
    rep.identity_residual = op.norm(diff);
    if (!std::isfinite(rep.identity_residual))
        throw NonconvergenceError("shifted solve produced a non-finite result", {});

    // |u'|/u on the faces inside the decay window.
    const auto [lo, hi] = default_decay_window(mono.u);
    rep.window_lo = lo;
    rep.window_hi = hi;
    std::vector<double> inv_r;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double rf = 0.5 * (g.r[i] + g.r[i + 1]);
        if (rf < lo || rf > hi) continue;
        const double du = std::abs(u[i + 1] - u[i]) / (g.r[i + 1] - g.r[i]);
        const double uf = std::sqrt(u[i] * u[i + 1]);
        if (!(uf > 0)) continue;
        rep.radii.push_back(rf);
        rep.ratio.push_back(du / uf);
        inv_r.push_back(1.0 / rf);
        rep.fitted_C = std::max(rep.fitted_C, du / uf);
    }
    double deviation = std::numeric_limits<double>::infinity();
    if (rep.radii.size() >= 4) {
        const auto line = fit_line(inv_r, rep.ratio);
        rep.asymptote = line.intercept;
        rep.asymptote_coefficient = line.slope;
        deviation = std::abs(rep.asymptote - rep.target) / rep.target;
    }

    auto& rec = rep.record;
    rec.name = "yukawa_gradient";
    const bool identity_ok = rep.identity_residual <= rep.tolerance;
    const bool envelope_ok = deviation <= 0.02;
    rec.pass = identity_ok && envelope_ok;
    rec.message = identity_ok ? (envelope_ok ? "resolvent identity and gradient envelope hold"
                                             : "gradient asymptote off sqrt|mu|")
                              : "resolvent identity above tolerance";
    rec.metrics = {{"identity_residual", rep.identity_residual},
                   {"tolerance", rep.tolerance},
                   {"fitted_C", rep.fitted_C},
                   {"asymptote", rep.asymptote},
                   {"asymptote_coefficient", rep.asymptote_coefficient},
                   {"target", rep.target},
                   {"relative_deviation", deviation},
                   {"window_lo", lo},
                   {"window_hi", hi}};
    rec.series = {{"radii", rep.radii}, {"ratio", rep.ratio}};
    return rep;
}

} // namespace hartree
