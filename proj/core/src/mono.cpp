#include "hartree/mono.hpp"

#include "hartree/coulomb.hpp"
#include "hartree/error.hpp"
#include "hartree/fit.hpp"

#include <algorithm>
#include <cmath>

namespace hartree {

void SCFSettings::validate() const {
    if (!(mixing > 0 && mixing <= 1)) throw ConfigError("mixing must lie in (0,1]");
    if (!(tol_residual > 0 && tol_energy > 0 && eigensolver_tol > 0))
        throw ConfigError("tolerances must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be positive");
}

//-------------------------------------------------------------------------

RadialOperator::RadialOperator(std::shared_ptr<const RadialGrid> grid)
    : grid_(std::move(grid)), c_(radial_face_coefficients(*grid_)) {}

double RadialOperator::stiffness_form(const std::vector<double>& x) const {
    double s = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const double dx = x[i + 1] - x[i];
        s += c_[i] * dx * dx;
    }
    return s;
}

std::vector<double> RadialOperator::residual(const std::vector<double>& x, const std::vector<double>& V,
                                             double lambda) const {
    const std::size_t n = grid_->size();
    const auto& w = grid_->w;
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double k = c_[i] * (x[i] - (i + 1 < n - 1 ? x[i + 1] : 0.0));
        if (i > 0) k += c_[i - 1] * (x[i] - x[i - 1]);
        y[i] = k / w[i] + (V[i] - lambda) * x[i];
    }
    return y;
}

std::vector<double> RadialOperator::solve_shifted(const std::vector<double>& V, double sigma,
                                                  const std::vector<double>& f) const {
    const std::size_t n = grid_->size(), m = n - 1;
    const auto& w = grid_->w;
    std::vector<double> cp(m), x(n, 0.0);
    double prev_c = 0, prev_d = 1;
    for (std::size_t i = 0; i < m; ++i) {
        const double diag = (i > 0 ? c_[i - 1] : 0.0) + c_[i] + w[i] * (V[i] - sigma);
        const double lower = i > 0 ? -c_[i - 1] : 0.0;
        const double d = diag - lower * prev_c;
        if (d == 0 || !std::isfinite(d)) throw DomainError("shifted radial operator is singular");
        cp[i] = (i + 1 < m ? -c_[i] : 0.0) / d;
        x[i] = (w[i] * f[i] - lower * (i > 0 ? x[i - 1] : 0.0)) / d;
        prev_c = cp[i];
        prev_d = d;
    }
    (void)prev_d;
    for (std::size_t i = m - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
    return x;
}

int RadialOperator::count_below(const std::vector<double>& V, double sigma) const {
    const std::size_t m = grid_->size() - 1;
    const auto& w = grid_->w;
    int count = 0;
    double d = 1;
    for (std::size_t i = 0; i < m; ++i) {
        const double diag = (i > 0 ? c_[i - 1] : 0.0) + c_[i] + w[i] * (V[i] - sigma);
        d = i > 0 ? diag - c_[i - 1] * c_[i - 1] / d : diag;
        if (d == 0) d = -1e-300;
        if (d < 0) ++count;
    }
    return count;
}

double RadialOperator::norm(const std::vector<double>& x) const {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += grid_->w[i] * x[i] * x[i];
    return std::sqrt(s);
}

namespace {

double rayleigh(const RadialOperator& op, const std::vector<double>& x, const std::vector<double>& V) {
    const auto& w = op.grid().w;
    double num = op.stiffness_form(x), den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += w[i] * V[i] * x[i] * x[i];
        den += w[i] * x[i] * x[i];
    }
    return num / den;
}

} // namespace

RadialEigenpair lowest_radial_eigenpair(const RadialOperator& op, const std::vector<double>& V, double tol) {
    const std::size_t n = op.grid().size();
    if (V.size() != n) throw ConfigError("potential length does not match the radial grid");
    double lo = *std::min_element(V.begin(), V.end() - 1) - 1.0, hi = 0.0;
    if (op.count_below(V, hi) < 1)
        throw ModelError("no bound state resolved on the radial grid; enlarge r_max");
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1e-3, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (op.count_below(V, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    // lo sits below the lowest eigenvalue, so the shifted pencil stays positive.
    std::vector<double> x(n, 1.0);
    x[n - 1] = 0;
    for (int it = 0; it < 4; ++it) {
        x = op.solve_shifted(V, lo, x);
        const double s = op.norm(x);
        for (double& v : x) v /= s;
    }
    double sum = 0;
    for (double v : x) sum += v;
    if (sum < 0)
        for (double& v : x) v = -v;
    RadialEigenpair e;
    e.value = rayleigh(op, x, V);
    e.residual = op.norm(op.residual(x, V, e.value));
    e.vector = std::move(x);
    return e;
}

//-------------------------------------------------------------------------

namespace {

std::vector<double> nuclear_potential(const RadialGrid& g) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -1.0 / g.r[i];
    return v;
}

std::vector<double> density(const std::vector<double>& u) {
    std::vector<double> rho(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) rho[i] = u[i] * u[i];
    return rho;
}

double pairing(const RadialGrid& g, const std::vector<double>& rho, const std::vector<double>& W) {
    double s = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) s += g.w[i] * rho[i] * W[i];
    return 0.5 * s;
}

} // namespace

MonoatomicSolution solve_monoatomic(const ModelParams& params, std::shared_ptr<const RadialGrid> grid,
                                    const SCFSettings& settings) {
    params.validate();
    settings.validate();
    if (!grid || grid->d != params.d) throw ConfigError("radial grid dimension does not match the model");
    const RadialGrid& g = *grid;
    if (g.r[0] > 1e-3 * g.r_max) throw ConfigError("radial grid does not resolve the nuclear cusp");
    const std::size_t n = g.size();
    const RadialOperator op(grid);
    const auto Vnuc = nuclear_potential(g);
    const bool coupled = params.hartree_coupling > 0;
    std::unique_ptr<RadialCoulomb> coulomb;
    if (coupled) coulomb = std::make_unique<RadialCoulomb>(grid);
    auto hartree_of = [&](const std::vector<double>& u) {
        if (!coupled) return std::vector<double>(n, 0.0);
        auto W = coulomb->apply(density(u));
        for (double& v : W) v *= params.hartree_coupling;
        return W;
    };

    const double beta = params.d == 3 ? 0.5 : 1.0;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(-beta * g.r[i]);
    u[n - 1] = 0;
    {
        const double s = op.norm(u);
        for (double& v : u) v /= s;
    }

    MonoatomicSolution sol;
    sol.params = params;
    // The bare nucleus potential is the first mixed potential.
    std::vector<double> Wmix(n, 0.0), Wbase(n, 0.0), W = hartree_of(u), V(n);
    double alpha = settings.mixing, mu = 0, energy = 0;
    bool converged = false;
    for (int k = 1; k <= settings.max_iter; ++k) {
        for (std::size_t i = 0; i < n; ++i) V[i] = Vnuc[i] + Wmix[i];
        RadialEigenpair e;
        try {
            e = lowest_radial_eigenpair(op, V, settings.eigensolver_tol);
        } catch (const ModelError&) {
            // Overscreened mixed potential: retreat towards the last bound one.
            if (k == 1 || alpha < 1.0 / 1024) throw;
            alpha *= 0.5;
            for (std::size_t i = 0; i < n; ++i) Wmix[i] = (1 - alpha) * Wbase[i] + alpha * W[i];
            --k;
            continue;
        }
        u = std::move(e.vector);
        W = hartree_of(u);
        for (std::size_t i = 0; i < n; ++i) V[i] = Vnuc[i] + W[i];
        mu = rayleigh(op, u, V);
        const double res = op.norm(op.residual(u, V, mu));
        const double D = pairing(g, density(u), W);
        energy = mu - D;
        sol.residual_history.push_back(res);
        sol.energy_history.push_back(energy);
        sol.iterations = k;
        if (res <= settings.tol_residual) {
            converged = true;
            break;
        }
        const auto& eh = sol.energy_history;
        if (k >= 3) {
            const double d1 = eh[k - 1] - eh[k - 2], d0 = eh[k - 2] - eh[k - 3];
            if (d1 * d0 < 0 && std::abs(d1) > settings.tol_energy && alpha > 1.0 / 64) alpha *= 0.5;
            if (settings.mixing <= 0.3 && k > 3 && d1 > settings.tol_energy &&
                std::find(sol.warnings.begin(), sol.warnings.end(), "energy-increase") == sol.warnings.end())
                sol.warnings.push_back("energy-increase");
        }
        Wbase = Wmix;
        for (std::size_t i = 0; i < n; ++i) Wmix[i] = (1 - alpha) * Wmix[i] + alpha * W[i];
    }
    if (!converged)
        throw NonconvergenceError("monoatomic SCF did not reach the residual tolerance", sol.residual_history);
    if (!(mu < 0)) throw ModelError("monoatomic multiplier is not negative");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(u[i] > 0)) throw ModelError("monoatomic ground state changes sign");

    sol.mu = mu;
    sol.energy_I = energy;
    sol.coulomb_D = pairing(g, density(u), W);
    sol.kinetic = op.stiffness_form(u);
    sol.residual = sol.residual_history.back();
    sol.u = RadialFunction(grid, u);
    sol.hartree = RadialFunction(grid, W);
    sol.vmf = RadialFunction(grid, V);
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r2 = g.r[i] * g.r[i];
        m1 += g.w[i] * u[i] * u[i] * r2;
        m2 += g.w[i] * u[i] * u[i] * r2 * r2;
    }
    sol.m1 = m1;
    sol.m2 = m2;
    return sol;
}

double energy_functional(const RadialFunction& v, const ModelParams& params) {
    const RadialCoulomb c(v.grid);
    return energy_functional(v, params, c);
}

double energy_functional(const RadialFunction& v, const ModelParams& params, const RadialCoulomb& coulomb) {
    params.validate();
    const RadialGrid& g = *v.grid;
    if (g.d != params.d) throw ConfigError("radial grid dimension does not match the model");
    if (coulomb.grid().size() != g.size() || coulomb.grid().r_max != g.r_max)
        throw ConfigError("Coulomb operator built on another grid");
    const RadialOperator op(v.grid);
    double e = op.stiffness_form(v.values);
    for (std::size_t i = 0; i < g.size(); ++i) e -= g.w[i] * v.values[i] * v.values[i] / g.r[i];
    if (params.hartree_coupling > 0) {
        const auto rho = density(v.values);
        e += params.hartree_coupling * pairing(g, rho, coulomb.apply(rho));
    }
    return e;
}

//-------------------------------------------------------------------------

TailReport mean_field_tail(const RadialFunction& vmf, double m1, double m2, double mu,
                           const std::vector<double>& radii) {
    const RadialGrid& g = *vmf.grid;
    TailReport t;
    t.d = g.d;
    t.radii = radii;
    t.max_value = -1e300;
    t.min_value = 1e300;
    const double kappa = std::sqrt(std::abs(mu));
    for (double r : radii) {
        if (!(r > 0) || r > g.r_max) throw DomainError("tail radius outside the radial grid");
        const double v = radial_interpolate(vmf, r);
        t.values.push_back(v);
        if (g.d == 2) {
            const double p = m1 / (4 * std::pow(r, 3)) + 9 * m2 / (64 * std::pow(r, 5));
            t.predicted.push_back(p);
            t.scaled.push_back(std::abs(v - p) * std::pow(r, 7));
            t.max_scaled = std::max(t.max_scaled, t.scaled.back());
        } else {
            t.predicted.push_back(0.0);
            t.scaled.push_back(std::abs(v));
            t.envelope_constant = std::max(t.envelope_constant, -v * std::exp(0.9 * kappa * r));
        }
        t.max_value = std::max(t.max_value, v);
        t.min_value = std::min(t.min_value, v);
    }
    return t;
}

TailReport mean_field_tail(const MonoatomicSolution& sol, const std::vector<double>& radii) {
    return mean_field_tail(sol.vmf, sol.m1, sol.m2, sol.mu, radii);
}

DecayFit fit_decay(const RadialFunction& u, double r_lo, double r_hi) {
    const RadialGrid& g = *u.grid;
    if (!(r_lo > 0 && r_hi > r_lo && r_hi < g.r_max)) throw DomainError("decay window outside the grid");
    std::vector<double> one, mr, mlog, y;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.r[i];
        if (r < r_lo || r > r_hi) continue;
        if (!(u.values[i] > 1e-13)) throw DomainError("decay window reaches the underflow region");
        one.push_back(1.0);
        mr.push_back(-r);
        mlog.push_back(-std::log(r));
        y.push_back(std::log(u.values[i]));
    }
    if (y.size() < 3) throw DomainError("decay window holds fewer than three nodes");
    const auto f = least_squares({one, mr, mlog}, y);
    return {f.coef[1], f.coef[2], f.coef[0], f.residual, y.size()};
}

DecayFit fit_decay(const MonoatomicSolution& sol, double r_lo, double r_hi) {
    return fit_decay(sol.u, r_lo, r_hi);
}

std::pair<double, double> default_decay_window(const RadialFunction& u) {
    const RadialGrid& g = *u.grid;
    const double peak = *std::max_element(u.values.begin(), u.values.end());
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double v = u.values[i] / peak;
        if (lo == 0 && v < 1e-3) lo = g.r[i];
        if (v > 1e-11 && g.r[i] < 0.9 * g.r_max) hi = g.r[i];
    }
    if (!(lo > 0 && hi > lo)) throw DomainError("no decay window on this grid");
    return {lo, hi};
}

} // namespace hartree
