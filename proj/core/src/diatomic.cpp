#include "hartree/diatomic.hpp"

#include "hartree/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hartree {

namespace {

std::vector<double> point_charge(const CartesianGrid& g, int offset_cells, double node_factor) {
    const double cell = -node_factor / g.h;
    const int c0 = g.center() + offset_cells;
    const int c1 = g.geometry == Geometry::axisymmetric ? 0 : (g.n[1] - 1) / 2;
    const int c2 = (g.n[2] - 1) / 2;
    const double cx = offset_cells * g.h;
    std::vector<double> v(g.size());
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
            const double y = g.axes() > 1 ? g.coord(1, i1) : 0.0;
            const double z = g.axes() > 2 ? g.coord(2, i2) : 0.0;
            for (int i0 = 0; i0 < g.n[0]; ++i0) {
                double val;
                if (i0 == c0 && i1 == c1 && i2 == c2) {
                    val = cell;
                } else {
                    const double x = g.coord(0, i0) - cx;
                    val = -1.0 / std::sqrt(x * x + y * y + z * z);
                }
                v[g.index(i0, i1, i2)] = val;
            }
        }
    return v;
}

// Lowest eigenvalue of -Delta - 1/|x| on a box of 14/(kappa) around the atom.
double bare_atom_eigenvalue(std::shared_ptr<const CartesianGrid> grid, double node_factor) {
    const GridHamiltonian H(grid, point_charge(*grid, 0, node_factor));
    const SeparableSolver pc(grid, grid->d == 2 ? 1.0 : 0.25);
    EigenOptions eo;
    eo.nev = 1;
    eo.block = 2;
    eo.tol = 1e-11;
    eo.max_iter = 2000;
    eo.parity = Parity::even;
    const auto& gr = *grid;
    const double beta = gr.d == 2 ? 1.0 : 0.5;
    const auto guess = sample(grid, [&](const std::array<double, 3>& x) {
        return std::exp(-beta * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
    const auto e = lobpcg(H, pc, eo, {guess.values});
    if (!e.converged) throw NonconvergenceError("bare atom eigensolver did not converge", e.residuals);
    return e.values[0];
}

double calibrate_node_factor(const CartesianGrid& g) {
    const double exact = g.d == 2 ? -1.0 : -0.25;
    const double reach = g.d == 2 ? 14.0 : 28.0;
    auto box = std::make_shared<const CartesianGrid>(
        g.geometry == Geometry::axisymmetric ? make_axisymmetric_grid(reach, reach, g.h)
                                             : make_cartesian_grid(2, {reach, reach, 0}, g.h));
    auto f = [&](double s) { return bare_atom_eigenvalue(box, s) - exact; };
    double lo = 0.5 * singular_cell_factor(g), hi = 2.0 * singular_cell_factor(g);
    const double flo = f(lo), fhi = f(hi);
    if (!(flo > 0 && fhi < 0)) throw ModelError("nucleus calibration is not bracketed; grid spacing too coarse");
    std::uintmax_t iters = 60;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                     boost::math::tools::eps_tolerance<double>(40), iters);
    return 0.5 * (r.first + r.second);
}

} // namespace

double nucleus_node_factor(const CartesianGrid& g) {
    if (g.axes() == 3) return singular_cell_factor(g);
    static std::mutex mtx;
    static std::map<std::pair<int, double>, double> cache;
    const std::pair<int, double> key{int(g.geometry), g.h};
    {
        std::lock_guard<std::mutex> lock(mtx);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double v = calibrate_node_factor(g);
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, v);
    return v;
}

std::vector<double> nucleus_potential(const CartesianGrid& g, int offset_cells) {
    return point_charge(g, offset_cells, nucleus_node_factor(g));
}

int snap_half_cells(const CartesianGrid& g, double L) {
    if (!(L > 0)) throw ConfigError("internuclear distance must be positive");
    const long m = std::lround(L / (2 * g.h));
    if (m < 1) throw ConfigError("internuclear distance below two grid cells");
    return int(m);
}

DiatomicPotential build_potential(std::shared_ptr<const CartesianGrid> grid, double L, double margin) {
    const CartesianGrid& g = *grid;
    const int m = snap_half_cells(g, L);
    if (m * g.h + margin > g.half_extent[0] + 1e-12)
        throw ConfigError("nuclei too close to the box boundary");
    DiatomicPotential p;
    p.half_cells = m;
    p.L = 2 * m * g.h;
    auto right = nucleus_potential(g, m);
    std::vector<double> left(right.size());
    reflect(g, right.data(), left.data());
    for (std::size_t i = 0; i < right.size(); ++i) right[i] += left[i];
    project_parity(g, Parity::even, right.data());
    p.values = GridField(grid, std::move(right), Parity::even);
    p.nuclear_repulsion = 1.0 / p.L;
    return p;
}

//-------------------------------------------------------------------------

namespace {

struct ScfOutcome {
    std::vector<double> u, W;
    double mu = 0;
    double residual = 0;
    int iterations = 0;
    std::vector<double> history;
};

double pairing(const std::vector<double>& mass, const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<double>& W) {
    double s = 0;
    for (std::size_t i = 0; i < W.size(); ++i) s += mass[i] * a[i] * b[i] * W[i];
    return 0.5 * s;
}

double mnorm2(const std::vector<double>& mass, const std::vector<double>& x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += mass[i] * x[i] * x[i];
    return s;
}

std::vector<double> squared(const std::vector<double>& u) {
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] * u[i];
    return r;
}

std::vector<double> hartree_potential(const ModelParams& p, const GridCoulomb& C, const std::vector<double>& u) {
    if (!(p.hartree_coupling > 0)) return std::vector<double>(u.size(), 0.0);
    auto W = C.apply(squared(u));
    for (double& v : W) v *= p.hartree_coupling;
    return W;
}

double sigma_for(const DiatomicOptions& opt, double mu) {
    return opt.precond_sigma > 0 ? opt.precond_sigma : std::max(0.05, std::abs(mu));
}

// Damped SCF for the even ground state with int u^2 = charge.
ScfOutcome grid_scf(const ModelParams& params, std::shared_ptr<const CartesianGrid> grid,
                    const std::vector<double>& Vnuc, double charge, std::vector<double> u0,
                    const SCFSettings& s, const DiatomicOptions& opt, const GridCoulomb& C,
                    const SeparableSolver& pc) {
    const CartesianGrid& g = *grid;
    const std::size_t N = g.size();
    const auto mass = g.mass();
    project_parity(g, Parity::even, u0.data());
    {
        const double sc = std::sqrt(charge / mnorm2(mass, u0));
        for (double& v : u0) v *= sc;
    }
    ScfOutcome out;
    std::vector<double> u = std::move(u0), W = hartree_potential(params, C, u), Wmix = W, Wbase = W, V(N);
    std::vector<double> energies;
    double alpha = s.mixing;
    EigenOptions eo;
    eo.nev = 1;
    eo.block = 2;
    eo.parity = Parity::even;
    eo.max_iter = opt.eig_max_iter;
    eo.seed = opt.seed;
    eo.tol = std::min(opt.eig_tol, 0.05 * s.tol_residual / std::sqrt(charge));
    for (int k = 1; k <= s.max_iter; ++k) {
        for (std::size_t i = 0; i < N; ++i) V[i] = Vnuc[i] + Wmix[i];
        const GridHamiltonian Hmix(grid, V);
        const auto e = lobpcg(Hmix, pc, eo, {u});
        if (!e.converged) throw NonconvergenceError("even sector eigensolver did not converge in the SCF", e.residuals);
        u = e.vectors[0];
        double sum = 0;
        for (double v : u) sum += v;
        const double sc = (sum < 0 ? -1.0 : 1.0) * std::sqrt(charge);
        for (double& v : u) v *= sc;
        W = hartree_potential(params, C, u);
        for (std::size_t i = 0; i < N; ++i) V[i] = Vnuc[i] + W[i];
        const GridHamiltonian H(grid, V);
        out.mu = H.rayleigh(u);
        out.residual = H.residual_norm(u, out.mu);
        out.history.push_back(out.residual);
        out.iterations = k;
        const double energy = out.mu * charge - pairing(mass, u, u, W);
        energies.push_back(energy);
        if (out.residual <= s.tol_residual) {
            out.u = std::move(u);
            out.W = std::move(W);
            return out;
        }
        if (k >= 3) {
            const double d1 = energies[k - 1] - energies[k - 2], d0 = energies[k - 2] - energies[k - 3];
            if (d1 * d0 < 0 && std::abs(d1) > s.tol_energy && alpha > 1.0 / 64) alpha *= 0.5;
        }
        Wbase = Wmix;
        for (std::size_t i = 0; i < N; ++i) Wmix[i] = (1 - alpha) * Wmix[i] + alpha * W[i];
    }
    throw NonconvergenceError("grid SCF did not reach the residual tolerance", out.history);
}

std::vector<double> sample_radial(const CartesianGrid& g, const RadialFunction& f, int offset_cells) {
    const double cx = offset_cells * g.h;
    std::vector<double> v(g.size());
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
            const double y = g.axes() > 1 ? g.coord(1, i1) : 0.0;
            const double z = g.axes() > 2 ? g.coord(2, i2) : 0.0;
            for (int i0 = 0; i0 < g.n[0]; ++i0) {
                const double x = g.coord(0, i0) - cx;
                v[g.index(i0, i1, i2)] = radial_interpolate(f, std::sqrt(x * x + y * y + z * z));
            }
        }
    return v;
}

void check_margin(const CartesianGrid& g, double reach, double margin) {
    bool ok = reach + margin <= g.half_extent[0] + 1e-12;
    for (int a = 1; a < g.axes(); ++a) ok = ok && margin <= g.half_extent[a] + 1e-12;
    if (!ok) throw ConfigError("box leaves less than the required decay margin around the nuclei");
}

} // namespace

GridMonoSolution solve_grid_mono(const ModelParams& params, std::shared_ptr<const CartesianGrid> grid,
                                 const MonoatomicSolution& mono, const SCFSettings& settings,
                                 const DiatomicOptions& opt) {
    params.validate();
    settings.validate();
    const CartesianGrid& g = *grid;
    if (g.d != params.d || mono.params.d != params.d) throw ConfigError("grid and model dimensions differ");
    check_margin(g, 0.0, opt.margin_decay_lengths / std::sqrt(std::abs(mono.mu)));
    GridMonoSolution out;
    out.params = params;
    out.potential = nucleus_potential(g, 0);
    const GridCoulomb C(grid, opt.coulomb);
    const SeparableSolver pc(grid, sigma_for(opt, mono.mu));
    auto r = grid_scf(params, grid, out.potential, 1.0, sample_radial(g, mono.u, 0), settings, opt, C, pc);
    const auto mass = g.mass();
    out.u = GridField(grid, r.u, Parity::even);
    out.hartree = r.W;
    out.mu = r.mu;
    out.residual = r.residual;
    out.iterations = r.iterations;
    out.residual_history = r.history;
    out.coulomb_D = pairing(mass, r.u, r.u, r.W);
    out.kinetic = stiffness_form(g, r.u.data(), r.u.data());
    out.energy_I = r.mu - out.coulomb_D;
    if (C.boundary_mass_fraction(squared(r.u)) > opt.coulomb.padding_tolerance)
        out.flags.push_back("insufficient-padding");
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
            const double y = g.axes() > 1 ? g.coord(1, i1) : 0.0;
            const double z = g.axes() > 2 ? g.coord(2, i2) : 0.0;
            for (int i0 = 0; i0 < g.n[0]; ++i0) {
                const std::size_t p = g.index(i0, i1, i2);
                const double x = g.coord(0, i0), r2 = x * x + y * y + z * z;
                out.m1 += mass[p] * r.u[p] * r.u[p] * r2;
                out.m2 += mass[p] * r.u[p] * r.u[p] * r2 * r2;
            }
        }
    return out;
}

DiatomicSolution solve_diatomic(const ModelParams& params, std::shared_ptr<const CartesianGrid> grid,
                                const MonoatomicSolution& mono, double L, const SCFSettings& settings,
                                const DiatomicOptions& opt, const GridMonoSolution* ref) {
    params.validate();
    settings.validate();
    const CartesianGrid& g = *grid;
    if (g.d != params.d || mono.params.d != params.d) throw ConfigError("grid and model dimensions differ");
    const double kappa = std::sqrt(std::abs(mono.mu));
    const double margin = opt.margin_decay_lengths / kappa;
    const auto pot = build_potential(grid, L, margin);
    check_margin(g, pot.L / 2, margin);
    const int m = pot.half_cells;

    std::vector<double> ur, ul;
    if (ref) {
        if (!(*ref->u.grid == g)) throw ConfigError("reference atom lives on a different box");
        ur = shift_axis0(g, ref->u.values, m);
        ul = shift_axis0(g, ref->u.values, -m);
    } else {
        ur = sample_radial(g, mono.u, m);
        ul = sample_radial(g, mono.u, -m);
    }
    std::vector<double> u0(g.size()), odd0(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        u0[i] = ur[i] + ul[i];
        odd0[i] = ur[i] - ul[i];
    }

    const GridCoulomb C(grid, opt.coulomb);
    const SeparableSolver pc(grid, sigma_for(opt, mono.mu));
    const auto& Vn = pot.values.values;
    auto r = grid_scf(params, grid, Vn, 2.0, u0, settings, opt, C, pc);

    DiatomicSolution sol;
    sol.params = params;
    sol.L = pot.L;
    sol.half_cells = m;
    sol.potential = Vn;
    sol.hartree = r.W;
    sol.mu_plus = r.mu;
    sol.residual_scf = r.residual;
    sol.scf_iterations = r.iterations;
    sol.scf_history = r.history;
    sol.u_plus = GridField(grid, r.u, Parity::even);

    const auto mass = g.mass();
    std::vector<double> V(g.size());
    for (std::size_t i = 0; i < V.size(); ++i) V[i] = Vn[i] + r.W[i];
    const GridHamiltonian H(grid, V);

    EigenOptions eo;
    eo.nev = 2;
    eo.block = 3;
    eo.tol = opt.eig_tol;
    eo.max_iter = opt.eig_max_iter;
    eo.seed = opt.seed;
    eo.parity = Parity::even;
    const auto ev = lobpcg(H, pc, eo, {r.u});
    if (!ev.converged) throw NonconvergenceError("even sector eigensolver did not converge", ev.residuals);
    eo.parity = Parity::odd;
    const auto od = lobpcg(H, pc, eo, {odd0});
    if (!od.converged) throw NonconvergenceError("odd sector eigensolver did not converge", od.residuals);

    sol.mu_plus_resolve = ev.values[0];
    sol.mu_plus_second = ev.values[1];
    sol.mu_minus = od.values[0];
    sol.mu_minus_second = od.values[1];
    sol.mu_third = std::min(ev.values[1], od.values[1]);
    sol.residual_plus = ev.residuals[0];
    sol.residual_minus = od.residuals[0];
    sol.eig_iterations_plus = ev.iterations;
    sol.eig_iterations_minus = od.iterations;

    auto um = od.vectors[0];
    double right = 0;
    for (int i1 = 0; i1 < g.n[1] * g.n[2]; ++i1)
        for (int i0 = g.center() + 1; i0 < g.n[0]; ++i0) right += um[std::size_t(i1) * g.n[0] + i0];
    const double sc = (right < 0 ? -1.0 : 1.0) * std::sqrt(2.0);
    for (double& v : um) v *= sc;
    project_parity(g, Parity::odd, um.data());
    sol.u_minus = GridField(grid, std::move(um), Parity::odd);

    sol.gap = sol.mu_minus - sol.mu_plus_resolve;
    const double sep = std::max(1e-3, sol.mu_third - sol.mu_minus);
    sol.gap_resolution = std::max(1e-12, (sol.residual_plus * sol.residual_plus +
                                          sol.residual_minus * sol.residual_minus) / sep);
    if (!(sol.gap > 10 * sol.gap_resolution)) sol.flags.push_back("gap-unresolved");
    sol.T_L = std::exp(-kappa * sol.L);

    sol.kinetic = stiffness_form(g, r.u.data(), r.u.data());
    sol.coulomb_D = pairing(mass, r.u, r.u, r.W);
    double pot_energy = 0;
    for (std::size_t i = 0; i < V.size(); ++i) pot_energy += mass[i] * Vn[i] * r.u[i] * r.u[i];
    sol.energy_functional = sol.kinetic + pot_energy + sol.coulomb_D + pot.nuclear_repulsion;
    sol.E_L = 0.5 * sol.energy_functional;
    if (C.boundary_mass_fraction(squared(r.u)) > opt.coulomb.padding_tolerance)
        sol.flags.push_back("insufficient-padding");
    return sol;
}

GridHamiltonian assemble_hamiltonian(const DiatomicSolution& sol) {
    std::vector<double> V(sol.potential.size());
    for (std::size_t i = 0; i < V.size(); ++i) V[i] = sol.potential[i] + sol.hartree[i];
    return GridHamiltonian(sol.u_plus.grid, std::move(V));
}

double energy_functional(const GridField& v, const ModelParams& params, const std::vector<double>& potential,
                         const GridCoulomb* coulomb) {
    params.validate();
    const CartesianGrid& g = *v.grid;
    if (potential.size() != g.size()) throw ConfigError("potential length does not match the grid");
    const auto mass = g.mass();
    double e = stiffness_form(g, v.values.data(), v.values.data());
    for (std::size_t i = 0; i < g.size(); ++i) e += mass[i] * potential[i] * v.values[i] * v.values[i];
    if (params.hartree_coupling > 0) {
        std::unique_ptr<GridCoulomb> own;
        if (!coulomb) {
            own = std::make_unique<GridCoulomb>(v.grid);
            coulomb = own.get();
        }
        const auto W = coulomb->apply(squared(v.values));
        e += params.hartree_coupling * pairing(mass, v.values, v.values, W);
    }
    return e;
}

SuperpositionError superposition_error(const DiatomicSolution& sol, const GridMonoSolution& ref, double s) {
    const CartesianGrid& g = *sol.u_plus.grid;
    if (!(*ref.u.grid == g)) throw ConfigError("reference atom lives on a different box");
    const auto ur = shift_axis0(g, ref.u.values, sol.half_cells);
    const auto ul = shift_axis0(g, ref.u.values, -sol.half_cells);
    std::vector<double> ep(g.size()), em(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        ep[i] = sol.u_plus.values[i] - (ur[i] + ul[i]);
        em[i] = sol.u_minus.values[i] - (ur[i] - ul[i]);
    }
    SuperpositionError e;
    e.s = s;
    e.plus = sobolev_norm(GridField(sol.u_plus.grid, std::move(ep), Parity::even), s);
    e.minus = sobolev_norm(GridField(sol.u_plus.grid, std::move(em), Parity::odd), s);
    return e;
}

InteractionIntegrals interaction_integrals(const GridMonoSolution& ref, double L, double m1, double m2) {
    const auto grid = ref.u.grid;
    const CartesianGrid& g = *grid;
    const auto pot = build_potential(grid, L);
    const int m = pot.half_cells;
    const auto ur = shift_axis0(g, ref.u.values, m);
    const auto ul = shift_axis0(g, ref.u.values, -m);
    const auto mass = g.mass();
    const std::size_t N = g.size();
    std::vector<double> cross(N), left2(N);
    for (std::size_t i = 0; i < N; ++i) {
        cross[i] = ul[i] * ur[i];
        left2[i] = ul[i] * ul[i];
    }
    const GridCoulomb C(grid);
    const auto Wc = C.apply(cross), Wl = C.apply(left2);
    const auto Vl = nucleus_potential(g, -m);
    InteractionIntegrals r;
    r.L = pot.L;
    for (std::size_t i = 0; i < N; ++i) {
        r.overlap += mass[i] * cross[i];
        r.D_cross_cross += 0.5 * mass[i] * cross[i] * Wc[i];
        r.D_self_cross += 0.5 * mass[i] * cross[i] * Wl[i];
        r.product_l2 += mass[i] * cross[i] * cross[i];
        r.VL_cross += mass[i] * pot.values.values[i] * cross[i];
        r.V_left_right += mass[i] * Vl[i] * ur[i] * ur[i];
        r.D_left_right += 0.5 * mass[i] * ur[i] * ur[i] * Wl[i];
    }
    r.product_l2 = std::sqrt(r.product_l2);
    r.gradient = stiffness_form(g, ul.data(), ur.data());
    const double Lr = r.L;
    if (g.d == 2) {
        r.predicted_V_left_right = -(1 / Lr + m1 / (4 * std::pow(Lr, 3)) + 9 * m2 / (64 * std::pow(Lr, 5)));
        r.predicted_D_left_right =
            1 / (2 * Lr) + m1 / (4 * std::pow(Lr, 3)) + 9 * (m2 + 2 * m1 * m1) / (64 * std::pow(Lr, 5));
    } else {
        r.predicted_V_left_right = -1 / Lr;
        r.predicted_D_left_right = 1 / (2 * Lr);
    }
    return r;
}

SubstitutionResult substitution_identity(const DiatomicSolution& sol, const GridField& gf) {
    const CartesianGrid& g = *sol.u_plus.grid;
    if (!(*gf.grid == g)) throw ConfigError("substitution function lives on a different box");
    const auto H = assemble_hamiltonian(sol);
    const auto& psi = sol.u_plus.values;
    const auto& mass = H.mass();
    const double lambda = H.rayleigh(psi);
    const std::size_t N = g.size();
    std::vector<double> Ap(N), gp(N), Agp(N);
    H.apply(psi.data(), Ap.data());
    for (std::size_t i = 0; i < N; ++i) gp[i] = gf.values[i] * psi[i];
    H.apply(gp.data(), Agp.data());
    SubstitutionResult r;
    double res2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double ri = Ap[i] - lambda * mass[i] * psi[i];
        res2 += ri * ri / mass[i];
        r.lhs += gp[i] * (Agp[i] - lambda * mass[i] * gp[i]);
        r.residual_term += gf.values[i] * gf.values[i] * psi[i] * ri;
        r.norm_gpsi2 += mass[i] * gp[i] * gp[i];
    }
    r.residual = std::sqrt(res2);
    r.edge_term = edge_weighted_form(g, psi.data(), gf.values.data());
    r.rhs_half = 0.5 * r.edge_term;
    r.rhs_full = r.edge_term + r.residual_term;
    return r;
}

std::vector<SubstitutionProbe> substitution_probes(const DiatomicSolution& sol) {
    const auto grid = sol.u_plus.grid;
    const double L = std::max(sol.L, 2 * grid->h);
    std::vector<SubstitutionProbe> out;
    out.push_back({"tanh", sample(grid, [&](const std::array<double, 3>& x) { return std::tanh(2 * x[0] / L); })});
    out.push_back({"gaussian", sample(grid, [&](const std::array<double, 3>& x) {
                       return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (L * L));
                   })});
    out.push_back({"linear", sample(grid, [&](const std::array<double, 3>& x) { return x[0] / L; })});
    return out;
}

SharperBoundReport sharper_bound_check(const DiatomicSolution& sol, double mu) {
    const CartesianGrid& g = *sol.u_plus.grid;
    const double kappa = std::sqrt(std::abs(mu)), xL = sol.half_cells * g.h;
    const double p = 0.5 * (g.d - 1);
    auto profile = [&](double x, double y) {
        const double a = std::hypot(x - xL, y), b = std::hypot(x + xL, y);
        return std::exp(-kappa * a) / (1 + std::pow(a, p)) + std::exp(-kappa * b) / (1 + std::pow(b, p));
    };
    const auto& u = sol.u_plus.values;
    SharperBoundReport rep;
    rep.min_ratio = 1e300;
    rep.max_ratio = 0;
    auto take = [&](double ratio) {
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++rep.samples;
    };
    const int j_axis = g.geometry == Geometry::axisymmetric ? 0 : (g.n[1] - 1) / 2;
    const int k_axis = (g.n[2] - 1) / 2;
    const double y_axis = g.geometry == Geometry::axisymmetric ? g.coord(1, 0) : 0.0;
    for (int i0 = 0; i0 < g.n[0]; ++i0) {
        const double v = u[g.index(i0, j_axis, k_axis)];
        if (!(v > 1e-10)) continue;
        const double x = g.coord(0, i0);
        const double ratio = v / profile(x, y_axis);
        rep.axis_x.push_back(x);
        rep.axis_ratio.push_back(ratio);
        take(ratio);
    }
    const int c = g.center();
    double prev = 1e300;
    for (int j = j_axis; j < g.n[1]; ++j) {
        const double v = u[g.index(c, j, k_axis)];
        if (!(v > 1e-10)) break;
        const double y = g.coord(1, j);
        if (v > prev) rep.bisector_monotone = false;
        prev = v;
        const double ratio = v / profile(0.0, y);
        rep.bisector_y.push_back(y);
        rep.bisector_ratio.push_back(ratio);
        take(ratio);
    }
    rep.midpoint_value = u[g.index(c, j_axis, k_axis)];
    rep.midpoint_profile = 2 * std::exp(-kappa * xL) / (1 + std::pow(xL, p));
    rep.midpoint_ratio = rep.midpoint_value / rep.midpoint_profile;
    return rep;
}

} // namespace hartree
