#include "hartree/coulomb.hpp"

#include "fft.hpp"
#include "hartree/error.hpp"
#include "hartree/fast_solver.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace hartree {

using std::numbers::pi;

double elliptic_k_from_complement(double kp) {
    if (!(kp > 0.0)) throw DomainError("elliptic K diverges at k = 1");
    double a = 1.0, b = kp;
    for (int it = 0; it < 64 && std::abs(a - b) > 1e-15 * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return pi / (a + b);
}

double elliptic_k(double k) {
    if (!(k >= 0.0 && k < 1.0)) throw DomainError("elliptic K needs 0 <= k < 1");
    return elliptic_k_from_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

double ring_kernel(double r, double s) {
    const double sum = r + s;
    return 4.0 * elliptic_k_from_complement(std::abs(r - s) / sum) / sum;
}

double singular_cell_factor(const CartesianGrid& g) {
    if (g.geometry == Geometry::axisymmetric)
        return std::sqrt(5.0) / 2 + 2 * std::asinh(0.5) - 0.5;
    // Cell mean 4 ln(1 + sqrt 2) plus the lattice sum of its midpoint defects,
    // i.e. -4 zeta(1/2) beta(1/2): the nodal sum of 1/|x| is then exact for constants.
    if (g.d == 2) return 3.900264920001956;
    return 3 * std::log(2 + std::sqrt(3.0)) - pi / 2;
}

//-------------------------------------------------------------------------
// Radial potentials

namespace {

using Gauss8 = boost::math::quadrature::gauss<double, 8>;
using Gauss16 = boost::math::quadrature::gauss<double, 16>;

template <class Rule>
void rule_points(std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    const auto& a = Rule::abscissa();
    const auto& b = Rule::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            x.push_back(0.0);
            w.push_back(b[i]);
        } else {
            x.push_back(a[i]);
            w.push_back(b[i]);
            x.push_back(-a[i]);
            w.push_back(b[i]);
        }
    }
}

struct Rules {
    std::vector<double> x8, w8, x16, w16;
    Rules() {
        rule_points<Gauss8>(x8, w8);
        rule_points<Gauss16>(x16, w16);
    }
};

const Rules& rules() {
    static const Rules r;
    return r;
}

// Adds weight `c` for grid index j (t_j = j/n) into a row over nodes 1..n,
// honouring the even extension and the extrapolated r = 0 value.
inline void scatter(double* row, int n, int j, double c) {
    if (j > n) return;
    if (j < 0) j = -j;
    if (j == 0) {
        row[0] += 1.5 * c;
        row[1] -= 0.6 * c;
        row[2] += 0.1 * c;
        return;
    }
    row[j - 1] += c;
}

// Integrates kernel(s) rho(s) ds over all panels, rho given by cubic
// interpolation in t, accumulating node weights. Panels close to t_r use the
// substitution t - t_r = +-w^3, which tames a log singularity at t_r.
template <class Kernel>
void panel_weights(const RadialGrid& g, double tr, Kernel&& kernel, double* row) {
    const int n = int(g.size());
    const double dt = 1.0 / n;
    // Snap to a panel boundary so that no degenerate sub-panel appears.
    const double snapped = std::round(tr * n);
    if (std::abs(tr * n - snapped) < 1e-9) tr = snapped / n;
    const Rules& R = rules();
    auto add_point = [&](double t, double wt, int j) {
        const double s = g.r_of_t(t);
        if (t == tr) return;
        const double f = kernel(s) * g.drdt_of_t(t) * wt;
        if (f == 0.0) return;
        const double u = t * n - j;
        const double l0 = -u * (u - 1) * (u - 2) / 6.0;
        const double l1 = (u + 1) * (u - 1) * (u - 2) / 2.0;
        const double l2 = -(u + 1) * u * (u - 2) / 2.0;
        const double l3 = (u + 1) * u * (u - 1) / 6.0;
        scatter(row, n, j - 1, l0 * f);
        scatter(row, n, j, l1 * f);
        scatter(row, n, j + 1, l2 * f);
        scatter(row, n, j + 2, l3 * f);
    };
    auto regular = [&](double ta, double tb, int j) {
        const double half = 0.5 * (tb - ta), mid = 0.5 * (ta + tb);
        for (std::size_t q = 0; q < R.x8.size(); ++q) add_point(mid + half * R.x8[q], half * R.w8[q], j);
    };
    auto graded = [&](double ta, double tb, int j) {
        // ta, tb on the same side of tr
        const double sign = (ta + tb) > 2 * tr ? 1.0 : -1.0;
        double wa = std::cbrt(std::abs(ta - tr)), wb = std::cbrt(std::abs(tb - tr));
        if (wa > wb) std::swap(wa, wb);
        const double half = 0.5 * (wb - wa), mid = 0.5 * (wa + wb);
        for (std::size_t q = 0; q < R.x16.size(); ++q) {
            const double w = mid + half * R.x16[q];
            const double t = tr + sign * w * w * w;
            add_point(t, 3 * w * w * half * R.w16[q], j);
        }
    };
    for (int j = 0; j < n; ++j) {
        const double ta = double(j) / n, tb = double(j + 1) / n;
        const double dist = std::min(std::abs(ta - tr), std::abs(tb - tr));
        const bool inside = tr > ta && tr < tb;
        if (inside) {
            graded(ta, tr, j);
            graded(tr, tb, j);
        } else if (dist < 2.0 * dt) {
            graded(ta, tb, j);
        } else {
            regular(ta, tb, j);
        }
    }
}

} // namespace

RadialCoulomb::RadialCoulomb(std::shared_ptr<const RadialGrid> grid, std::size_t dense_limit)
    : grid_(std::move(grid)) {
    const RadialGrid& g = *grid_;
    if (g.d == 2 && g.size() <= dense_limit) {
        const std::size_t n = g.size();
        rem_.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) remainder_row(g.r[i], rem_.data() + i * n);
        dense_ = true;
    }
}

void RadialCoulomb::remainder_row(double r, double* row) const {
    const RadialGrid& g = *grid_;
    std::fill_n(row, g.size(), 0.0);
    const double tr = g.t_of_r(r);
    panel_weights(g, tr, [r](double s) {
        return s * (ring_kernel(r, s) - 2 * pi / std::max(r, s));
    }, row);
}

std::vector<double> RadialCoulomb::apply(const std::vector<double>& rho) const {
    const RadialGrid& g = *grid_;
    const std::size_t n = g.size();
    if (rho.size() != n) throw ConfigError("density length does not match the radial grid");
    // Newton split: (1/r) int_{s<r} rho + int_{s>r} rho / s, with the d-measure.
    std::vector<double> v(n);
    double inner = 0, outer = 0;
    std::vector<double> tail(n + 1, 0.0);
    for (std::size_t j = n; j-- > 0;) tail[j] = tail[j + 1] + g.w[j] * rho[j] / g.r[j];
    for (std::size_t i = 0; i < n; ++i) {
        const double half = 0.5 * g.w[i] * rho[i];
        outer = tail[i + 1] + half / g.r[i];
        v[i] = (inner + half) / g.r[i] + outer;
        inner += g.w[i] * rho[i];
    }
    if (g.d == 2) {
        std::vector<double> row;
        for (std::size_t i = 0; i < n; ++i) {
            const double* w;
            if (dense_) {
                w = rem_.data() + i * n;
            } else {
                row.resize(n);
                remainder_row(g.r[i], row.data());
                w = row.data();
            }
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += w[j] * rho[j];
            v[i] += s;
        }
    }
    return v;
}

double RadialCoulomb::potential_at(const std::vector<double>& rho, double r) const {
    const RadialGrid& g = *grid_;
    if (!(r > 0)) throw DomainError("potential needs r > 0");
    std::vector<double> row(g.size(), 0.0);
    const double tr = std::min(g.t_of_r(r), 2.0);
    if (g.d == 2) {
        panel_weights(g, tr, [r](double s) { return s * ring_kernel(r, s); }, row.data());
    } else {
        panel_weights(g, tr, [r](double s) { return 4 * pi * s * s / std::max(r, s); }, row.data());
    }
    double s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * rho[j];
    return s;
}

RadialFunction radial_potential(const RadialFunction& rho, int d) {
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    if (rho.grid->d != d) throw ConfigError("grid dimension differs from the requested kernel");
    RadialCoulomb op(rho.grid);
    return RadialFunction(rho.grid, op.apply(rho.values));
}

double radial_potential_at(const RadialFunction& rho, int d, double r) {
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    if (rho.grid->d != d) throw ConfigError("grid dimension differs from the requested kernel");
    RadialCoulomb op(rho.grid, 0);
    return op.potential_at(rho.values, r);
}

//-------------------------------------------------------------------------
// Box potentials

struct GridCoulomb::Impl {
    // Cartesian FFT route
    detail::RealFft fft;
    std::vector<std::complex<double>> kernel_hat;
    // Axisymmetric Poisson route
    std::unique_ptr<SeparableSolver> poisson;
};

GridCoulomb::GridCoulomb(std::shared_ptr<const CartesianGrid> grid, GridPotentialOptions opt)
    : grid_(std::move(grid)), opt_(opt), impl_(std::make_unique<Impl>()) {
    const CartesianGrid& g = *grid_;
    if (g.geometry == Geometry::axisymmetric) {
        impl_->poisson = std::make_unique<SeparableSolver>(grid_, 0.0);
        return;
    }
    const int axes = g.axes();
    std::vector<int> dims(axes);
    for (int a = 0; a < axes; ++a) dims[a] = 2 * g.n[a];
    impl_->fft = detail::RealFft(dims);
    const std::size_t real = impl_->fft.real_size();
    std::vector<double> ker(real, 0.0);
    const double hd = std::pow(g.h, g.d);
    const int p0 = dims[0], p1 = dims[1], p2 = axes > 2 ? dims[2] : 1;
    auto offset = [](int q, int p) { return q < p / 2 ? q : q - p; };
    for (int q2 = 0; q2 < p2; ++q2)
        for (int q1 = 0; q1 < p1; ++q1)
            for (int q0 = 0; q0 < p0; ++q0) {
                const double o0 = offset(q0, p0), o1 = offset(q1, p1),
                             o2 = axes > 2 ? offset(q2, p2) : 0.0;
                const double dist = g.h * std::sqrt(o0 * o0 + o1 * o1 + o2 * o2);
                const double k = dist == 0.0 ? singular_cell_factor(g) / g.h : 1.0 / dist;
                ker[std::size_t(q0) + std::size_t(p0) * (q1 + std::size_t(p1) * q2)] = hd * k;
            }
    impl_->kernel_hat.resize(impl_->fft.complex_size());
    impl_->fft.forward(ker.data(), impl_->kernel_hat.data());
    if (opt_.analytic_transform) {
        const int c0 = p0 / 2 + 1;
        for (int q2 = 0; q2 < p2; ++q2)
            for (int q1 = 0; q1 < p1; ++q1)
                for (int q0 = 0; q0 < c0; ++q0) {
                    const double k0 = 2 * pi * q0 / (p0 * g.h);
                    const double k1 = 2 * pi * offset(q1, p1) / (p1 * g.h);
                    const double k2 = axes > 2 ? 2 * pi * offset(q2, p2) / (p2 * g.h) : 0.0;
                    const double kk = std::sqrt(k0 * k0 + k1 * k1 + k2 * k2);
                    if (kk == 0.0) continue;
                    const double val = g.d == 2 ? 2 * pi / kk : 4 * pi / (kk * kk);
                    impl_->kernel_hat[std::size_t(q0) + std::size_t(c0) * (q1 + std::size_t(p1) * q2)] = val;
                }
    }
}

GridCoulomb::~GridCoulomb() = default;
GridCoulomb::GridCoulomb(GridCoulomb&&) noexcept = default;
GridCoulomb& GridCoulomb::operator=(GridCoulomb&&) noexcept = default;

namespace {

// Potential of an axially symmetric density at (z, rho) from its multipoles.
struct AxialMultipoles {
    std::vector<double> q;
    double eval(double z, double rho) const {
        const double r = std::hypot(z, rho);
        const double c = z / r;
        double p0 = 1, p1 = c, sum = q[0] / r;
        double rp = r * r;
        if (q.size() > 1) sum += q[1] * p1 / rp;
        for (std::size_t l = 2; l < q.size(); ++l) {
            const double p2 = ((2 * l - 1) * c * p1 - (l - 1) * p0) / l;
            rp *= r;
            sum += q[l] * p2 / rp;
            p0 = p1;
            p1 = p2;
        }
        return sum;
    }
};

} // namespace

std::vector<double> GridCoulomb::apply(const std::vector<double>& rho) const {
    const CartesianGrid& g = *grid_;
    if (rho.size() != g.size()) throw ConfigError("density length does not match the grid");
    const int n0 = g.n[0], n1 = g.n[1];
    if (g.geometry == Geometry::axisymmetric) {
        const int lmax = std::max(0, opt_.multipole_order);
        AxialMultipoles mp;
        mp.q.assign(lmax + 1, 0.0);
        std::vector<double> pl(lmax + 1);
        for (int j = 0; j < n1; ++j) {
            const double m = g.node_volume(j);
            const double rr = g.coord(1, j);
            for (int k = 0; k < n0; ++k) {
                const double val = rho[g.index(k, j)];
                if (val == 0.0) continue;
                const double z = g.coord(0, k);
                const double r = std::hypot(z, rr), c = z / r;
                double p0 = 1, p1 = c, rl = 1;
                mp.q[0] += m * val;
                if (lmax >= 1) mp.q[1] += m * val * r * c;
                rl = r;
                for (int l = 2; l <= lmax; ++l) {
                    const double p2 = ((2 * l - 1) * c * p1 - (l - 1) * p0) / l;
                    rl *= r;
                    mp.q[l] += m * val * rl * p2;
                    p0 = p1;
                    p1 = p2;
                }
            }
        }
        std::vector<double> rhs(g.size());
        for (int j = 0; j < n1; ++j) {
            const double m = g.node_volume(j);
            for (int k = 0; k < n0; ++k) rhs[g.index(k, j)] = 4 * pi * m * rho[g.index(k, j)];
        }
        const double h = g.h;
        const double zg = g.half_extent[0] + h;
        for (int j = 0; j < n1; ++j) {
            const double a = 2 * pi * (j + 0.5) * h;
            const double rr = g.coord(1, j);
            rhs[g.index(0, j)] += a * mp.eval(-zg, rr);
            rhs[g.index(n0 - 1, j)] += a * mp.eval(zg, rr);
        }
        const double rg = (n1 + 0.5) * h, b = 2 * pi * n1 * h;
        for (int k = 0; k < n0; ++k) rhs[g.index(k, n1 - 1)] += b * mp.eval(g.coord(0, k), rg);
        std::vector<double> v(g.size());
        impl_->poisson->solve(rhs.data(), v.data());
        return v;
    }
    const auto& dims = impl_->fft.dims();
    const int axes = g.axes();
    const int p0 = dims[0], p1 = dims[1];
    std::vector<double> pad(impl_->fft.real_size(), 0.0);
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < n1; ++i1) {
            const double* src = rho.data() + g.index(0, i1, i2);
            double* dst = pad.data() + std::size_t(p0) * (i1 + std::size_t(p1) * i2);
            std::copy(src, src + n0, dst);
        }
    std::vector<std::complex<double>> spec(impl_->fft.complex_size());
    impl_->fft.forward(pad.data(), spec.data());
    const double norm = 1.0 / double(impl_->fft.real_size());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= impl_->kernel_hat[i] * norm;
    impl_->fft.backward(spec.data(), pad.data());
    std::vector<double> v(g.size());
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < n1; ++i1) {
            const double* src = pad.data() + std::size_t(p0) * (i1 + std::size_t(p1) * i2);
            std::copy(src, src + n0, v.data() + g.index(0, i1, i2));
        }
    (void)axes;
    return v;
}

double GridCoulomb::boundary_mass_fraction(const std::vector<double>& rho) const {
    const CartesianGrid& g = *grid_;
    double total = 0, edge = 0;
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
            const double m = g.node_volume(i1);
            for (int i0 = 0; i0 < g.n[0]; ++i0) {
                const double a = m * std::abs(rho[g.index(i0, i1, i2)]);
                total += a;
                bool boundary = i0 == 0 || i0 == g.n[0] - 1 || i1 == g.n[1] - 1;
                if (g.geometry == Geometry::cartesian) {
                    boundary = boundary || i1 == 0;
                    if (g.d == 3) boundary = boundary || i2 == 0 || i2 == g.n[2] - 1;
                }
                if (boundary) edge += a;
            }
        }
    return total > 0 ? edge / total : 0.0;
}

GridField grid_potential(const GridField& rho, GridPotentialOptions opt) {
    GridCoulomb op(rho.grid, opt);
    GridField out(rho.grid, op.apply(rho.values), rho.parity);
    if (op.boundary_mass_fraction(rho.values) > opt.padding_tolerance)
        out.flags.push_back("insufficient-padding");
    return out;
}

double coulomb_pairing(const CartesianGrid& g, const std::vector<double>& rho,
                       const std::vector<double>& potential) {
    double s = 0;
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
            const double m = g.node_volume(i1);
            const std::size_t b = g.index(0, i1, i2);
            double row = 0;
            for (int i0 = 0; i0 < g.n[0]; ++i0) row += rho[b + i0] * potential[b + i0];
            s += m * row;
        }
    return 0.5 * s;
}

CoulombEnergy coulomb_energy(const GridField& rho, const GridField& sigma) {
    if (!(*rho.grid == *sigma.grid)) throw ConfigError("densities live on different grids");
    GridCoulomb op(sigma.grid);
    return {coulomb_pairing(*rho.grid, rho.values, op.apply(sigma.values))};
}

CoulombEnergy coulomb_energy(const RadialFunction& rho, const RadialFunction& sigma) {
    if (rho.grid.get() != sigma.grid.get() && rho.grid->r != sigma.grid->r)
        throw ConfigError("densities live on different grids");
    const auto v = radial_potential(sigma, sigma.grid->d);
    return {0.5 * rho.inner(v)};
}

bool cauchy_schwarz_check(const GridField& rho, const GridField& sigma, double tol) {
    const double rs = coulomb_energy(rho, sigma).value;
    const double rr = coulomb_energy(rho, rho).value;
    const double ss = coulomb_energy(sigma, sigma).value;
    return rs <= std::sqrt(std::max(rr, 0.0) * std::max(ss, 0.0)) + tol * (std::abs(rr) + std::abs(ss) + 1);
}

bool cauchy_schwarz_check(const RadialFunction& rho, const RadialFunction& sigma, double tol) {
    const double rs = coulomb_energy(rho, sigma).value;
    const double rr = coulomb_energy(rho, rho).value;
    const double ss = coulomb_energy(sigma, sigma).value;
    return rs <= std::sqrt(std::max(rr, 0.0) * std::max(ss, 0.0)) + tol * (std::abs(rr) + std::abs(ss) + 1);
}

} // namespace hartree
