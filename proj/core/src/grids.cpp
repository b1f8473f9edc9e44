#include "hartree/grids.hpp"

#include "fft.hpp"
#include "hartree/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hartree {

using std::numbers::pi;

void ModelParams::validate() const {
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    if (!(hartree_coupling >= 0.0 && hartree_coupling <= 1.0))
        throw ConfigError("hartree_coupling must lie in [0,1]");
}

double sphere_area(int d) {
    if (d == 2) return 2 * pi;
    if (d == 3) return 4 * pi;
    throw ConfigError("dimension must be 2 or 3");
}

//-------------------------------------------------------------------------

double RadialGrid::r_of_t(double t) const { return r_max * std::pow(t, gamma); }

double RadialGrid::drdt_of_t(double t) const {
    return gamma == 1 ? r_max : gamma * r_max * std::pow(t, gamma - 1);
}

double RadialGrid::t_of_r(double radius) const {
    return gamma == 1 ? radius / r_max : std::pow(radius / r_max, 1.0 / gamma);
}

RadialGrid make_radial_grid(double r_max, int n, int d, GridScheme scheme) {
    if (!(r_max > 0)) throw ConfigError("r_max must be positive");
    if (n < 16) throw ConfigError("radial grid needs n >= 16");
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    RadialGrid g;
    g.d = d;
    g.r_max = r_max;
    g.scheme = scheme;
    g.gamma = scheme == GridScheme::graded ? 2 : 1;
    g.r.resize(n);
    g.w.resize(n);
    g.drdt.resize(n);
    const double sd = sphere_area(d);
    for (int i = 0; i < n; ++i) {
        const double t = double(i + 1) / n;
        g.r[i] = g.r_of_t(t);
        g.drdt[i] = g.drdt_of_t(t);
        g.w[i] = sd * std::pow(g.r[i], d - 1) * g.drdt[i] / n;
    }
    g.r[n - 1] = r_max;
    g.w[n - 1] *= 0.5;
    return g;
}

RadialFunction::RadialFunction(std::shared_ptr<const RadialGrid> g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid || values.size() != grid->size())
        throw ConfigError("radial function length does not match its grid");
}

double RadialFunction::integrate() const {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += grid->w[i] * values[i];
    return s;
}

double RadialFunction::inner(const RadialFunction& other) const {
    if (grid.get() != other.grid.get() && grid->r != other.grid->r)
        throw ConfigError("radial functions live on different grids");
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += grid->w[i] * values[i] * other.values[i];
    return s;
}

double RadialFunction::norm() const { return std::sqrt(inner(*this)); }

std::vector<double> radial_face_coefficients(const RadialGrid& g) {
    const int n = int(g.size());
    const double sd = sphere_area(g.d);
    std::vector<double> c(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        const double tf = (i + 1.5) / n;
        c[i] = sd * std::pow(g.r_of_t(tf), g.d - 1) / g.drdt_of_t(tf) * n;
    }
    return c;
}

namespace {

// Nodal value at grid index j (t_j = j/n): j <= 0 uses the even extension
// with the r = 0 value from a quadratic in t^2, j > n gives 0.
double node_value(const std::vector<double>& v, int j) {
    const int n = int(v.size());
    if (j > n) return 0.0;
    if (j < 0) j = -j;
    if (j == 0) return 1.5 * v[0] - 0.6 * v[1] + 0.1 * v[2];
    return v[j - 1];
}

} // namespace

double radial_interpolate(const RadialFunction& f, double radius) {
    const RadialGrid& g = *f.grid;
    const int n = int(g.size());
    if (radius < 0) throw DomainError("negative radius");
    if (radius >= g.r_max) return radius == g.r_max ? f.values.back() : 0.0;
    const double x = g.t_of_r(radius) * n;
    const int j = std::clamp(int(std::floor(x)), 0, n - 1);
    const double u = x - j;
    // Cubic Lagrange through j-1, j, j+1, j+2.
    const double l0 = -u * (u - 1) * (u - 2) / 6.0;
    const double l1 = (u + 1) * (u - 1) * (u - 2) / 2.0;
    const double l2 = -(u + 1) * u * (u - 2) / 2.0;
    const double l3 = (u + 1) * u * (u - 1) / 6.0;
    const auto& v = f.values;
    return l0 * node_value(v, j - 1) + l1 * node_value(v, j) + l2 * node_value(v, j + 1) +
           l3 * node_value(v, j + 2);
}

//-------------------------------------------------------------------------

std::string to_string(Parity p) {
    switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "none";
    }
}

std::string to_string(Geometry g) {
    return g == Geometry::axisymmetric ? "axisymmetric" : "cartesian";
}

double CartesianGrid::coord(int axis, int i) const {
    if (geometry == Geometry::axisymmetric && axis == 1) return (i + 0.5) * h;
    return -half_extent[axis] + i * h;
}

double CartesianGrid::node_volume(int i1) const {
    if (geometry == Geometry::axisymmetric) return 2 * pi * (i1 + 0.5) * h * h * h;
    return std::pow(h, d);
}

std::vector<double> CartesianGrid::mass() const {
    std::vector<double> m(size());
    for (int i2 = 0; i2 < n[2]; ++i2)
        for (int i1 = 0; i1 < n[1]; ++i1) {
            const double v = node_volume(i1);
            std::fill_n(m.begin() + index(0, i1, i2), n[0], v);
        }
    return m;
}

bool CartesianGrid::operator==(const CartesianGrid& o) const {
    return d == o.d && geometry == o.geometry && n == o.n && h == o.h &&
           half_extent == o.half_extent;
}

CartesianGrid make_cartesian_grid(int d, std::array<double, 3> half_extent, double h) {
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    if (!(h > 0)) throw ConfigError("grid spacing must be positive");
    CartesianGrid g;
    g.d = d;
    g.h = h;
    for (int a = 0; a < d; ++a) {
        const long m = std::lround(half_extent[a] / h);
        if (m < 1) throw ConfigError("box half extent smaller than one cell");
        g.n[a] = int(2 * m + 1);
        g.half_extent[a] = m * h;
    }
    return g;
}

CartesianGrid make_cartesian_grid_points(int d, double half_extent, int points) {
    if (points < 3 || points % 2 == 0)
        throw ConfigError("points per axis must be odd and >= 3");
    if (!(half_extent > 0)) throw ConfigError("box half extent must be positive");
    const double h = 2 * half_extent / (points - 1);
    return make_cartesian_grid(d, {half_extent, half_extent, half_extent}, h);
}

CartesianGrid make_axisymmetric_grid(double half_extent_axis, double rho_max, double h) {
    if (!(h > 0)) throw ConfigError("grid spacing must be positive");
    CartesianGrid g;
    g.d = 3;
    g.geometry = Geometry::axisymmetric;
    g.h = h;
    const long m = std::lround(half_extent_axis / h);
    const long nr = std::lround(rho_max / h);
    if (m < 1 || nr < 2) throw ConfigError("axisymmetric box too small for the spacing");
    g.n = {int(2 * m + 1), int(nr), 1};
    g.half_extent = {m * h, nr * h, 0};
    return g;
}

GridField::GridField(std::shared_ptr<const CartesianGrid> g, std::vector<double> v, Parity p)
    : grid(std::move(g)), values(std::move(v)), parity(p) {
    if (!grid || values.size() != grid->size())
        throw ConfigError("grid field length does not match its grid");
}

double GridField::integrate() const {
    double s = 0;
    for (int i2 = 0; i2 < grid->n[2]; ++i2)
        for (int i1 = 0; i1 < grid->n[1]; ++i1) {
            const double m = grid->node_volume(i1);
            const double* x = values.data() + grid->index(0, i1, i2);
            double row = 0;
            for (int i0 = 0; i0 < grid->n[0]; ++i0) row += x[i0];
            s += m * row;
        }
    return s;
}

double GridField::inner(const GridField& other) const {
    if (!(*grid == *other.grid)) throw ConfigError("grid fields live on different grids");
    double s = 0;
    for (int i2 = 0; i2 < grid->n[2]; ++i2)
        for (int i1 = 0; i1 < grid->n[1]; ++i1) {
            const double m = grid->node_volume(i1);
            const std::size_t b = grid->index(0, i1, i2);
            double row = 0;
            for (int i0 = 0; i0 < grid->n[0]; ++i0) row += values[b + i0] * other.values[b + i0];
            s += m * row;
        }
    return s;
}

double GridField::norm() const { return std::sqrt(inner(*this)); }

//-------------------------------------------------------------------------

void stiffness_apply(const CartesianGrid& g, const double* x, double* y) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    if (g.geometry == Geometry::axisymmetric) {
        const double h = g.h;
        for (int j = 0; j < n1; ++j) {
            const double a = 2 * pi * (j + 0.5) * h;
            const double bp = 2 * pi * (j + 1) * h;
            const double bm = 2 * pi * j * h;
            const double* xc = x + g.index(0, j);
            const double* xu = j + 1 < n1 ? x + g.index(0, j + 1) : nullptr;
            const double* xd = j > 0 ? x + g.index(0, j - 1) : nullptr;
            double* yc = y + g.index(0, j);
            for (int k = 0; k < n0; ++k) {
                const double l = k > 0 ? xc[k - 1] : 0.0;
                const double r = k + 1 < n0 ? xc[k + 1] : 0.0;
                double v = a * (2 * xc[k] - l - r);
                v += bp * (xc[k] - (xu ? xu[k] : 0.0));
                if (xd) v += bm * (xc[k] - xd[k]);
                yc[k] = v;
            }
        }
        return;
    }
    const double c = std::pow(g.h, g.d - 2);
    const std::size_t s1 = n0, s2 = std::size_t(n0) * n1;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < n1; ++i1) {
            const std::size_t b = g.index(0, i1, i2);
            for (int i0 = 0; i0 < n0; ++i0) {
                const std::size_t p = b + i0;
                double v = 2 * g.d * x[p];
                if (i0 > 0) v -= x[p - 1];
                if (i0 + 1 < n0) v -= x[p + 1];
                if (g.d >= 2) {
                    if (i1 > 0) v -= x[p - s1];
                    if (i1 + 1 < n1) v -= x[p + s1];
                }
                if (g.d == 3) {
                    if (i2 > 0) v -= x[p - s2];
                    if (i2 + 1 < n2) v -= x[p + s2];
                }
                y[p] = c * v;
            }
        }
}

double stiffness_form(const CartesianGrid& g, const double* x, const double* z) {
    std::vector<double> kz(g.size());
    stiffness_apply(g, z, kz.data());
    double s = 0;
    for (std::size_t i = 0; i < kz.size(); ++i) s += x[i] * kz[i];
    return s;
}

double edge_weighted_form(const CartesianGrid& g, const double* psi, const double* f) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    auto edge = [&](std::size_t a, std::size_t b, double c) {
        const double df = f[a] - f[b];
        return c * psi[a] * psi[b] * df * df;
    };
    double s = 0;
    if (g.geometry == Geometry::axisymmetric) {
        for (int j = 0; j < n1; ++j) {
            const double a = 2 * pi * (j + 0.5) * g.h, bp = 2 * pi * (j + 1) * g.h;
            const std::size_t base = g.index(0, j);
            for (int k = 0; k < n0; ++k) {
                if (k + 1 < n0) s += edge(base + k, base + k + 1, a);
                if (j + 1 < n1) s += edge(base + k, base + n0 + k, bp);
            }
        }
        return s;
    }
    const double c = std::pow(g.h, g.d - 2);
    const std::size_t s1 = n0, s2 = std::size_t(n0) * n1;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i0 = 0; i0 < n0; ++i0) {
                const std::size_t p = g.index(i0, i1, i2);
                if (i0 + 1 < n0) s += edge(p, p + 1, c);
                if (i1 + 1 < n1) s += edge(p, p + s1, c);
                if (g.d == 3 && i2 + 1 < n2) s += edge(p, p + s2, c);
            }
    return s;
}

GridField laplacian_apply(const GridField& field) {
    const CartesianGrid& g = *field.grid;
    std::vector<double> y(g.size());
    stiffness_apply(g, field.values.data(), y.data());
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
            const double inv = 1.0 / g.node_volume(i1);
            double* row = y.data() + g.index(0, i1, i2);
            for (int i0 = 0; i0 < g.n[0]; ++i0) row[i0] *= inv;
        }
    return GridField(field.grid, std::move(y), field.parity);
}

double sobolev_norm(const GridField& field, double s) {
    if (!(s >= 0.0 && s <= 2.0)) throw ConfigError("Sobolev index must lie in [0,2]");
    const CartesianGrid& g = *field.grid;
    if (g.geometry == Geometry::axisymmetric) {
        const double l2 = field.inner(field);
        if (s == 0.0) return std::sqrt(l2);
        const double k = stiffness_form(g, field.values.data(), field.values.data());
        if (s == 1.0) return std::sqrt(l2 + k);
        if (s == 2.0) {
            const double lap = laplacian_apply(field).norm();
            return std::sqrt(l2 + 2 * k + lap * lap);
        }
        throw ConfigError("axisymmetric grids support Sobolev index 0, 1 or 2 only");
    }
    const int axes = g.axes();
    std::vector<int> dims(g.n.begin(), g.n.begin() + axes);
    std::vector<double> c = field.values;
    detail::dst_nd(dims, c);
    double scale = 1;
    for (int a = 0; a < axes; ++a) scale /= 2.0 * (g.n[a] + 1);
    double sum = 0;
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i0 = 0; i0 < g.n[0]; ++i0) {
                const int idx[3] = {i0, i1, i2};
                double k2 = 0;
                for (int a = 0; a < axes; ++a) {
                    const double k = (idx[a] + 1) * pi / ((g.n[a] + 1) * g.h);
                    k2 += k * k;
                }
                const double v = c[g.index(i0, i1, i2)];
                sum += std::pow(1 + k2, s) * v * v;
            }
    return std::sqrt(std::pow(g.h, g.d) * sum * scale);
}

void reflect(const CartesianGrid& g, const double* x, double* y) {
    const int n0 = g.n[0];
    for (std::size_t b = 0; b < g.size(); b += n0)
        for (int i0 = 0; i0 < n0; ++i0) y[b + n0 - 1 - i0] = x[b + i0];
}

void project_parity(const CartesianGrid& g, Parity p, double* x) {
    if (p == Parity::none) return;
    const int n0 = g.n[0];
    const double sign = p == Parity::even ? 1.0 : -1.0;
    for (std::size_t b = 0; b < g.size(); b += n0) {
        for (int i0 = 0; i0 < n0 / 2; ++i0) {
            const double a = 0.5 * (x[b + i0] + sign * x[b + n0 - 1 - i0]);
            x[b + i0] = a;
            x[b + n0 - 1 - i0] = sign * a;
        }
        if (p == Parity::odd) x[b + n0 / 2] = 0.0;
    }
}

GridField reflect(const GridField& f) {
    std::vector<double> y(f.values.size());
    reflect(*f.grid, f.values.data(), y.data());
    return GridField(f.grid, std::move(y), f.parity);
}

GridField project(const GridField& f, Parity p) {
    GridField out = f;
    project_parity(*f.grid, p, out.values.data());
    out.parity = p;
    return out;
}

std::vector<double> shift_axis0(const CartesianGrid& g, const std::vector<double>& x, int cells) {
    const int n0 = g.n[0];
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t b = 0; b < g.size(); b += n0)
        for (int i0 = 0; i0 < n0; ++i0) {
            const int src = i0 - cells;
            if (src >= 0 && src < n0) y[b + i0] = x[b + src];
        }
    return y;
}

} // namespace hartree
