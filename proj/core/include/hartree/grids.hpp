#pragma once
// Radial grids with d-dimensional measure, uniform boxes and the
// finite-volume operators living on them.

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace hartree {

// Units: kinetic operator -Delta, unit charges.
struct ModelParams {
    int d = 3;
    double hartree_coupling = 1.0;

    void validate() const;
};

// Surface area of the unit sphere in R^d (2 pi, 4 pi).
double sphere_area(int d);

//-------------------------------------------------------------------------
// Radial grids

enum class GridScheme { uniform, graded };

// Nodes r_i = r_max (i/n)^gamma, i = 1..n, gamma = 1 (uniform) or 2 (graded).
// Weights are the trapezoid rule in t = i/n with the measure |S^{d-1}| r^{d-1}.
struct RadialGrid {
    int d = 3;
    double r_max = 0;
    GridScheme scheme = GridScheme::graded;
    int gamma = 2;
    std::vector<double> r;    // r_1 .. r_n, r_n = r_max
    std::vector<double> w;    // quadrature weights, last one halved
    std::vector<double> drdt; // r'(t_i)

    std::size_t size() const { return r.size(); }
    double dt() const { return 1.0 / static_cast<double>(r.size()); }
    double r_of_t(double t) const;
    double drdt_of_t(double t) const;
    double t_of_r(double radius) const;
};

RadialGrid make_radial_grid(double r_max, int n, int d, GridScheme scheme = GridScheme::graded);

struct RadialFunction {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;

    RadialFunction() = default;
    RadialFunction(std::shared_ptr<const RadialGrid> g, std::vector<double> v);

    double integrate() const;                 // sum_i w_i f_i
    double inner(const RadialFunction& other) const;
    double norm() const;
};

// Builds f(r_i) from a callable.
template <class F>
RadialFunction sample(std::shared_ptr<const RadialGrid> g, F&& f) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g->r[i]);
    return RadialFunction(std::move(g), std::move(v));
}

// Vertex-centred finite-volume stiffness on the radial grid: the quadratic
// form sum_i c_i (f_{i+1} - f_i)^2 approximates int |f'|^2 dx. Face i lies
// between nodes i and i+1; the last face couples node n-2 to the Dirichlet
// node n-1. The flux through t = 0 vanishes.
std::vector<double> radial_face_coefficients(const RadialGrid& g);

// Cubic interpolation in t of nodal values (even extension through r = 0).
double radial_interpolate(const RadialFunction& f, double radius);

//-------------------------------------------------------------------------
// Uniform boxes

enum class Geometry { cartesian, axisymmetric };
enum class Parity { none, even, odd };

std::string to_string(Parity p);
std::string to_string(Geometry g);

// Axis 0 is x1, the reflection axis, stored contiguously. Cartesian axes hold
// nodes -E + i h, i = 0..n-1, with zero values assumed one cell outside the
// box. The axisymmetric geometry (d = 3 only) stores the (x1, rho) half plane
// with rho_j = (j + 1/2) h and measure 2 pi rho drho dx1.
struct CartesianGrid {
    int d = 2;
    Geometry geometry = Geometry::cartesian;
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> half_extent{0, 0, 0};
    double h = 0;

    int axes() const { return geometry == Geometry::axisymmetric ? 2 : d; }
    std::size_t size() const { return std::size_t(n[0]) * n[1] * n[2]; }
    std::size_t index(int i0, int i1, int i2 = 0) const {
        return std::size_t(i0) + std::size_t(n[0]) * (std::size_t(i1) + std::size_t(n[1]) * i2);
    }
    double coord(int axis, int i) const;
    // Measure weight of the node (h^d, or 2 pi rho_j h^2).
    double node_volume(int i1) const;
    std::vector<double> mass() const;
    int center() const { return (n[0] - 1) / 2; }
    bool operator==(const CartesianGrid& o) const;
};

// Cartesian box with half extents per axis; each extent is rounded to a
// multiple of h so that every axis has an odd number of nodes and 0 is a node.
CartesianGrid make_cartesian_grid(int d, std::array<double, 3> half_extent, double h);
CartesianGrid make_cartesian_grid_points(int d, double half_extent, int points);
CartesianGrid make_axisymmetric_grid(double half_extent_axis, double rho_max, double h);

struct GridField {
    std::shared_ptr<const CartesianGrid> grid;
    std::vector<double> values;
    Parity parity = Parity::none;
    std::vector<std::string> flags;

    GridField() = default;
    GridField(std::shared_ptr<const CartesianGrid> g, std::vector<double> v, Parity p = Parity::none);

    double integrate() const;
    double inner(const GridField& other) const;
    double norm() const;
};

template <class F>
GridField sample(std::shared_ptr<const CartesianGrid> g, F&& f, Parity p = Parity::none) {
    std::vector<double> v(g->size());
    std::array<double, 3> x{0, 0, 0};
    for (int i2 = 0; i2 < g->n[2]; ++i2)
        for (int i1 = 0; i1 < g->n[1]; ++i1)
            for (int i0 = 0; i0 < g->n[0]; ++i0) {
                x[0] = g->coord(0, i0);
                x[1] = g->n[1] > 1 || g->axes() > 1 ? g->coord(1, i1) : 0.0;
                x[2] = g->axes() > 2 ? g->coord(2, i2) : 0.0;
                v[g->index(i0, i1, i2)] = f(x);
            }
    return GridField(std::move(g), std::move(v), p);
}

// Finite-volume stiffness y = K x (the form x.Kx approximates int |grad x|^2).
void stiffness_apply(const CartesianGrid& g, const double* x, double* y);
double stiffness_form(const CartesianGrid& g, const double* x, const double* z);

// sum over interior edges c_e psi_a psi_b (f_a - f_b)^2, with c_e the
// stiffness coefficient of the edge.
double edge_weighted_form(const CartesianGrid& g, const double* psi, const double* f);

// Second-order -Delta with zero values outside the box (M^{-1} K).
GridField laplacian_apply(const GridField& field);

// Spectral H^s norm on the box, normalized so that s = 0 gives the L2 norm.
// Axisymmetric grids support s in {0, 1, 2} through the finite-volume forms.
double sobolev_norm(const GridField& field, double s);

// Reflection x1 -> -x1 and the parity projectors (1 +- R)/2.
void reflect(const CartesianGrid& g, const double* x, double* y);
void project_parity(const CartesianGrid& g, Parity p, double* x);
GridField reflect(const GridField& f);
GridField project(const GridField& f, Parity p);

// Shift by an integer number of cells along axis 0, zero filled.
std::vector<double> shift_axis0(const CartesianGrid& g, const std::vector<double>& x, int cells);

} // namespace hartree
