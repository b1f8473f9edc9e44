#pragma once
// Coulomb kernels: radial potentials, box potentials, D(rho, sigma).

#include "hartree/grids.hpp"

#include <memory>
#include <vector>

namespace hartree {

// Complete elliptic integral of the first kind, K(k) in the modulus
// convention, by the arithmetic-geometric mean.
double elliptic_k(double k);
// Same, parametrized by the complementary modulus k' = sqrt(1 - k^2).
double elliptic_k_from_complement(double kp);

// Angular integral int_0^{2 pi} dtheta / |r e_1 - s e(theta)| = 4 K(k) / (r + s)
// with k = 2 sqrt(r s) / (r + s).
double ring_kernel(double r, double s);

// h times the value of 1/|x| at the node holding a nucleus: the cell mean for
// the cube (d = 3) and the axis ring cell of the half-plane grid; on the square
// the cell mean plus the lattice sum of the midpoint defects.
double singular_cell_factor(const CartesianGrid& g);

struct CoulombEnergy {
    double value = 0;
};

// rho -> rho * |.|^{-1} at the nodes of a radial grid. d = 3 uses Newton's
// formula; d = 2 adds the elliptic ring-kernel remainder to the same split,
// integrated panel by panel with the log singularity resolved.
class RadialCoulomb {
public:
    explicit RadialCoulomb(std::shared_ptr<const RadialGrid> grid, std::size_t dense_limit = 4096);

    std::vector<double> apply(const std::vector<double>& rho) const;
    // Potential at an arbitrary radius, full kernel by panel quadrature.
    double potential_at(const std::vector<double>& rho, double r) const;
    const RadialGrid& grid() const { return *grid_; }

private:
    void remainder_row(double r, double* row) const;
    std::shared_ptr<const RadialGrid> grid_;
    bool dense_ = false;
    std::vector<double> rem_; // row-major n x n remainder weights (d = 2)
};

RadialFunction radial_potential(const RadialFunction& rho, int d);
double radial_potential_at(const RadialFunction& rho, int d, double r);

struct GridPotentialOptions {
    bool analytic_transform = false; // 2 pi/|k| or 4 pi/|k|^2 instead of sampled kernel
    double padding_tolerance = 1e-8; // boundary mass fraction raising a flag
    int multipole_order = 24;        // axisymmetric boundary data
};

// Reusable potential operator on a box. Cartesian grids use a zero-padded FFT
// convolution on the doubled box with the sampled kernel; the axisymmetric
// half plane solves -Delta V = 4 pi rho with multipole boundary values.
class GridCoulomb {
public:
    explicit GridCoulomb(std::shared_ptr<const CartesianGrid> grid, GridPotentialOptions opt = {});
    ~GridCoulomb();
    GridCoulomb(GridCoulomb&&) noexcept;
    GridCoulomb& operator=(GridCoulomb&&) noexcept;

    std::vector<double> apply(const std::vector<double>& rho) const;
    // Fraction of |rho| mass on the outermost node layer.
    double boundary_mass_fraction(const std::vector<double>& rho) const;
    const CartesianGrid& grid() const { return *grid_; }
    const GridPotentialOptions& options() const { return opt_; }

private:
    struct Impl;
    std::shared_ptr<const CartesianGrid> grid_;
    GridPotentialOptions opt_;
    std::unique_ptr<Impl> impl_;
};

GridField grid_potential(const GridField& rho, GridPotentialOptions opt = {});

CoulombEnergy coulomb_energy(const GridField& rho, const GridField& sigma);
CoulombEnergy coulomb_energy(const RadialFunction& rho, const RadialFunction& sigma);
// 1/2 <rho, W> for a potential W already computed from the other density.
double coulomb_pairing(const CartesianGrid& g, const std::vector<double>& rho,
                       const std::vector<double>& potential);

bool cauchy_schwarz_check(const GridField& rho, const GridField& sigma, double tol = 1e-12);
bool cauchy_schwarz_check(const RadialFunction& rho, const RadialFunction& sigma, double tol = 1e-12);

} // namespace hartree
