#pragma once
// Monoatomic Hartree problem on a radial grid.

#include "hartree/grids.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hartree {

class RadialCoulomb;

struct SCFSettings {
    double mixing = 0.5;
    double tol_residual = 1e-9;
    double tol_energy = 1e-12;
    int max_iter = 400;
    double eigensolver_tol = 1e-12;

    void validate() const;
};

// Finite-volume pencil on a radial grid: stiffness K (faces), lumped mass M.
// Unknowns are nodes 0..n-2; node n-1 carries the Dirichlet zero.
class RadialOperator {
public:
    explicit RadialOperator(std::shared_ptr<const RadialGrid> grid);

    const RadialGrid& grid() const { return *grid_; }
    const std::vector<double>& faces() const { return c_; }

    // x.Kx over all nodes (the last node value enters through the last face).
    double stiffness_form(const std::vector<double>& x) const;
    // y = M^{-1}(K x) + V x - lambda x, zero at the Dirichlet node.
    std::vector<double> residual(const std::vector<double>& x, const std::vector<double>& V, double lambda) const;
    // Solves (K + M V - sigma M) x = M f without pivoting.
    std::vector<double> solve_shifted(const std::vector<double>& V, double sigma, const std::vector<double>& f) const;
    // Number of eigenvalues of (K + M V, M) below sigma.
    int count_below(const std::vector<double>& V, double sigma) const;
    // M-weighted L2 norm.
    double norm(const std::vector<double>& x) const;

private:
    std::shared_ptr<const RadialGrid> grid_;
    std::vector<double> c_;
};

struct RadialEigenpair {
    double value = 0;
    std::vector<double> vector; // positive, M-normalized, zero at r_max
    double residual = 0;
};

// Lowest eigenpair of -Delta + V by Sturm bisection and inverse iteration.
RadialEigenpair lowest_radial_eigenpair(const RadialOperator& op, const std::vector<double>& V, double tol = 1e-12);

struct MonoatomicSolution {
    ModelParams params;
    RadialFunction u;
    double mu = 0;
    double energy_I = 0;
    double coulomb_D = 0; // D(|u|^2, |u|^2) times the coupling
    double kinetic = 0;
    double m1 = 0;
    double m2 = 0;
    RadialFunction vmf;   // -1/r + coupling |u|^2 * |.|^{-1}
    RadialFunction hartree; // coupling |u|^2 * |.|^{-1}
    double residual = 0;
    int iterations = 0;
    std::vector<double> residual_history;
    std::vector<double> energy_history;
    std::vector<std::string> warnings;
};

MonoatomicSolution solve_monoatomic(const ModelParams& params, std::shared_ptr<const RadialGrid> grid,
                                    const SCFSettings& settings = {});

// E(v) = int |grad v|^2 - int v^2/|x| + coupling D(v^2, v^2).
double energy_functional(const RadialFunction& v, const ModelParams& params);
// Same, with the Coulomb operator of v's grid already built.
double energy_functional(const RadialFunction& v, const ModelParams& params, const RadialCoulomb& coulomb);

struct TailReport {
    int d = 2;
    std::vector<double> radii;
    std::vector<double> values;      // V^MF(r)
    std::vector<double> predicted;   // m1/(4r^3) + 9 m2/(64 r^5) (d = 2), 0 (d = 3)
    std::vector<double> scaled;      // |V^MF - predicted| r^7 (d = 2)
    double max_scaled = 0;           // d = 2
    double max_value = 0;            // d = 3
    double min_value = 0;            // d = 3
    double envelope_constant = 0;    // d = 3: max of -V^MF e^{0.9 sqrt|mu| r}
};

TailReport mean_field_tail(const MonoatomicSolution& sol, const std::vector<double>& radii);
// Same report for an arbitrary mean-field profile with given moments.
TailReport mean_field_tail(const RadialFunction& vmf, double m1, double m2, double mu, const std::vector<double>& radii);

struct DecayFit {
    double rate = 0;
    double power = 0;
    double intercept = 0;
    double residual = 0;
    std::size_t count = 0;
};

// log u = a - rate r - power log r over the nodes in [r_lo, r_hi].
DecayFit fit_decay(const RadialFunction& u, double r_lo, double r_hi);
DecayFit fit_decay(const MonoatomicSolution& sol, double r_lo, double r_hi);

// Default decay window: where u lies between 1e-3 and 1e-11 of its peak.
std::pair<double, double> default_decay_window(const RadialFunction& u);

} // namespace hartree
