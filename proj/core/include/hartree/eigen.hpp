#pragma once
// Lowest eigenpairs of K + M V against M on a box, by preconditioned block
// iteration (LOBPCG) restricted to a parity sector.

#include "hartree/fast_solver.hpp"
#include "hartree/grids.hpp"

#include <cstdint>
#include <vector>

namespace hartree {

struct EigenOptions {
    int nev = 1;               // wanted pairs
    int block = 2;             // block size, >= nev
    double tol = 1e-10;        // on || M^{-1}(A x) - lambda x ||_M per wanted pair
    int max_iter = 500;
    Parity parity = Parity::none;
    std::uint64_t seed = 7;    // random fill of missing start columns
};

struct EigenResult {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors; // M-orthonormal
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;
};

// A x = K x + M diag(V) x. The preconditioner solves (K + sigma M).
class GridHamiltonian {
public:
    GridHamiltonian(std::shared_ptr<const CartesianGrid> grid, std::vector<double> potential);

    void apply(const double* x, double* y) const;
    // M^{-1} A x - lambda x, with its M-norm
    double residual_norm(const std::vector<double>& x, double lambda) const;
    double rayleigh(const std::vector<double>& x) const;
    const CartesianGrid& grid() const { return *grid_; }
    const std::vector<double>& mass() const { return mass_; }
    const std::vector<double>& potential() const { return V_; }

private:
    std::shared_ptr<const CartesianGrid> grid_;
    std::vector<double> V_;
    std::vector<double> mass_;
};

EigenResult lobpcg(const GridHamiltonian& H, const SeparableSolver& preconditioner, const EigenOptions& opt,
                   const std::vector<std::vector<double>>& guess = {});

} // namespace hartree
