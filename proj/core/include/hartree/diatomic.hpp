#pragma once
// Two-nucleus Hartree problem on a box: nuclear potential, SCF in the even
// sector, parity-sector spectra and per-L diagnostics.

#include "hartree/coulomb.hpp"
#include "hartree/eigen.hpp"
#include "hartree/grids.hpp"
#include "hartree/mono.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hartree {

struct DiatomicOptions {
    double eig_tol = 1e-10;          // sector eigensolver residual
    int eig_max_iter = 800;
    double precond_sigma = 0.0;      // 0: |mu| of the reference atom, floored at 0.05
    double margin_decay_lengths = 10.0;
    GridPotentialOptions coulomb;
    std::uint64_t seed = 7;
};

// h |V| at the node holding a nucleus. On two-axis grids it is the value for
// which the coupling-free atom on the same spacing has the exact ground
// eigenvalue -1/(d-1)^2; three-axis boxes use the cell mean. Cached per
// geometry and spacing.
double nucleus_node_factor(const CartesianGrid& g);

// -1/|x - c| with c = (offset h, 0) on the axis; the node at c carries
// -nucleus_node_factor/h.
std::vector<double> nucleus_potential(const CartesianGrid& g, int offset_cells);

// Half distance between the nuclei in cells, L snapped to 2 m h.
int snap_half_cells(const CartesianGrid& g, double L);

struct DiatomicPotential {
    double L = 0;        // snapped
    int half_cells = 0;  // x_L = (half_cells h, 0)
    GridField values;    // V_L, even
    double nuclear_repulsion = 0; // 1/L
};

// margin: required distance from each nucleus to the box edge along axis 0.
DiatomicPotential build_potential(std::shared_ptr<const CartesianGrid> grid, double L, double margin = 0.0);

// Single atom at the origin of the same box, mass 1. Serves as the reference
// for every comparison with a molecule on that box.
struct GridMonoSolution {
    ModelParams params;
    GridField u;
    std::vector<double> potential; // nuclear
    std::vector<double> hartree;   // coupling |u|^2 * |.|^{-1}
    double mu = 0;
    double energy_I = 0;
    double coulomb_D = 0;
    double kinetic = 0;
    double m1 = 0;
    double m2 = 0;
    double residual = 0;
    int iterations = 0;
    std::vector<double> residual_history;
    std::vector<std::string> flags;
};

GridMonoSolution solve_grid_mono(const ModelParams& params, std::shared_ptr<const CartesianGrid> grid,
                                 const MonoatomicSolution& mono, const SCFSettings& settings = {},
                                 const DiatomicOptions& opt = {});

struct DiatomicSolution {
    ModelParams params;
    double L = 0;
    int half_cells = 0;
    GridField u_plus;   // even, int u^2 = 2
    GridField u_minus;  // odd, int u^2 = 2, positive for x1 > 0
    double mu_plus = 0;         // SCF multiplier
    double mu_plus_resolve = 0; // even ground state of the assembled h_L
    double mu_minus = 0;
    double mu_plus_second = 0;
    double mu_minus_second = 0;
    double mu_third = 0;
    double energy_functional = 0; // E_L(u_plus) with the 1/L term
    double E_L = 0;               // per electron
    double gap = 0;               // mu_minus - mu_plus_resolve
    double gap_resolution = 0;
    double T_L = 0;
    double kinetic = 0;
    double coulomb_D = 0;
    double residual_plus = 0;
    double residual_minus = 0;
    double residual_scf = 0;
    int scf_iterations = 0;
    int eig_iterations_plus = 0;
    int eig_iterations_minus = 0;
    std::vector<double> scf_history;
    std::vector<double> potential; // V_L
    std::vector<double> hartree;   // |u_plus|^2 * |.|^{-1}
    std::vector<std::string> flags;
};

// ref: optional same-box atom whose translates give the start state; without
// it the radial mono solution is interpolated onto the box.
DiatomicSolution solve_diatomic(const ModelParams& params, std::shared_ptr<const CartesianGrid> grid,
                                const MonoatomicSolution& mono, double L, const SCFSettings& settings = {},
                                const DiatomicOptions& opt = {}, const GridMonoSolution* ref = nullptr);

// h_L assembled from the converged solution.
GridHamiltonian assemble_hamiltonian(const DiatomicSolution& sol);

// E(v) = int |grad v|^2 + int V v^2 + coupling D(v^2, v^2).
double energy_functional(const GridField& v, const ModelParams& params, const std::vector<double>& potential,
                         const GridCoulomb* coulomb = nullptr);

struct SuperpositionError {
    double s = 1;
    double plus = 0;  // || u_plus - (u_r + u_l) ||_{H^s}
    double minus = 0; // || u_minus - (u_r - u_l) ||_{H^s}
};

SuperpositionError superposition_error(const DiatomicSolution& sol, const GridMonoSolution& ref, double s);

struct InteractionIntegrals {
    double L = 0;
    double overlap = 0;             // int u_l u_r
    double D_cross_cross = 0;       // D(u_l u_r, u_l u_r)
    double D_self_cross = 0;        // D(|u_l|^2, u_l u_r)
    double gradient = 0;            // int grad u_l . grad u_r
    double product_l2 = 0;          // || u_l u_r ||_2
    double VL_cross = 0;            // int V_L u_l u_r
    double V_left_right = 0;        // int V_l |u_r|^2
    double D_left_right = 0;        // D(|u_l|^2, |u_r|^2)
    double predicted_V_left_right = 0;
    double predicted_D_left_right = 0;
};

// Integrals of the translates u_l = u(. + x_L), u_r = u(. - x_L) of the
// same-box atom. Predictions use the given moments (d = 2) or Newton (d = 3).
InteractionIntegrals interaction_integrals(const GridMonoSolution& ref, double L, double m1, double m2);

struct SubstitutionResult {
    double lhs = 0;        // <g psi, (h - lambda) g psi>
    double rhs_half = 0;   // (1/2) sum_e c_e psi_a psi_b (g_a - g_b)^2
    double rhs_full = 0;   // sum_e c_e psi_a psi_b (g_a - g_b)^2 + sum g^2 psi r
    double edge_term = 0;
    double residual_term = 0;
    double norm_gpsi2 = 0; // || g psi ||^2
    double residual = 0;   // || h psi - lambda psi ||
};

SubstitutionResult substitution_identity(const DiatomicSolution& sol, const GridField& g);

struct SubstitutionProbe {
    std::string name;
    GridField g;
};

// tanh(2 x1 / L), exp(-|x|^2 / L^2) and x1 / L on the solution's box.
std::vector<SubstitutionProbe> substitution_probes(const DiatomicSolution& sol);

struct SharperBoundReport {
    double min_ratio = 0;
    double max_ratio = 0;
    double midpoint_ratio = 0;
    double midpoint_profile = 0;
    double midpoint_value = 0;
    bool bisector_monotone = true;
    std::size_t samples = 0;
    std::vector<double> axis_x, axis_ratio, bisector_y, bisector_ratio;
};

// u_plus against sum_+- e^{-sqrt|mu| |x -+ x_L|} / (1 + |x -+ x_L|^{(d-1)/2})
// along the axis and the bisector, where u_plus > 1e-10.
SharperBoundReport sharper_bound_check(const DiatomicSolution& sol, double mu);

} // namespace hartree
