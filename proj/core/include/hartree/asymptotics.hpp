#pragma once
// L sweeps of the two-center problem, the asymptotic fits run over them and
// the JSON/CSV report contract.

#include "hartree/diatomic.hpp"

#include <map>
#include <string>
#include <vector>

namespace hartree {

// Box shared by every L of a sweep. d = 3 uses the axisymmetric half plane
// (half_extent[1] is rho_max).
struct GridSpec {
    int d = 2;
    Geometry geometry = Geometry::cartesian;
    std::array<double, 3> half_extent{32, 32, 32};
    double h = 0.25;

    CartesianGrid make() const;
    GridSpec with_spacing(double spacing) const;
    GridSpec with_axis_extent(double half_axis) const;
    void validate() const;
};

struct SweepOptions {
    double radial_rmax = 60;
    int radial_n = 1000;
    int jobs = 1;
    // Second resolution for the error floor at the largest L; 0 picks 4h/3,
    // a negative value skips the floor solve.
    double floor_h = 0;
    bool interactions = true;
    DiatomicOptions diatomic;
};

struct MonoSummary {
    double mu = 0, I = 0, m1 = 0, m2 = 0; // radial atom
    double decay_rate = 0, decay_power = 0;
    double grid_mu = 0, grid_I = 0, grid_m1 = 0, grid_m2 = 0, grid_residual = 0; // same-box atom
    bool has_grid = false;
    // Same-mesh reference for differences with the molecule.
    double ref_mu() const { return has_grid ? grid_mu : mu; }
    double ref_I() const { return has_grid ? grid_I : I; }
};

struct SweepRow {
    double L_requested = 0;
    double L = 0;
    bool failed = false;
    std::string error;
    double mu_plus = 0, mu_plus_resolve = 0, mu_minus = 0;
    double mu_plus_second = 0, mu_minus_second = 0, mu_third = 0;
    double gap = 0, gap_resolution = 0, T_L = 0;
    double E_L = 0, energy_functional = 0, kinetic = 0, coulomb_D = 0;
    double sup_err_plus = 0, sup_err_minus = 0;       // H^1
    double sup_err_plus_l2 = 0, sup_err_minus_l2 = 0; // L^2
    double residual_plus = 0, residual_minus = 0, residual_scf = 0;
    int scf_iterations = 0;
    bool has_integrals = false;
    InteractionIntegrals integrals;
    std::vector<std::string> flags;
    double seconds = 0;

    bool has_flag(const std::string& f) const;
};

// |(q_h) - (q_h2)| at the largest solved L for the same-mesh differences.
struct FloorEstimate {
    bool available = false;
    double L = 0, h = 0, h_second = 0;
    double energy = 0;   // E_L - I
    double mu_plus = 0;  // mu_L^+ - mu
    double mu_minus = 0; // mu_L^- - mu
    double gap = 0;
    std::string note;
};

struct Exclusion {
    double L = 0;
    std::string reason;
};

struct FitRecord {
    std::string name;
    bool available = false;
    std::string message;
    double slope = 0, intercept = 0, residual = 0;
    double window_lo = 0, window_hi = 0;
    std::vector<double> used;
    std::vector<Exclusion> excluded;
    std::map<std::string, double> values;
};

struct SweepReport {
    ModelParams params;
    GridSpec grid;
    std::vector<SweepRow> rows; // sorted by L
    MonoSummary mono;
    FloorEstimate floor;
    std::vector<FitRecord> fits;
    std::vector<std::string> notes;

    const FitRecord* fit(const std::string& name) const;
};

// Solves the radial atom, the same-box atom and one molecule per L. Rows that
// throw are marked failed; the sweep only throws when every row failed.
SweepReport run_sweep(const ModelParams& params, const GridSpec& grid, const std::vector<double>& L_list,
                      const SCFSettings& settings = {}, const SweepOptions& opt = {});
// Same, with the radial atom already solved.
SweepReport run_sweep(const ModelParams& params, const GridSpec& grid, const std::vector<double>& L_list,
                      const MonoatomicSolution& mono, const SCFSettings& settings = {},
                      const SweepOptions& opt = {});

struct GapWindow {
    double min_gap = 1e-8;
    double max_gap = 1e-2;
};

struct GapFit {
    double rate = 0;
    double power = 0;
    double intercept = 0;
    FitRecord record;
};

// log gap = a - rate L - power log L over resolved rows inside the window.
GapFit fit_gap_decay(const SweepReport& report, const GapWindow& window = {});

struct EnergyFit {
    double last_value = 0; // (E_L - I) L^5 at the largest row of the window
    double last_L = 0;
    double trend_slope = 0;     // (E_L - I) L^5 = a + b / L
    double trend_intercept = 0;
    double target = 0;          // (3 m1 / 4)^2
    FitRecord record;
};

EnergyFit fit_energy_coefficient(const SweepReport& report, double floor_factor = 100.0);

struct MultiplierFit {
    double slope_plus = 0;
    double slope_minus = 0;
    FitRecord plus, minus;
};

// Rows enter when |mu_L - mu| exceeds floor_factor times the floor and the
// gap is below contamination times |mu_L - mu|.
MultiplierFit fit_multiplier_rate(const SweepReport& report, double floor_factor = 10.0,
                                  double contamination = 0.1);

struct TunnelingColumn {
    std::string quantity;
    std::string envelope;
    std::vector<double> ratios;
    double variation = 0; // max |ratio| / min |ratio|
};

struct TunnelingTable {
    double kappa = 0;
    std::vector<double> L;
    std::vector<TunnelingColumn> columns;
    std::vector<TunnelingColumn> remainders; // far-field expansion remainders, informational
};

TunnelingTable tunneling_table(const SweepReport& report);

// Runs every fit that applies and stores the records in report.fits. Fewer
// than four usable rows leave the list empty.
void run_fits(SweepReport& report, const GapWindow& window = {});

std::string to_json(const SweepReport& report, int indent = 2);
SweepReport sweep_from_json(const std::string& text);
// One row per L after a '#' comment documenting the columns and a plain
// header line.
std::string to_csv(const SweepReport& report);
const std::vector<std::string>& csv_columns();

} // namespace hartree
