// hartree: monoatomic, diatomic, sweep and check runs with JSON/CSV output.

#include "hartree/asymptotics.hpp"
#include "hartree/checks.hpp"
#include "hartree/diatomic.hpp"
#include "hartree/error.hpp"
#include "hartree/mono.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#ifndef HARTREE_VERSION
#define HARTREE_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hartree;

namespace {

struct Config {
    int dim = 0;
    double coupling = 1.0;
    double rmax = 0;  // 0: 60 (d = 2), 120 (d = 3)
    int n = 0;        // 0: 1000 (d = 2), 2000 (d = 3)
    std::vector<double> box;  // half extents; empty: sized from L and the decay length
    int points = 0;           // nodes across axis 0; overrides --spacing
    double spacing = 0;       // 0: 0.25 (d = 2), 0.5 (d = 3)
    double L = 8;
    std::vector<double> L_list;
    double tol = 1e-9;
    double mixing = 0.5;
    int jobs = 0;
    std::string out = "out";
    std::string run;
    std::uint64_t seed = 20240601;
    double floor_h = 0;
    bool fields = false;
    int trials = 200;
    double amplitude = 0.2;
    std::string suite = "all";
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

void write_text(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

double default_rmax(const Config& c) { return c.rmax > 0 ? c.rmax : (c.dim == 2 ? 60.0 : 120.0); }
int default_n(const Config& c) { return c.n > 0 ? c.n : (c.dim == 2 ? 1000 : 2000); }
double default_spacing(const Config& c) { return c.spacing > 0 ? c.spacing : (c.dim == 2 ? 0.25 : 0.5); }

void validate(const Config& c) {
    if (c.dim != 2 && c.dim != 3) throw ConfigError("--dim must be 2 or 3");
    if (!(c.coupling >= 0)) throw ConfigError("--coupling must be non-negative");
    if (c.rmax < 0 || c.n < 0 || c.points < 0 || c.spacing < 0) throw ConfigError("grid sizes must be positive");
    if (c.rmax > 0 && c.rmax < 5) throw ConfigError("--rmax below 5");
    if (c.n > 0 && c.n < 50) throw ConfigError("--n below 50");
    if (c.box.size() > 3) throw ConfigError("--box takes at most three half extents");
    for (double b : c.box)
        if (!(b > 0)) throw ConfigError("--box half extents must be positive");
    if (!(c.tol > 0)) throw ConfigError("--tol must be positive");
    if (!(c.mixing > 0 && c.mixing <= 1)) throw ConfigError("--mixing must lie in (0,1]");
    if (c.jobs < 0) throw ConfigError("--jobs must be non-negative");
    if (c.out.empty()) throw ConfigError("--out is empty");
}

SCFSettings scf_settings(const Config& c) {
    SCFSettings s;
    s.tol_residual = c.tol;
    s.mixing = c.mixing;
    s.validate();
    return s;
}

ModelParams model(const Config& c) {
    ModelParams p;
    p.d = c.dim;
    p.hartree_coupling = c.coupling;
    p.validate();
    return p;
}

MonoatomicSolution solve_mono(const Config& c) {
    const auto rg = std::make_shared<const RadialGrid>(make_radial_grid(default_rmax(c), default_n(c), c.dim));
    return solve_monoatomic(model(c), rg, scf_settings(c));
}

// Box for a largest distance L_max: the decay margin of the nuclei plus one
// cell, unless --box is given.
GridSpec grid_spec(const Config& c, double L_max, const MonoatomicSolution& mono) {
    GridSpec g;
    g.d = c.dim;
    g.geometry = c.dim == 3 ? Geometry::axisymmetric : Geometry::cartesian;
    g.h = default_spacing(c);
    const double margin = DiatomicOptions{}.margin_decay_lengths / std::sqrt(std::abs(mono.mu));
    if (c.box.empty()) {
        g.half_extent = {L_max / 2 + margin + g.h, margin + g.h, margin + g.h};
    } else {
        g.half_extent = {c.box[0], c.box.size() > 1 ? c.box[1] : c.box[0],
                         c.box.size() > 2 ? c.box[2] : (c.box.size() > 1 ? c.box[1] : c.box[0])};
    }
    if (c.points > 0) g.h = 2 * g.half_extent[0] / (c.points - 1);
    for (double& e : g.half_extent) e = std::ceil(e / g.h - 1e-9) * g.h;
    g.validate();
    return g;
}

json grid_json(const GridSpec& g) {
    return json{{"d", g.d},
                {"geometry", to_string(g.geometry)},
                {"half_extent", {g.half_extent[0], g.half_extent[1], g.half_extent[2]}},
                {"h", g.h}};
}

std::vector<double> tail_radii(const MonoatomicSolution& m) {
    std::vector<double> r;
    const double rmax = m.u.grid->r_max;
    for (double x = 5; x <= 0.75 * rmax + 1e-9; x += 5) r.push_back(x);
    return r;
}

json mono_json(const MonoatomicSolution& m, const SCFSettings& s) {
    const RadialGrid& g = *m.u.grid;
    json j;
    j["params"] = {{"d", m.params.d}, {"hartree_coupling", m.params.hartree_coupling}};
    j["grid"] = {{"r_max", g.r_max}, {"n", g.size()}, {"scheme", "graded"}};
    j["scf"] = {{"tol_residual", s.tol_residual},
                {"mixing", s.mixing},
                {"iterations", m.iterations},
                {"residual", num(m.residual)},
                {"residual_history", numbers(m.residual_history)}};
    j["mu"] = num(m.mu);
    j["I"] = num(m.energy_I);
    j["coulomb_D"] = num(m.coulomb_D);
    j["kinetic"] = num(m.kinetic);
    j["m1"] = num(m.m1);
    j["m2"] = num(m.m2);
    j["sqrt_abs_mu"] = num(std::sqrt(std::abs(m.mu)));
    j["energy_coefficient_target"] = num(std::pow(0.75 * m.m1, 2));
    try {
        const auto [lo, hi] = default_decay_window(m.u);
        const auto f = fit_decay(m, lo, hi);
        j["decay"] = {{"rate", num(f.rate)},
                      {"power", num(f.power)},
                      {"intercept", num(f.intercept)},
                      {"residual", num(f.residual)},
                      {"window", {lo, hi}},
                      {"target_rate", num(std::sqrt(std::abs(m.mu)))},
                      {"target_power", 0.5 * (m.params.d - 1)}};
    } catch (const std::exception& e) {
        j["decay"] = {{"error", e.what()}};
    }
    const auto radii = tail_radii(m);
    if (!radii.empty()) {
        const auto t = mean_field_tail(m, radii);
        json tail{{"radii", numbers(t.radii)}, {"values", numbers(t.values)}};
        if (t.d == 2) {
            tail["predicted"] = numbers(t.predicted);
            tail["scaled_remainder"] = numbers(t.scaled);
            tail["max_scaled_remainder"] = num(t.max_scaled);
        } else {
            tail["max_value"] = num(t.max_value);
            tail["min_value"] = num(t.min_value);
            tail["envelope_constant"] = num(t.envelope_constant);
        }
        j["tail"] = tail;
    }
    j["warnings"] = m.warnings;
    return j;
}

std::string mono_csv(const MonoatomicSolution& m) {
    std::ostringstream s;
    s << "# d=" << m.params.d << " coupling=" << m.params.hartree_coupling << " mu=" << m.mu
      << " columns: r, u (int u^2 = 1), V^MF, coupling |u|^2 * |.|^-1\n";
    s << "r,u,vmf,hartree\n";
    char buf[128];
    const auto& g = *m.u.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", g.r[i], m.u.values[i], m.vmf.values[i],
                      m.hartree.values[i]);
        s << buf;
    }
    return s.str();
}

std::string field_csv(const GridField& f, const std::string& name) {
    const CartesianGrid& g = *f.grid;
    std::ostringstream s;
    const bool axi = g.geometry == Geometry::axisymmetric;
    s << "# " << name << " on " << to_string(g.geometry) << " box, h=" << g.h << "\n";
    s << (axi ? "x1,rho," : (g.d == 2 ? "x1,x2," : "x1,x2,x3,")) << "value\n";
    char buf[160];
    for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i0 = 0; i0 < g.n[0]; ++i0) {
                const double v = f.values[g.index(i0, i1, i2)];
                if (g.axes() == 3)
                    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.17g\n", g.coord(0, i0), g.coord(1, i1),
                                  g.coord(2, i2), v);
                else
                    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g\n", g.coord(0, i0), g.coord(1, i1), v);
                s << buf;
            }
    return s.str();
}

std::string ini_list(const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(17);
    s << '[';
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    s << ']';
    return s.str();
}

// The [command] section that reproduces this run through --config.
std::string resolved_ini(const Config& c, const std::string& command) {
    std::ostringstream s;
    s.precision(17);
    s << "[" << command << "]\n";
    s << "dim=" << c.dim << "\ncoupling=" << c.coupling << "\nrmax=" << default_rmax(c) << "\nn=" << default_n(c)
      << "\ntol=" << c.tol << "\nmixing=" << c.mixing << "\njobs=" << c.jobs << "\nout=\"" << c.out << "\""
      << "\nrun=\"" << c.run << "\"\nseed=" << c.seed << "\n";
    if (command == "diatomic" || command == "sweep") {
        if (!c.box.empty()) s << "box=" << ini_list(c.box) << "\n";
        if (c.points > 0) s << "points=" << c.points << "\n";
        s << "spacing=" << default_spacing(c) << "\n";
    }
    if (command == "diatomic") s << "L=" << c.L << "\nfields=" << (c.fields ? "true" : "false") << "\n";
    if (command == "sweep") s << "L-list=" << ini_list(c.L_list) << "\nfloor-h=" << c.floor_h << "\n";
    if (command == "check")
        s << "suite=\"" << c.suite << "\"\ntrials=" << c.trials << "\namplitude=" << c.amplitude << "\n";
    return s.str();
}

struct RunDir {
    fs::path path;
    json manifest;
};

RunDir open_run(const Config& c, const std::string& command) {
    const std::string resolved_config = resolved_ini(c, command);
    RunDir r;
    r.path = fs::path(c.out) / (c.run.empty() ? command : c.run);
    fs::create_directories(r.path);
    r.manifest["command"] = command;
    r.manifest["version"] = HARTREE_VERSION;
    r.manifest["seed"] = c.seed;
    r.manifest["config"] = {{"dim", c.dim},
                            {"coupling", c.coupling},
                            {"rmax", default_rmax(c)},
                            {"n", default_n(c)},
                            {"box", c.box},
                            {"points", c.points},
                            {"spacing", default_spacing(c)},
                            {"L", c.L},
                            {"L_list", c.L_list},
                            {"tol", c.tol},
                            {"mixing", c.mixing},
                            {"jobs", c.jobs},
                            {"out", c.out},
                            {"run", c.run},
                            {"seed", c.seed},
                            {"floor_h", c.floor_h},
                            {"fields", c.fields},
                            {"trials", c.trials},
                            {"amplitude", c.amplitude},
                            {"suite", c.suite}};
    r.manifest["config_ini"] = resolved_config;
    write_text(r.path / "run.ini", resolved_config);
    return r;
}

void close_run(RunDir& r, double seconds) {
    r.manifest["seconds"] = seconds;
    write_text(r.path / "run-manifest.json", r.manifest.dump(2));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

//-------------------------------------------------------------------------

int cmd_mono(const Config& c) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(c);
    auto run = open_run(c, "mono");
    const auto s = scf_settings(c);
    const auto m = solve_mono(c);
    write_text(run.path / "mono.json", mono_json(m, s).dump(2));
    write_text(run.path / "mono.csv", mono_csv(m));
    std::printf("mu = %.12f  I = %.12f  m1 = %.8f  m2 = %.6f  residual = %.2e  iterations = %d\n", m.mu,
                m.energy_I, m.m1, m.m2, m.residual, m.iterations);
    close_run(run, seconds_since(t0));
    return 0;
}

int cmd_diatomic(const Config& c) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(c);
    if (!(c.L > 0)) throw ConfigError("--L must be positive");
    auto run = open_run(c, "diatomic");
    const auto s = scf_settings(c);
    const auto mono = solve_mono(c);
    write_text(run.path / "mono.json", mono_json(mono, s).dump(2));
    const auto spec = grid_spec(c, c.L, mono);
    run.manifest["grid"] = grid_json(spec);
    const auto grid = std::make_shared<const CartesianGrid>(spec.make());
    DiatomicOptions opt;
    opt.seed = c.seed;
    const auto ref = solve_grid_mono(model(c), grid, mono, s, opt);
    const auto sol = solve_diatomic(model(c), grid, mono, c.L, s, opt, &ref);

    json j;
    j["params"] = {{"d", c.dim}, {"hartree_coupling", c.coupling}};
    j["grid"] = grid_json(spec);
    j["L_requested"] = c.L;
    j["L"] = sol.L;
    j["half_cells"] = sol.half_cells;
    for (auto [k, v] : std::initializer_list<std::pair<const char*, double>>{
             {"mu_plus", sol.mu_plus},
             {"mu_plus_resolve", sol.mu_plus_resolve},
             {"mu_minus", sol.mu_minus},
             {"mu_plus_second", sol.mu_plus_second},
             {"mu_minus_second", sol.mu_minus_second},
             {"mu_third", sol.mu_third},
             {"gap", sol.gap},
             {"gap_resolution", sol.gap_resolution},
             {"T_L", sol.T_L},
             {"E_L", sol.E_L},
             {"energy_functional", sol.energy_functional},
             {"kinetic", sol.kinetic},
             {"coulomb_D", sol.coulomb_D},
             {"residual_plus", sol.residual_plus},
             {"residual_minus", sol.residual_minus},
             {"residual_scf", sol.residual_scf}})
        j[k] = num(v);
    j["scf_iterations"] = sol.scf_iterations;
    j["flags"] = sol.flags;
    j["reference"] = {{"mu", num(ref.mu)}, {"I", num(ref.energy_I)}, {"m1", num(ref.m1)}, {"m2", num(ref.m2)},
                      {"radial_mu", num(mono.mu)}, {"radial_I", num(mono.energy_I)}};
    j["E_L_minus_I"] = num(sol.E_L - ref.energy_I);
    for (double sv : {0.0, 1.0}) {
        const auto e = superposition_error(sol, ref, sv);
        j[sv == 0 ? "superposition_l2" : "superposition_h1"] = {{"plus", num(e.plus)}, {"minus", num(e.minus)}};
    }
    json subs = json::array();
    for (const auto& p : substitution_probes(sol)) {
        const auto r = substitution_identity(sol, p.g);
        subs.push_back({{"g", p.name},
                        {"lhs", num(r.lhs)},
                        {"rhs_half", num(r.rhs_half)},
                        {"rhs_full", num(r.rhs_full)},
                        {"edge_term", num(r.edge_term)},
                        {"residual_term", num(r.residual_term)},
                        {"norm_gpsi2", num(r.norm_gpsi2)},
                        {"residual", num(r.residual)}});
    }
    j["substitution"] = subs;
    const auto sb = sharper_bound_check(sol, ref.mu);
    j["sharper_bound"] = {{"min_ratio", num(sb.min_ratio)},
                          {"max_ratio", num(sb.max_ratio)},
                          {"midpoint_ratio", num(sb.midpoint_ratio)},
                          {"bisector_monotone", sb.bisector_monotone},
                          {"samples", sb.samples}};
    write_text(run.path / "diatomic.json", j.dump(2));
    if (c.fields) {
        write_text(run.path / "fields" / "u_plus.csv", field_csv(sol.u_plus, "u_plus"));
        write_text(run.path / "fields" / "u_minus.csv", field_csv(sol.u_minus, "u_minus"));
        write_text(run.path / "fields" / "potential.csv",
                   field_csv(GridField(grid, sol.potential), "nuclear potential V_L"));
        write_text(run.path / "fields" / "hartree.csv", field_csv(GridField(grid, sol.hartree), "hartree potential"));
    }
    std::printf("L = %g  mu+ = %.12f  mu- = %.12f  gap = %.6e  gap/T_L = %.6g  E_L - I = %.6e\n", sol.L,
                sol.mu_plus, sol.mu_minus, sol.gap, sol.gap / sol.T_L, sol.E_L - ref.energy_I);
    close_run(run, seconds_since(t0));
    return 0;
}

int cmd_sweep(const Config& c) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(c);
    if (c.L_list.empty()) throw ConfigError("--L-list is empty");
    auto run = open_run(c, "sweep");
    const auto s = scf_settings(c);
    const auto mono = solve_mono(c);
    write_text(run.path / "mono.json", mono_json(mono, s).dump(2));
    const auto spec = grid_spec(c, c.L_list.back(), mono);
    run.manifest["grid"] = grid_json(spec);
    SweepOptions opt;
    opt.radial_rmax = default_rmax(c);
    opt.radial_n = default_n(c);
    opt.jobs = c.jobs;
    opt.floor_h = c.floor_h;
    opt.diatomic.seed = c.seed;
    const auto rep = run_sweep(model(c), spec, c.L_list, mono, s, opt);
    write_text(run.path / "sweep.json", to_json(rep));
    write_text(run.path / "sweep.csv", to_csv(rep));

    std::printf("%8s %18s %18s %12s %12s %12s  %s\n", "L", "mu+", "mu-", "gap", "gap/T_L", "E_L-I", "flags");
    for (const auto& r : rep.rows) {
        std::string flags;
        for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
        std::printf("%8.3f %18.12f %18.12f %12.4e %12.4e %12.4e  %s\n", r.L, r.mu_plus, r.mu_minus, r.gap,
                    r.gap / r.T_L, r.E_L - rep.mono.ref_I(), flags.c_str());
    }
    for (const auto& f : rep.fits) {
        if (f.name.rfind("remainder:", 0) == 0 || f.name.rfind("tunneling:", 0) == 0) continue;
        std::printf("fit %-22s %s", f.name.c_str(), f.available ? "" : "unavailable: ");
        if (!f.available) {
            std::printf("%s\n", f.message.c_str());
            continue;
        }
        std::printf("slope = %.6g", f.slope);
        for (const char* k : {"rate", "power", "last_value", "target", "shrink"}) {
            const auto it = f.values.find(k);
            if (it != f.values.end()) std::printf("  %s = %.6g", k, it->second);
        }
        std::printf("\n");
    }
    close_run(run, seconds_since(t0));
    return 0;
}

int cmd_check(const Config& c) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(c);
    const std::string& suite = c.suite;
    if (suite != "all" && suite != "convolution" && suite != "stability" && suite != "yukawa")
        throw ConfigError("--suite must be all, convolution, stability or yukawa");
    auto run = open_run(c, "check");
    std::vector<CheckRecord> records;
    auto emit = [&](CheckRecord rec, const std::string& file) {
        write_text(run.path / "checks" / (file + ".json"), to_json(rec));
        std::printf("%-4s %-36s %s\n", rec.pass ? "PASS" : "FAIL", file.c_str(), rec.message.c_str());
        records.push_back(std::move(rec));
    };
    if (suite == "all" || suite == "convolution") {
        emit(gaussian_convolution_oracle(2), "gaussian_oracle_d2");
        emit(gaussian_convolution_oracle(3), "gaussian_oracle_d3");
        struct Case {
            double nu, k;
            int d;
        };
        for (const Case& k : {Case{1.0, 0.5, 2}, Case{0.5, 1.0, 3}, Case{1.0, 0.0, 2}, Case{1.0, 0.0, 3}}) {
            char name[64];
            std::snprintf(name, sizeof name, "convolution_nu%g_k%g_d%d", k.nu, k.k, k.d);
            emit(convolution_decay_check(k.nu, k.k, k.d).record, name);
        }
    }
    if (suite == "all" || suite == "stability" || suite == "yukawa") {
        const auto s = scf_settings(c);
        const auto mono = solve_mono(c);
        write_text(run.path / "mono.json", mono_json(mono, s).dump(2));
        if (suite != "yukawa") emit(stability_check(mono, c.trials, c.amplitude, c.seed).record, "stability");
        if (suite != "stability") emit(yukawa_gradient_check(mono, c.tol).record, "yukawa_gradient");
    }
    bool all = true;
    json summary = json::array();
    for (const auto& r : records) {
        all = all && r.pass;
        summary.push_back({{"name", r.name}, {"pass", r.pass}});
    }
    write_text(run.path / "checks" / "summary.json", json{{"pass", all}, {"checks", summary}}.dump(2));
    close_run(run, seconds_since(t0));
    return all ? 0 : 1;
}

void add_common(CLI::App* cmd, Config& c) {
    cmd->add_option("--dim", c.dim, "Dimension of the nuclei's plane or space (2 or 3)")->required();
    cmd->add_option("--coupling", c.coupling, "Hartree coupling (1 for the model, 0 for hydrogen)");
    cmd->add_option("--rmax", c.rmax, "Radial grid extent (default 60 for d=2, 120 for d=3)");
    cmd->add_option("--n", c.n, "Radial nodes (default 1000 for d=2, 2000 for d=3)");
    cmd->add_option("--tol", c.tol, "SCF residual tolerance");
    cmd->add_option("--mixing", c.mixing, "Initial potential mixing in (0,1]");
    cmd->add_option("--jobs", c.jobs, "Parallel L points (0: all cores)");
    cmd->add_option("--out", c.out, "Output root directory");
    cmd->add_option("--run", c.run, "Run name (default: the command name)");
    cmd->add_option("--seed", c.seed, "Seed for random starts and perturbations");
}

void add_box(CLI::App* cmd, Config& c) {
    cmd->add_option("--box", c.box, "Box half extents, axis first (default: sized from L and the decay length)")
        ->delimiter(',');
    cmd->add_option("--points", c.points, "Nodes across the reflection axis (sets the spacing)");
    cmd->add_option("--spacing", c.spacing, "Box spacing h (default 0.25 for d=2, 0.5 for d=3)");
}

void print_error(const char* kind, const std::string& what) {
    std::cerr << json{{"error", kind}, {"message", what}}.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-center restricted Hartree model lab"};
    app.set_version_flag("--version", HARTREE_VERSION);
    app.set_config("--config", "", "INI file; [mono], [diatomic], [sweep], [check] sections, flags win");
    app.require_subcommand(1);
    Config c;

    auto* mono = app.add_subcommand("mono", "Solve the radial atom; writes mono.json and mono.csv");
    add_common(mono, c);

    auto* dia = app.add_subcommand("diatomic", "Solve one molecule; writes diatomic.json and optional fields");
    add_common(dia, c);
    add_box(dia, c);
    dia->add_option("--L", c.L, "Internuclear distance");
    dia->add_flag("--fields", c.fields, "Dump u_plus, u_minus and the potentials under fields/");

    auto* sweep = app.add_subcommand("sweep", "Solve a list of L and run the asymptotic fits");
    add_common(sweep, c);
    add_box(sweep, c);
    sweep->add_option("--L-list", c.L_list, "Increasing internuclear distances")->delimiter(',');
    sweep->add_option("--floor-h", c.floor_h, "Second spacing for the error floor (0: 4h/3, <0: skip)");

    auto* check = app.add_subcommand("check", "Convolution decay, stability and resolvent checks");
    add_common(check, c);
    check->add_option("--suite", c.suite, "all, convolution, stability or yukawa");
    check->add_option("--trials", c.trials, "Stability trials");
    check->add_option("--amplitude", c.amplitude, "Stability perturbation size in H^1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (*mono) return cmd_mono(c);
        if (*dia) return cmd_diatomic(c);
        if (*sweep) return cmd_sweep(c);
        if (*check) return cmd_check(c);
    } catch (const ConfigError& e) {
        print_error("config", e.what());
        return 2;
    } catch (const NonconvergenceError& e) {
        print_error("nonconvergence", e.what());
        return 1;
    } catch (const ModelError& e) {
        print_error("model", e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return 1;
    }
    return 2;
}
