#include "hartree/asymptotics.hpp"

#include "hartree/error.hpp"
#include "hartree/fit.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

namespace hartree {

CartesianGrid GridSpec::make() const {
    validate();
    if (geometry == Geometry::axisymmetric) return make_axisymmetric_grid(half_extent[0], half_extent[1], h);
    return make_cartesian_grid(d, half_extent, h);
}

GridSpec GridSpec::with_spacing(double spacing) const {
    GridSpec s = *this;
    s.h = spacing;
    return s;
}

GridSpec GridSpec::with_axis_extent(double half_axis) const {
    GridSpec s = *this;
    s.half_extent[0] = half_axis;
    return s;
}

void GridSpec::validate() const {
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    if (d == 2 && geometry != Geometry::cartesian) throw ConfigError("the half-plane geometry needs d = 3");
    if (!(h > 0)) throw ConfigError("grid spacing must be positive");
    const int axes = geometry == Geometry::axisymmetric ? 2 : d;
    for (int a = 0; a < axes; ++a)
        if (!(half_extent[a] >= 2 * h)) throw ConfigError("box half extent below two cells");
}

bool SweepRow::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

const FitRecord* SweepReport::fit(const std::string& name) const {
    for (const auto& f : fits)
        if (f.name == name) return &f;
    return nullptr;
}

//-------------------------------------------------------------------------

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SweepRow solve_row(const ModelParams& params, std::shared_ptr<const CartesianGrid> grid, double L,
                   const MonoatomicSolution& mono, const GridMonoSolution& ref, const GridMonoSolution* wide,
                   const SCFSettings& settings, const SweepOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.L_requested = L;
    try {
        const auto s = solve_diatomic(params, grid, mono, L, settings, opt.diatomic, &ref);
        row.L = s.L;
        row.mu_plus = s.mu_plus;
        row.mu_plus_resolve = s.mu_plus_resolve;
        row.mu_minus = s.mu_minus;
        row.mu_plus_second = s.mu_plus_second;
        row.mu_minus_second = s.mu_minus_second;
        row.mu_third = s.mu_third;
        row.gap = s.gap;
        row.gap_resolution = s.gap_resolution;
        row.T_L = s.T_L;
        row.E_L = s.E_L;
        row.energy_functional = s.energy_functional;
        row.kinetic = s.kinetic;
        row.coulomb_D = s.coulomb_D;
        row.residual_plus = s.residual_plus;
        row.residual_minus = s.residual_minus;
        row.residual_scf = s.residual_scf;
        row.scf_iterations = s.scf_iterations;
        row.flags = s.flags;
        const auto e1 = superposition_error(s, ref, 1.0);
        const auto e0 = superposition_error(s, ref, 0.0);
        row.sup_err_plus = e1.plus;
        row.sup_err_minus = e1.minus;
        row.sup_err_plus_l2 = e0.plus;
        row.sup_err_minus_l2 = e0.minus;
        if (wide) {
            row.integrals = interaction_integrals(*wide, s.L, wide->m1, wide->m2);
            row.has_integrals = true;
        }
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.flags.push_back("failed");
        if (row.L == 0) row.L = L;
    }
    row.seconds = seconds_since(t0);
    return row;
}

double snap_spacing(double L, double target) {
    const double m = std::max(1.0, std::round(L / (2 * target)));
    return L / (2 * m);
}

} // namespace

SweepReport run_sweep(const ModelParams& params, const GridSpec& grid, const std::vector<double>& L_list,
                      const SCFSettings& settings, const SweepOptions& opt) {
    params.validate();
    const auto rg = std::make_shared<const RadialGrid>(make_radial_grid(opt.radial_rmax, opt.radial_n, params.d));
    const auto mono = solve_monoatomic(params, rg, settings);
    return run_sweep(params, grid, L_list, mono, settings, opt);
}

SweepReport run_sweep(const ModelParams& params, const GridSpec& spec, const std::vector<double>& L_list,
                      const MonoatomicSolution& mono, const SCFSettings& settings, const SweepOptions& opt) {
    params.validate();
    settings.validate();
    spec.validate();
    if (L_list.empty()) throw ConfigError("empty L list");
    for (std::size_t i = 1; i < L_list.size(); ++i)
        if (!(L_list[i] > L_list[i - 1])) throw ConfigError("L list must be strictly increasing");
    if (spec.d != params.d || mono.params.d != params.d) throw ConfigError("grid and model dimensions differ");

    SweepReport rep;
    rep.params = params;
    rep.grid = spec;
    rep.mono.mu = mono.mu;
    rep.mono.I = mono.energy_I;
    rep.mono.m1 = mono.m1;
    rep.mono.m2 = mono.m2;
    try {
        const auto w = default_decay_window(mono.u);
        const auto f = fit_decay(mono, w.first, w.second);
        rep.mono.decay_rate = f.rate;
        rep.mono.decay_power = f.power;
    } catch (const std::exception& e) {
        rep.notes.push_back(std::string("decay fit unavailable: ") + e.what());
    }

    const auto grid = std::make_shared<const CartesianGrid>(spec.make());
    const auto ref = solve_grid_mono(params, grid, mono, settings, opt.diatomic);
    rep.mono.has_grid = true;
    rep.mono.grid_mu = ref.mu;
    rep.mono.grid_I = ref.energy_I;
    rep.mono.grid_m1 = ref.m1;
    rep.mono.grid_m2 = ref.m2;
    rep.mono.grid_residual = ref.residual;

    // The translates in the interaction integrals reach a distance L from
    // their center, beyond the molecule box.
    std::unique_ptr<GridMonoSolution> wide_own;
    const GridMonoSolution* wide = nullptr;
    if (opt.interactions) {
        const double margin = opt.diatomic.margin_decay_lengths / std::sqrt(std::abs(mono.mu));
        const double reach = L_list.back() + margin;
        if (reach <= spec.half_extent[0] + 1e-12) {
            wide = &ref;
        } else {
            try {
                const auto wg = std::make_shared<const CartesianGrid>(spec.with_axis_extent(reach).make());
                wide_own = std::make_unique<GridMonoSolution>(solve_grid_mono(params, wg, mono, settings, opt.diatomic));
                wide = wide_own.get();
            } catch (const std::exception& e) {
                rep.notes.push_back(std::string("interaction integrals skipped: ") + e.what());
            }
        }
    }

    rep.rows.resize(L_list.size());
    const int jobs = opt.jobs > 0 ? opt.jobs : int(std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < L_list.size(); i = next++)
            rep.rows[i] = solve_row(params, grid, L_list[i], mono, ref, wide, settings, opt);
    };
    if (jobs <= 1 || L_list.size() == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < std::min<int>(jobs, int(L_list.size())); ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.L < b.L; });
    const SweepRow* last = nullptr;
    for (const auto& r : rep.rows)
        if (!r.failed) last = &r;
    if (!last) throw NonconvergenceError("every L of the sweep failed: " + rep.rows.front().error, {});

    if (opt.floor_h >= 0) {
        FloorEstimate& fl = rep.floor;
        fl.L = last->L;
        fl.h = spec.h;
        fl.h_second = snap_spacing(last->L, opt.floor_h > 0 ? opt.floor_h : 4.0 * spec.h / 3.0);
        try {
            const auto g2 = std::make_shared<const CartesianGrid>(spec.with_spacing(fl.h_second).make());
            const auto ref2 = solve_grid_mono(params, g2, mono, settings, opt.diatomic);
            const auto s2 = solve_diatomic(params, g2, mono, last->L, settings, opt.diatomic, &ref2);
            if (std::abs(s2.L - last->L) > 1e-9) throw ConfigError("second resolution cannot place the nuclei");
            fl.energy = std::abs((last->E_L - ref.energy_I) - (s2.E_L - ref2.energy_I));
            fl.mu_plus = std::abs((last->mu_plus - ref.mu) - (s2.mu_plus - ref2.mu));
            fl.mu_minus = std::abs((last->mu_minus - ref.mu) - (s2.mu_minus - ref2.mu));
            fl.gap = std::abs(last->gap - s2.gap);
            fl.available = true;
        } catch (const std::exception& e) {
            fl.note = std::string("second resolution failed: ") + e.what();
        }
    }
    run_fits(rep);
    return rep;
}

//-------------------------------------------------------------------------
// Fits

namespace {

struct Window {
    std::vector<const SweepRow*> rows;
    std::vector<Exclusion> excluded;
};

template <class Reason>
Window select(const SweepReport& rep, Reason&& reason) {
    Window w;
    for (const auto& r : rep.rows) {
        const std::string why = r.failed ? std::string("failed row") : reason(r);
        if (why.empty()) {
            w.rows.push_back(&r);
        } else {
            w.excluded.push_back({r.L, why});
        }
    }
    return w;
}

void fill_window(FitRecord& rec, const Window& w) {
    rec.excluded = w.excluded;
    rec.used.clear();
    for (const auto* r : w.rows) rec.used.push_back(r->L);
    if (!rec.used.empty()) {
        rec.window_lo = rec.used.front();
        rec.window_hi = rec.used.back();
    }
}

void require_rows(const FitRecord& rec, std::size_t need) {
    if (rec.used.size() < need) {
        std::ostringstream os;
        os << rec.name << ": " << rec.used.size() << " usable rows, " << need << " needed";
        throw FitUnavailable(os.str());
    }
}

} // namespace

GapFit fit_gap_decay(const SweepReport& rep, const GapWindow& win) {
    GapFit out;
    out.record.name = "gap_decay";
    const auto w = select(rep, [&](const SweepRow& r) -> std::string {
        if (r.has_flag("gap-unresolved")) return "unresolved gap";
        if (!(r.gap > 0)) return "nonpositive gap";
        if (r.gap < win.min_gap) return "gap below window";
        if (r.gap > win.max_gap) return "gap above window";
        return "";
    });
    fill_window(out.record, w);
    require_rows(out.record, 4);
    std::vector<double> one, mL, mlog, y;
    for (const auto* r : w.rows) {
        one.push_back(1.0);
        mL.push_back(-r->L);
        mlog.push_back(-std::log(r->L));
        y.push_back(std::log(r->gap));
    }
    const auto f = least_squares({one, mL, mlog}, y);
    out.intercept = f.coef[0];
    out.rate = f.coef[1];
    out.power = f.coef[2];
    auto& rec = out.record;
    rec.available = true;
    rec.slope = -out.rate;
    rec.intercept = out.intercept;
    rec.residual = f.residual;
    const double target = std::sqrt(std::abs(rep.mono.mu));
    rec.values["rate"] = out.rate;
    rec.values["power"] = out.power;
    rec.values["target_rate"] = target;
    rec.values["rate_relative_deviation"] = std::abs(out.rate - target) / target;
    if (rep.mono.has_grid) rec.values["grid_rate"] = std::sqrt(std::abs(rep.mono.grid_mu));
    rec.values["min_gap"] = win.min_gap;
    rec.values["max_gap"] = win.max_gap;
    return out;
}

EnergyFit fit_energy_coefficient(const SweepReport& rep, double floor_factor) {
    EnergyFit out;
    auto& rec = out.record;
    rec.name = "energy_coefficient";
    const double I = rep.mono.ref_I();
    const double floor = rep.floor.available ? rep.floor.energy : 0.0;
    const auto w = select(rep, [&](const SweepRow& r) -> std::string {
        return std::abs(r.E_L - I) > floor_factor * floor ? "" : "below error floor";
    });
    fill_window(rec, w);
    rec.values["floor"] = floor;
    rec.values["floor_factor"] = floor_factor;
    out.target = std::pow(0.75 * rep.mono.m1, 2);
    rec.values["target"] = out.target;
    if (rep.params.d == 3) {
        rec.available = false;
        if (w.rows.empty()) {
            rec.message = "consistent with O(L^-inf): |E_L - I| below the error floor for every row";
        } else {
            rec.message = "d = 3: no power law asserted";
            const auto* r = w.rows.back();
            rec.values["last_difference"] = r->E_L - I;
            rec.values["last_L"] = r->L;
        }
        return out;
    }
    if (!rep.floor.available) rec.message = "no error floor estimate; window not truncated";
    require_rows(rec, 4);
    std::vector<double> inv, c;
    for (const auto* r : w.rows) {
        inv.push_back(1.0 / r->L);
        c.push_back((r->E_L - I) * std::pow(r->L, 5));
    }
    const auto f = fit_line(inv, c);
    out.trend_slope = f.slope;
    out.trend_intercept = f.intercept;
    out.last_value = c.back();
    out.last_L = w.rows.back()->L;
    rec.available = true;
    rec.slope = f.slope;
    rec.intercept = f.intercept;
    rec.residual = f.residual;
    rec.values["last_value"] = out.last_value;
    rec.values["last_L"] = out.last_L;
    rec.values["ratio_to_target"] = out.last_value / out.target;
    rec.values["ratio_to_half_target"] = out.last_value / (0.5 * out.target);
    if (rep.mono.has_grid) rec.values["grid_target"] = std::pow(0.75 * rep.mono.grid_m1, 2);
    return out;
}

MultiplierFit fit_multiplier_rate(const SweepReport& rep, double floor_factor, double contamination) {
    MultiplierFit out;
    const double mu = rep.mono.ref_mu();
    auto one = [&](FitRecord& rec, const char* name, bool plus, double floor) {
        rec.name = name;
        auto dev = [&](const SweepRow& r) { return std::abs((plus ? r.mu_plus : r.mu_minus) - mu); };
        const auto w = select(rep, [&](const SweepRow& r) -> std::string {
            const double d = dev(r);
            if (!(d > floor_factor * floor) || d == 0) return "below error floor";
            if (!(std::abs(r.gap) < contamination * d)) return "exponential splitting dominates";
            return "";
        });
        fill_window(rec, w);
        rec.values["floor"] = floor;
        rec.values["floor_factor"] = floor_factor;
        rec.values["mu_reference"] = mu;
        if (rec.used.size() < 4) {
            rec.message = std::to_string(rec.used.size()) + " usable rows, 4 needed";
            return 0.0;
        }
        std::vector<double> x, y;
        for (const auto* r : w.rows) {
            x.push_back(std::log(r->L));
            y.push_back(std::log(dev(*r)));
        }
        const auto f = fit_line(x, y);
        rec.available = true;
        rec.slope = f.slope;
        rec.intercept = f.intercept;
        rec.residual = f.residual;
        return f.slope;
    };
    const bool fl = rep.floor.available;
    out.slope_plus = one(out.plus, "multiplier_rate_plus", true, fl ? rep.floor.mu_plus : 0.0);
    out.slope_minus = one(out.minus, "multiplier_rate_minus", false, fl ? rep.floor.mu_minus : 0.0);
    if (!out.plus.available && !out.minus.available)
        throw FitUnavailable("multiplier rate: fewer than 4 rows above the error floor in both sectors");
    return out;
}

TunnelingTable tunneling_table(const SweepReport& rep) {
    TunnelingTable t;
    const int d = rep.params.d;
    t.kappa = std::sqrt(std::abs(rep.mono.ref_mu()));
    std::vector<const SweepRow*> rows;
    for (const auto& r : rep.rows)
        if (!r.failed && r.has_integrals) rows.push_back(&r);
    struct Spec {
        const char* quantity;
        const char* envelope;
        double (*value)(const InteractionIntegrals&);
        double power; // of L
        int tunnel;   // power of T_L
    };
    const double p1 = 0.5 * (d - 1), p2 = 0.5 * (d - 2);
    const Spec specs[] = {
        {"overlap", "L^((d-1)/2) T_L", [](const InteractionIntegrals& i) { return i.overlap; }, p1, 1},
        {"D_cross_cross", "L T_L^2", [](const InteractionIntegrals& i) { return i.D_cross_cross; }, 1.0, 2},
        {"D_self_cross", "T_L", [](const InteractionIntegrals& i) { return i.D_self_cross; }, 0.0, 1},
        {"gradient", "L^((d-1)/2) T_L", [](const InteractionIntegrals& i) { return i.gradient; }, p1, 1},
        {"product_l2", "T_L", [](const InteractionIntegrals& i) { return i.product_l2; }, 0.0, 1},
        {"VL_cross", "L^((d-2)/2) T_L", [](const InteractionIntegrals& i) { return i.VL_cross; }, p2, 1},
    };
    for (const auto* r : rows) t.L.push_back(r->integrals.L);
    auto variation = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (double x : v) {
            lo = std::min(lo, std::abs(x));
            hi = std::max(hi, std::abs(x));
        }
        return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    };
    for (const auto& s : specs) {
        TunnelingColumn c;
        c.quantity = s.quantity;
        c.envelope = s.envelope;
        for (const auto* r : rows) {
            const double L = r->integrals.L;
            const double env = std::pow(L, s.power) * std::exp(-s.tunnel * t.kappa * L);
            c.ratios.push_back(s.value(r->integrals) / env);
        }
        c.variation = variation(c.ratios);
        t.columns.push_back(std::move(c));
    }
    TunnelingColumn v, dd;
    v.quantity = "V_left_right";
    dd.quantity = "D_left_right";
    v.envelope = d == 2 ? "L^-7 (after the L^-1, L^-3, L^-5 terms)" : "T_L^2 / L^2 (after -1/L)";
    dd.envelope = d == 2 ? "L^-7 (after the L^-1, L^-3, L^-5 terms)" : "T_L^2 (after 1/(2L))";
    for (const auto* r : rows) {
        const auto& i = r->integrals;
        const double L = i.L, T2 = std::exp(-2 * t.kappa * L);
        if (d == 2) {
            v.ratios.push_back((i.V_left_right - i.predicted_V_left_right) * std::pow(L, 7));
            dd.ratios.push_back((i.D_left_right - i.predicted_D_left_right) * std::pow(L, 7));
        } else {
            v.ratios.push_back((i.V_left_right + 1 / L) * L * L / T2);
            dd.ratios.push_back((i.D_left_right - 0.5 / L) / T2);
        }
    }
    v.variation = variation(v.ratios);
    dd.variation = variation(dd.ratios);
    t.remainders = {std::move(v), std::move(dd)};
    return t;
}

void run_fits(SweepReport& rep, const GapWindow& window) {
    rep.fits.clear();
    std::size_t ok = 0;
    for (const auto& r : rep.rows) ok += r.failed ? 0 : 1;
    if (ok < 4) return;
    auto unavailable = [](const char* name, const std::exception& e) {
        FitRecord rec;
        rec.name = name;
        rec.message = e.what();
        return rec;
    };
    try {
        rep.fits.push_back(fit_gap_decay(rep, window).record);
    } catch (const FitUnavailable& e) {
        rep.fits.push_back(unavailable("gap_decay", e));
    }
    try {
        rep.fits.push_back(fit_energy_coefficient(rep).record);
    } catch (const FitUnavailable& e) {
        rep.fits.push_back(unavailable("energy_coefficient", e));
    }
    try {
        auto m = fit_multiplier_rate(rep);
        rep.fits.push_back(m.plus);
        rep.fits.push_back(m.minus);
    } catch (const FitUnavailable& e) {
        rep.fits.push_back(unavailable("multiplier_rate_plus", e));
        rep.fits.push_back(unavailable("multiplier_rate_minus", e));
    }

    const auto t = tunneling_table(rep);
    auto column_record = [&](const TunnelingColumn& c, const std::string& prefix) {
        FitRecord rec;
        rec.name = prefix + c.quantity;
        rec.available = !c.ratios.empty();
        rec.message = "ratio to " + c.envelope;
        rec.used = t.L;
        if (!t.L.empty()) {
            rec.window_lo = t.L.front();
            rec.window_hi = t.L.back();
        }
        rec.values["variation"] = c.variation;
        if (!c.ratios.empty()) {
            rec.values["first_ratio"] = c.ratios.front();
            rec.values["last_ratio"] = c.ratios.back();
        }
        rec.values["kappa"] = t.kappa;
        return rec;
    };
    for (const auto& c : t.columns) rep.fits.push_back(column_record(c, "tunneling:"));
    for (const auto& c : t.remainders) rep.fits.push_back(column_record(c, "remainder:"));

    for (int sign = 0; sign < 2; ++sign) {
        FitRecord rec;
        rec.name = sign == 0 ? "superposition_plus" : "superposition_minus";
        const auto w = select(rep, [&](const SweepRow& r) -> std::string {
            const double e = sign == 0 ? r.sup_err_plus : r.sup_err_minus;
            if (!(e > 0)) return "zero error";
            if (r.has_integrals && !(std::abs(r.integrals.overlap) < 0.1 * e)) return "exponential overlap dominates";
            return "";
        });
        fill_window(rec, w);
        if (rec.used.size() >= 4) {
            std::vector<double> x, y;
            for (const auto* r : w.rows) {
                x.push_back(std::log(r->L));
                y.push_back(std::log(sign == 0 ? r->sup_err_plus : r->sup_err_minus));
            }
            const auto f = fit_line(x, y);
            rec.available = true;
            rec.slope = f.slope;
            rec.intercept = f.intercept;
            rec.residual = f.residual;
        } else {
            rec.message = std::to_string(rec.used.size()) + " usable rows, 4 needed";
        }
        rep.fits.push_back(std::move(rec));
    }

    FitRecord third;
    third.name = "third_gap";
    const auto w = select(rep, [](const SweepRow&) { return std::string(); });
    fill_window(third, w);
    if (!w.rows.empty()) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto* r : w.rows) {
            const double s = r->mu_third - r->mu_minus;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        const double first = w.rows.front()->mu_third - w.rows.front()->mu_minus;
        third.available = true;
        third.values["first"] = first;
        third.values["min"] = lo;
        third.values["max"] = hi;
        third.values["shrink"] = first / lo;
    }
    rep.fits.push_back(std::move(third));
}

//-------------------------------------------------------------------------
// Serialization

namespace {

using json = nlohmann::ordered_json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get(const json& j, const char* key, double fallback = 0.0) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (it->is_null()) return std::numeric_limits<double>::infinity();
    return it->get<double>();
}

json integrals_json(const InteractionIntegrals& i) {
    return json{{"L", i.L},
                {"overlap", num(i.overlap)},
                {"D_cross_cross", num(i.D_cross_cross)},
                {"D_self_cross", num(i.D_self_cross)},
                {"gradient", num(i.gradient)},
                {"product_l2", num(i.product_l2)},
                {"VL_cross", num(i.VL_cross)},
                {"V_left_right", num(i.V_left_right)},
                {"D_left_right", num(i.D_left_right)},
                {"predicted_V_left_right", num(i.predicted_V_left_right)},
                {"predicted_D_left_right", num(i.predicted_D_left_right)}};
}

InteractionIntegrals integrals_from(const json& j) {
    InteractionIntegrals i;
    i.L = get(j, "L");
    i.overlap = get(j, "overlap");
    i.D_cross_cross = get(j, "D_cross_cross");
    i.D_self_cross = get(j, "D_self_cross");
    i.gradient = get(j, "gradient");
    i.product_l2 = get(j, "product_l2");
    i.VL_cross = get(j, "VL_cross");
    i.V_left_right = get(j, "V_left_right");
    i.D_left_right = get(j, "D_left_right");
    i.predicted_V_left_right = get(j, "predicted_V_left_right");
    i.predicted_D_left_right = get(j, "predicted_D_left_right");
    return i;
}

// Scalar row columns shared by the JSON rows and the CSV.
struct Column {
    const char* name;
    double SweepRow::*field;
};

const Column kRowColumns[] = {
    {"L_requested", &SweepRow::L_requested},
    {"L", &SweepRow::L},
    {"mu_plus", &SweepRow::mu_plus},
    {"mu_plus_resolve", &SweepRow::mu_plus_resolve},
    {"mu_minus", &SweepRow::mu_minus},
    {"mu_plus_second", &SweepRow::mu_plus_second},
    {"mu_minus_second", &SweepRow::mu_minus_second},
    {"mu_third", &SweepRow::mu_third},
    {"gap", &SweepRow::gap},
    {"gap_resolution", &SweepRow::gap_resolution},
    {"T_L", &SweepRow::T_L},
    {"E_L", &SweepRow::E_L},
    {"energy_functional", &SweepRow::energy_functional},
    {"kinetic", &SweepRow::kinetic},
    {"coulomb_D", &SweepRow::coulomb_D},
    {"sup_err_plus", &SweepRow::sup_err_plus},
    {"sup_err_minus", &SweepRow::sup_err_minus},
    {"sup_err_plus_l2", &SweepRow::sup_err_plus_l2},
    {"sup_err_minus_l2", &SweepRow::sup_err_minus_l2},
    {"residual_plus", &SweepRow::residual_plus},
    {"residual_minus", &SweepRow::residual_minus},
    {"residual_scf", &SweepRow::residual_scf},
    {"seconds", &SweepRow::seconds},
};

std::string join(const std::vector<std::string>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string to_json(const SweepReport& rep, int indent) {
    json j;
    j["params"] = {{"d", rep.params.d}, {"hartree_coupling", rep.params.hartree_coupling}};
    j["grid"] = {{"d", rep.grid.d},
                 {"geometry", to_string(rep.grid.geometry)},
                 {"half_extent", rep.grid.half_extent},
                 {"h", rep.grid.h}};
    const auto& m = rep.mono;
    j["mono_summary"] = {{"mu", m.mu},
                         {"I", m.I},
                         {"m1", m.m1},
                         {"m2", m.m2},
                         {"decay_rate", m.decay_rate},
                         {"decay_power", m.decay_power},
                         {"has_grid", m.has_grid},
                         {"grid_mu", m.grid_mu},
                         {"grid_I", m.grid_I},
                         {"grid_m1", m.grid_m1},
                         {"grid_m2", m.grid_m2},
                         {"grid_residual", m.grid_residual}};
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json o;
        for (const auto& c : kRowColumns) o[c.name] = num(r.*(c.field));
        o["E_L_minus_I"] = num(r.E_L - m.ref_I());
        o["scf_iterations"] = r.scf_iterations;
        o["failed"] = r.failed;
        o["error"] = r.error;
        o["flags"] = r.flags;
        if (r.has_integrals) o["integrals"] = integrals_json(r.integrals);
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    const auto& f = rep.floor;
    j["floor"] = {{"available", f.available}, {"L", f.L},           {"h", f.h},
                  {"h_second", f.h_second},   {"energy", f.energy}, {"mu_plus", f.mu_plus},
                  {"mu_minus", f.mu_minus},   {"gap", f.gap},       {"note", f.note}};
    json fits = json::array();
    for (const auto& rec : rep.fits) {
        json o{{"name", rec.name},       {"available", rec.available}, {"message", rec.message},
               {"slope", num(rec.slope)}, {"intercept", num(rec.intercept)}, {"residual", num(rec.residual)},
               {"window", {rec.window_lo, rec.window_hi}}, {"used", rec.used}};
        json ex = json::array();
        for (const auto& e : rec.excluded) ex.push_back({{"L", e.L}, {"reason", e.reason}});
        o["excluded"] = std::move(ex);
        json vals = json::object();
        for (const auto& [k, v] : rec.values) vals[k] = num(v);
        o["values"] = std::move(vals);
        fits.push_back(std::move(o));
    }
    j["fits"] = std::move(fits);
    j["notes"] = rep.notes;
    return j.dump(indent);
}

SweepReport sweep_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("sweep report is not valid JSON: ") + e.what());
    }
    SweepReport rep;
    try {
        rep.params.d = j.at("params").at("d").get<int>();
        rep.params.hartree_coupling = j.at("params").at("hartree_coupling").get<double>();
        const auto& g = j.at("grid");
        rep.grid.d = g.at("d").get<int>();
        rep.grid.geometry =
            g.at("geometry").get<std::string>() == to_string(Geometry::axisymmetric) ? Geometry::axisymmetric
                                                                                      : Geometry::cartesian;
        rep.grid.half_extent = g.at("half_extent").get<std::array<double, 3>>();
        rep.grid.h = g.at("h").get<double>();
        const auto& m = j.at("mono_summary");
        rep.mono.mu = get(m, "mu");
        rep.mono.I = get(m, "I");
        rep.mono.m1 = get(m, "m1");
        rep.mono.m2 = get(m, "m2");
        rep.mono.decay_rate = get(m, "decay_rate");
        rep.mono.decay_power = get(m, "decay_power");
        rep.mono.has_grid = m.value("has_grid", false);
        rep.mono.grid_mu = get(m, "grid_mu");
        rep.mono.grid_I = get(m, "grid_I");
        rep.mono.grid_m1 = get(m, "grid_m1");
        rep.mono.grid_m2 = get(m, "grid_m2");
        rep.mono.grid_residual = get(m, "grid_residual");
        for (const auto& o : j.at("rows")) {
            SweepRow r;
            for (const auto& c : kRowColumns) r.*(c.field) = get(o, c.name);
            r.scf_iterations = o.value("scf_iterations", 0);
            r.failed = o.value("failed", false);
            r.error = o.value("error", std::string());
            r.flags = o.value("flags", std::vector<std::string>{});
            if (o.contains("integrals")) {
                r.integrals = integrals_from(o.at("integrals"));
                r.has_integrals = true;
            }
            rep.rows.push_back(std::move(r));
        }
        if (j.contains("floor")) {
            const auto& f = j.at("floor");
            rep.floor.available = f.value("available", false);
            rep.floor.L = get(f, "L");
            rep.floor.h = get(f, "h");
            rep.floor.h_second = get(f, "h_second");
            rep.floor.energy = get(f, "energy");
            rep.floor.mu_plus = get(f, "mu_plus");
            rep.floor.mu_minus = get(f, "mu_minus");
            rep.floor.gap = get(f, "gap");
            rep.floor.note = f.value("note", std::string());
        }
        for (const auto& o : j.value("fits", json::array())) {
            FitRecord rec;
            rec.name = o.at("name").get<std::string>();
            rec.available = o.value("available", false);
            rec.message = o.value("message", std::string());
            rec.slope = get(o, "slope");
            rec.intercept = get(o, "intercept");
            rec.residual = get(o, "residual");
            const auto& w = o.at("window");
            rec.window_lo = w.at(0).get<double>();
            rec.window_hi = w.at(1).get<double>();
            rec.used = o.value("used", std::vector<double>{});
            for (const auto& e : o.value("excluded", json::array()))
                rec.excluded.push_back({e.at("L").get<double>(), e.at("reason").get<std::string>()});
            const json vals = o.value("values", json::object());
            for (const auto& [k, v] : vals.items())
                rec.values[k] = v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
            rep.fits.push_back(std::move(rec));
        }
        rep.notes = j.value("notes", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed sweep report: ") + e.what());
    }
    return rep;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c;
        for (const auto& col : kRowColumns) c.emplace_back(col.name);
        c.emplace_back("E_L_minus_I");
        c.emplace_back("scf_iterations");
        c.emplace_back("failed");
        for (const char* n : {"overlap", "D_cross_cross", "D_self_cross", "gradient", "product_l2", "VL_cross",
                              "V_left_right", "D_left_right", "predicted_V_left_right", "predicted_D_left_right"})
            c.emplace_back(n);
        c.emplace_back("flags");
        return c;
    }();
    return cols;
}

std::string to_csv(const SweepReport& rep) {
    std::ostringstream os;
    os << "# hartree sweep d=" << rep.params.d << " coupling=" << fmt(rep.params.hartree_coupling)
       << " h=" << fmt(rep.grid.h) << " mu=" << fmt(rep.mono.mu) << " I=" << fmt(rep.mono.I)
       << " grid_mu=" << fmt(rep.mono.grid_mu) << " grid_I=" << fmt(rep.mono.grid_I) << " m1=" << fmt(rep.mono.m1)
       << " m2=" << fmt(rep.mono.m2) << "; one row per L; E_L_minus_I uses the same-box atom;"
       << " integral columns are empty without interaction integrals; flags are ';'-separated; columns: "
       << join(csv_columns(), ' ') << '\n';
    os << join(csv_columns(), ',') << '\n';
    for (const auto& r : rep.rows) {
        std::vector<std::string> f;
        for (const auto& c : kRowColumns) f.push_back(fmt(r.*(c.field)));
        f.push_back(fmt(r.E_L - rep.mono.ref_I()));
        f.push_back(std::to_string(r.scf_iterations));
        f.push_back(r.failed ? "1" : "0");
        const auto& i = r.integrals;
        for (double v : {i.overlap, i.D_cross_cross, i.D_self_cross, i.gradient, i.product_l2, i.VL_cross,
                         i.V_left_right, i.D_left_right, i.predicted_V_left_right, i.predicted_D_left_right})
            f.push_back(r.has_integrals ? fmt(v) : std::string());
        f.push_back(join(r.flags, ';'));
        os << join(f, ',') << '\n';
    }
    return os.str();
}

} // namespace hartree
