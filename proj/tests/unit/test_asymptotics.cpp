#include "doctest.h"

#include "hartree/asymptotics.hpp"
#include "hartree/error.hpp"

#include <cmath>
#include <functional>
#include <sstream>

using namespace hartree;

namespace {

SweepReport synthetic(int d, const std::vector<double>& Ls, const std::function<void(SweepRow&)>& fill) {
    SweepReport rep;
    rep.params.d = d;
    rep.grid.d = d;
    rep.mono.mu = -0.49;
    rep.mono.I = 0;
    rep.mono.m1 = 0.8;
    rep.mono.m2 = 1.0;
    for (double L : Ls) {
        SweepRow r;
        r.L_requested = r.L = L;
        fill(r);
        rep.rows.push_back(r);
    }
    return rep;
}

std::vector<double> range(double lo, double hi, double step) {
    std::vector<double> v;
    for (double L = lo; L <= hi + 1e-12; L += step) v.push_back(L);
    return v;
}

} // namespace

TEST_CASE("gap fit recovers synthetic rates") {
    const auto Ls = range(8, 24, 2);
    const auto pure = synthetic(2, Ls, [](SweepRow& r) { r.gap = std::exp(-0.7 * r.L); });
    const auto a = fit_gap_decay(pure);
    CHECK(std::abs(a.rate - 0.7) < 1e-10);
    CHECK(std::abs(a.power) < 1e-10);
    CHECK(a.record.available);
    CHECK(a.record.values.at("target_rate") == doctest::Approx(0.7));

    const auto poly = synthetic(2, Ls, [](SweepRow& r) { r.gap = std::exp(-0.7 * r.L) / (r.L * r.L); });
    const auto b = fit_gap_decay(poly);
    CHECK(std::abs(b.rate - 0.7) < 1e-10);
    CHECK(std::abs(b.power - 2) < 1e-10);
}

TEST_CASE("gap fit lists its exclusions") {
    const auto rep = synthetic(2, range(2, 40, 2), [](SweepRow& r) {
        r.gap = std::exp(-0.7 * r.L);
        if (r.L == 20) r.flags.push_back("gap-unresolved");
        if (r.L == 22) r.failed = true;
    });
    const auto f = fit_gap_decay(rep);
    CHECK(std::abs(f.rate - 0.7) < 1e-10);
    CHECK(f.record.used.size() + f.record.excluded.size() == rep.rows.size());
    std::map<double, std::string> why;
    for (const auto& e : f.record.excluded) why[e.L] = e.reason;
    CHECK(why.at(2) == "gap above window");
    CHECK(why.at(40) == "gap below window");
    CHECK(why.at(20) == "unresolved gap");
    CHECK(why.at(22) == "failed row");
    CHECK(f.record.window_lo == 8);
    CHECK(f.record.window_hi == 26);
}

TEST_CASE("too few rows leave the fit unavailable") {
    const auto rep = synthetic(2, {8, 10, 12}, [](SweepRow& r) { r.gap = std::exp(-0.7 * r.L); });
    CHECK_THROWS_AS(fit_gap_decay(rep), FitUnavailable);
    auto copy = rep;
    run_fits(copy);
    CHECK(copy.fits.empty());
}

TEST_CASE("energy coefficient of a synthetic law") {
    const auto rep = synthetic(2, range(10, 40, 5), [](SweepRow& r) { r.E_L = 0.36 / std::pow(r.L, 5); });
    const auto f = fit_energy_coefficient(rep);
    CHECK(f.target == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(std::abs(f.last_value - 0.36) < 1e-10);
    CHECK(std::abs(f.trend_intercept - 0.36) < 1e-10);
    CHECK(std::abs(f.trend_slope) < 1e-8);
    CHECK(f.last_L == 40);
}

TEST_CASE("energy coefficient respects the error floor") {
    auto rep = synthetic(2, range(10, 80, 5), [](SweepRow& r) { r.E_L = 0.36 / std::pow(r.L, 5); });
    rep.floor.available = true;
    rep.floor.energy = 1e-11;
    const auto f = fit_energy_coefficient(rep);
    for (double L : f.record.used) CHECK(0.36 / std::pow(L, 5) > 100 * 1e-11);
    CHECK(!f.record.excluded.empty());
    for (const auto& e : f.record.excluded) CHECK(e.reason == "below error floor");

    auto d3 = synthetic(3, range(10, 40, 5), [](SweepRow& r) { r.E_L = 1e-14; });
    d3.floor.available = true;
    d3.floor.energy = 1e-12;
    const auto g = fit_energy_coefficient(d3);
    CHECK(!g.record.available);
    CHECK(g.record.message.find("O(L^-inf)") != std::string::npos);
}

TEST_CASE("multiplier rate of a synthetic law") {
    const auto rep = synthetic(2, range(10, 40, 5), [](SweepRow& r) {
        r.mu_plus = -0.49 - std::pow(r.L, -3);
        r.mu_minus = -0.49 + 2 * std::pow(r.L, -3);
    });
    const auto f = fit_multiplier_rate(rep);
    CHECK(std::abs(f.slope_plus + 3) < 1e-10);
    CHECK(std::abs(f.slope_minus + 3) < 1e-10);
}

TEST_CASE("multiplier fit truncates at an additive floor") {
    auto rep = synthetic(2, {10, 20, 40, 80, 160, 320, 640, 1280, 2560}, [](SweepRow& r) {
        r.mu_plus = r.mu_minus = -0.49 - std::pow(r.L, -3) - 1e-9;
    });
    rep.floor.available = true;
    rep.floor.mu_plus = rep.floor.mu_minus = 1e-9;
    const auto f = fit_multiplier_rate(rep);
    CHECK(f.plus.window_hi < 640);
    CHECK(f.plus.excluded.size() >= 3);
    CHECK(f.slope_plus < -2.9);
    CHECK(f.slope_plus > -3.1);
}

TEST_CASE("fits are deterministic and round trip through JSON") {
    auto rep = synthetic(2, range(8, 24, 2), [](SweepRow& r) {
        r.gap = std::exp(-0.7 * r.L) / r.L;
        r.E_L = 0.36 / std::pow(r.L, 5);
        r.mu_plus = -0.49 - std::pow(r.L, -3);
        r.mu_minus = -0.49 - 2 * std::pow(r.L, -3);
        r.flags = {"note"};
    });
    auto again = rep;
    run_fits(rep);
    run_fits(again);
    CHECK(!rep.fits.empty());
    const std::string a = to_json(rep), b = to_json(again);
    CHECK(a == b);
    const auto back = sweep_from_json(a);
    CHECK(to_json(back) == a);
    CHECK(back.rows.size() == rep.rows.size());
    CHECK(back.fit("gap_decay") != nullptr);
    CHECK(back.fit("gap_decay")->values.at("rate") == rep.fit("gap_decay")->values.at("rate"));
    CHECK_THROWS_AS(sweep_from_json("{not json"), ConfigError);
    CHECK_THROWS_AS(sweep_from_json("{\"rows\": 3}"), ConfigError);
}

TEST_CASE("CSV layout") {
    const auto rep = synthetic(2, {8, 10}, [](SweepRow& r) { r.gap = 1e-3; });
    const auto csv = to_csv(rep);
    std::istringstream in(csv);
    std::string comment, header, line;
    std::getline(in, comment);
    std::getline(in, header);
    CHECK(comment.rfind("#", 0) == 0);
    std::string expect;
    for (const auto& c : csv_columns()) expect += (expect.empty() ? "" : ",") + c;
    CHECK(header == expect);
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("sweep argument errors") {
    ModelParams p;
    p.d = 2;
    GridSpec g;
    g.d = 2;
    g.h = 0.5;
    CHECK_THROWS_AS(run_sweep(p, g, {}), ConfigError);
    CHECK_THROWS_AS(run_sweep(p, g, {8, 6}), ConfigError);
    g.h = 0;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g.h = 0.5;
    g.d = 3;
    CHECK_THROWS_AS(run_sweep(p, g, {8}), ConfigError);
}

TEST_CASE("small planar sweep end to end") {
    ModelParams p;
    p.d = 2;
    GridSpec g;
    g.d = 2;
    g.h = 0.5;
    g.half_extent = {37, 27.5, 0};
    SweepOptions opt;
    opt.jobs = 1;
    SUBCASE("single L gives no fits") {
        opt.floor_h = -1;
        const auto rep = run_sweep(p, g, {8}, {}, opt);
        CHECK(rep.rows.size() == 1);
        CHECK(rep.fits.empty());
    }
    SUBCASE("six rows") {
        const auto rep = run_sweep(p, g, {8, 10, 12, 14, 16, 18}, {}, opt);
        REQUIRE(rep.rows.size() == 6);
        for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].L > rep.rows[i - 1].L);
        for (const auto& r : rep.rows) {
            CHECK(!r.failed);
            CHECK(r.gap > 0);
            CHECK(r.has_integrals);
        }
        CHECK(!rep.fits.empty());
        const auto* gap = rep.fit("gap_decay");
        REQUIRE(gap != nullptr);
        CHECK(gap->available);
        CHECK(gap->values.at("rate_relative_deviation") < 0.1);
        CHECK(rep.floor.available);
        const auto t = tunneling_table(rep);
        CHECK(t.L.size() == 6);
    }
}
