#include "winfree/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "winfree/csv.hpp"
#include "winfree/errors.hpp"

namespace {

winfree::SweepSpec tiny_spec() {
    winfree::SweepSpec spec;
    spec.n_values = {1, 2};
    spec.kappa_min = 0.0;
    spec.kappa_max = 0.2;
    spec.kappa_step = 0.2;
    spec.frequencies = {1.0, 2.0, 3.0};
    spec.ic_alpha = 0.5 * 3.14159265358979323846;
    spec.seeds = {1, 7};
    spec.sim.dt = 0.02;
    spec.sim.t_end = 40.0;
    spec.sim.stride = 5;
    return spec;
}

winfree::SweepCell cell_at(int n, double kappa, std::uint64_t seed, winfree::Label label) {
    winfree::SweepCell cell;
    cell.n = n;
    cell.kappa = kappa;
    cell.seed = seed;
    cell.label = label;
    return cell;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("kappa grid covers the closed range") {
    winfree::SweepSpec spec = tiny_spec();
    spec.kappa_min = 0.0;
    spec.kappa_max = 2.0;
    spec.kappa_step = 0.5;
    const std::vector<double> grid = spec.kappa_grid();
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 2.0);
    CHECK(grid[2] == 1.0);

    // A step that does not divide the range stops at the last point inside.
    spec.kappa_max = 1.0;
    spec.kappa_step = 0.3;
    const std::vector<double> partial = spec.kappa_grid();
    REQUIRE(partial.size() == 4);
    CHECK(partial.back() == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("spec validation rejects each malformed field") {
    const winfree::SweepSpec good = tiny_spec();
    CHECK_NOTHROW(good.validate());

    winfree::SweepSpec spec = good;
    spec.n_values.clear();
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.n_values = {0};
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.kappa_step = 0.0;
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.kappa_min = -0.1;
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.kappa_max = -1.0;
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.frequencies.clear();
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.frequencies = {std::nan("")};
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.ic_phases = {0.1, 0.2};  // three oscillators
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.ic_alpha = 0.0;
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.seeds.clear();
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.discard_fraction = 1.0;
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);
    spec = good;
    spec.sim.dt = -1.0;
    CHECK_THROWS_AS(spec.validate(), winfree::config_error);

    CHECK_THROWS_AS((void)winfree::run_sweep(good, 0), winfree::domain_error);
}

TEST_CASE("a small sweep is deterministic across worker counts") {
    const winfree::SweepSpec spec = tiny_spec();
    const std::vector<winfree::SweepCell> serial = winfree::run_sweep_serial(spec);
    const std::vector<winfree::SweepCell> one = winfree::run_sweep(spec, 1);
    const std::vector<winfree::SweepCell> three = winfree::run_sweep(spec, 3);

    REQUIRE(serial.size() == 8);
    REQUIRE(one.size() == 8);
    REQUIRE(three.size() == 8);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CAPTURE(i);
        CHECK(one[i].n == serial[i].n);
        CHECK(one[i].kappa == serial[i].kappa);
        CHECK(one[i].seed == serial[i].seed);
        CHECK(one[i].label == serial[i].label);
        CHECK(one[i].rho_mean == serial[i].rho_mean);
        CHECK(one[i].rho_spread == serial[i].rho_spread);
        CHECK(three[i].label == serial[i].label);
        CHECK(three[i].rho_mean == serial[i].rho_mean);
        CHECK(three[i].rho_spread == serial[i].rho_spread);
    }

    // Uncoupled cells rotate at the natural frequencies.
    for (const winfree::SweepCell& cell : serial) {
        if (cell.kappa == 0.0) {
            CHECK(cell.label == winfree::Label::incoherence);
            CHECK(cell.rho_mean == doctest::Approx(2.0).epsilon(1e-9));
            CHECK(cell.rho_spread == doctest::Approx(2.0).epsilon(1e-9));
            CHECK(cell.note.empty());
        }
    }
}

TEST_CASE("extending the kappa grid never perturbs existing cells") {
    const winfree::SweepSpec base = tiny_spec();
    winfree::SweepSpec wider = base;
    wider.kappa_max = 0.4;  // one extra grid point

    const std::vector<winfree::SweepCell> small = winfree::run_sweep(base, 2);
    const std::vector<winfree::SweepCell> large = winfree::run_sweep(wider, 2);
    REQUIRE(large.size() == 12);

    int matched = 0;
    for (const winfree::SweepCell& a : small) {
        for (const winfree::SweepCell& b : large) {
            if (a.n == b.n && a.kappa == b.kappa && a.seed == b.seed) {
                // Same seeding key, so bitwise identical results.
                CHECK(a.rho_mean == b.rho_mean);
                CHECK(a.rho_spread == b.rho_spread);
                CHECK(a.label == b.label);
                ++matched;
            }
        }
    }
    CHECK(matched == 8);
}

TEST_CASE("a diverging cell is noted and the sweep continues") {
    winfree::SweepSpec spec = tiny_spec();
    spec.n_values = {1};
    spec.kappa_max = 0.0;
    spec.kappa_step = 1.0;
    spec.seeds = {1};
    spec.frequencies = {1e307, 1e307};
    spec.sim.dt = 0.1;
    spec.sim.t_end = 30.0;
    const std::vector<winfree::SweepCell> cells = winfree::run_sweep(spec, 1);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].label == winfree::Label::undetermined);
    CHECK(cells[0].note.rfind("diverged at t=", 0) == 0);
}

TEST_CASE("boundary extraction on hand-labelled cells") {
    using winfree::Label;
    std::vector<winfree::SweepCell> cells;
    for (int n : {1, 4, 9, 16, 25}) {
        const double root = std::sqrt(static_cast<double>(n));
        cells.push_back(cell_at(n, 1.0 / root, 1, Label::incoherence));
        cells.push_back(cell_at(n, 1.1 / root, 1, Label::locking));
    }
    const winfree::CriticalCurves curves = winfree::critical_curves(cells);
    REQUIRE(curves.points.size() == 5);
    for (const winfree::CurvePoint& point : curves.points) {
        CAPTURE(point.n);
        REQUIRE(point.kappa_i.has_value());
        CHECK(*point.kappa_i ==
              doctest::Approx(1.0 / std::sqrt(point.n)).epsilon(1e-15));
        CHECK(!point.kappa_d.has_value());
        CHECK(!point.kappa_p.has_value());
    }
    CHECK(curves.fit_points_kappa_i == 5);
    REQUIRE(curves.slope_kappa_i.has_value());
    CHECK(*curves.slope_kappa_i == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(!curves.slope_kappa_d.has_value());
}

TEST_CASE("death boundary needs a bracketed suffix run") {
    using winfree::Label;
    std::vector<winfree::SweepCell> cells;
    for (int n : {1, 4, 9}) {
        const double root = std::sqrt(static_cast<double>(n));
        cells.push_back(cell_at(n, 2.0 / root, 1, Label::locking));
        cells.push_back(cell_at(n, 3.0 / root, 1, Label::death));
    }
    const winfree::CriticalCurves curves = winfree::critical_curves(cells);
    REQUIRE(curves.points.size() == 3);
    for (const winfree::CurvePoint& point : curves.points) {
        REQUIRE(point.kappa_d.has_value());
        CHECK(*point.kappa_d ==
              doctest::Approx(3.0 / std::sqrt(point.n)).epsilon(1e-15));
        // No incoherence cells anywhere.
        CHECK(!point.kappa_i.has_value());
    }
    REQUIRE(curves.slope_kappa_d.has_value());
    CHECK(*curves.slope_kappa_d == doctest::Approx(-0.5).epsilon(1e-12));

    // All death: no lower bracket, so no boundary.
    const std::vector<winfree::SweepCell> all_death = {
        cell_at(1, 0.0, 1, Label::death), cell_at(1, 1.0, 1, Label::death)};
    CHECK(!winfree::critical_curves(all_death).points[0].kappa_d.has_value());

    // Death that does not reach the top of the grid does not count.
    const std::vector<winfree::SweepCell> interior = {
        cell_at(1, 0.0, 1, Label::locking), cell_at(1, 1.0, 1, Label::death),
        cell_at(1, 2.0, 1, Label::locking)};
    CHECK(!winfree::critical_curves(interior).points[0].kappa_d.has_value());

    // An incoherent top cell leaves the incoherence boundary unbracketed.
    const std::vector<winfree::SweepCell> open_top = {
        cell_at(1, 0.0, 1, Label::incoherence), cell_at(1, 1.0, 1, Label::incoherence)};
    CHECK(!winfree::critical_curves(open_top).points[0].kappa_i.has_value());
}

TEST_CASE("partial-locking boundary takes the first clean locking cell") {
    using winfree::Label;
    const std::vector<winfree::SweepCell> cells = {
        cell_at(2, 0.0, 1, Label::incoherence),
        cell_at(2, 1.0, 1, Label::partial_locking),
        cell_at(2, 2.0, 1, Label::locking),
        cell_at(2, 3.0, 1, Label::partial_locking),
        cell_at(2, 4.0, 1, Label::locking),
        cell_at(2, 5.0, 1, Label::locking)};
    const winfree::CriticalCurves curves = winfree::critical_curves(cells);
    REQUIRE(curves.points.size() == 1);
    REQUIRE(curves.points[0].kappa_p.has_value());
    CHECK(*curves.points[0].kappa_p == 4.0);

    // Without locking cells above the last partial cell it stays undefined.
    const std::vector<winfree::SweepCell> unresolved = {
        cell_at(2, 0.0, 1, Label::locking), cell_at(2, 1.0, 1, Label::partial_locking)};
    CHECK(!winfree::critical_curves(unresolved).points[0].kappa_p.has_value());
}

TEST_CASE("seed disagreement downgrades a column entry") {
    using winfree::Label;
    const std::vector<winfree::SweepCell> cells = {
        cell_at(1, 1.0, 1, Label::incoherence), cell_at(1, 1.0, 2, Label::incoherence),
        cell_at(1, 2.0, 1, Label::incoherence), cell_at(1, 2.0, 2, Label::locking)};
    const winfree::CriticalCurves curves = winfree::critical_curves(cells);
    REQUIRE(curves.points.size() == 1);
    REQUIRE(curves.points[0].kappa_i.has_value());
    // The contested kappa = 2 column is undetermined, so kappa = 1 wins and
    // the top of the grid no longer reads incoherence.
    CHECK(*curves.points[0].kappa_i == 1.0);
}

TEST_CASE("cells survive a CSV round trip, curves included") {
    const winfree::SweepSpec spec = tiny_spec();
    const std::vector<winfree::SweepCell> cells = winfree::run_sweep(spec, 2);

    std::stringstream stream;
    winfree::write_cells_csv(stream, cells);
    const std::vector<winfree::SweepCell> back = winfree::read_cells_csv(stream);
    REQUIRE(back.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CAPTURE(i);
        CHECK(back[i].n == cells[i].n);
        CHECK(back[i].kappa == cells[i].kappa);
        CHECK(back[i].seed == cells[i].seed);
        CHECK(back[i].label == cells[i].label);
        CHECK(back[i].rho_mean == cells[i].rho_mean);
        CHECK(back[i].rho_spread == cells[i].rho_spread);
    }

    const winfree::CriticalCurves direct = winfree::critical_curves(cells);
    const winfree::CriticalCurves reread = winfree::critical_curves(back);
    REQUIRE(direct.points.size() == reread.points.size());
    for (std::size_t i = 0; i < direct.points.size(); ++i) {
        CHECK(direct.points[i].kappa_i == reread.points[i].kappa_i);
        CHECK(direct.points[i].kappa_p == reread.points[i].kappa_p);
        CHECK(direct.points[i].kappa_d == reread.points[i].kappa_d);
    }

    std::stringstream curves_stream;
    winfree::write_curves_csv(curves_stream, direct);
    CHECK(curves_stream.str().rfind("n,kappa_i,kappa_p,kappa_d\n", 0) == 0);

    // Malformed header fails closed.
    std::stringstream bad("n,kappa,seed\n1,0,1\n");
    CHECK_THROWS_AS((void)winfree::read_cells_csv(bad), winfree::config_error);
}

}  // TEST_SUITE
