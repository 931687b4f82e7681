#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "winfree/analysis.hpp"
#include "winfree/dynamics.hpp"

namespace winfree {

// Grid description for an (n, kappa) phase-diagram scan. Every (n, kappa,
// seed) triple becomes one independent cell.
struct SweepSpec {
    std::vector<int> n_values;
    double kappa_min = 0.0;
    double kappa_max = 0.0;
    double kappa_step = 0.0;
    std::vector<double> frequencies;
    double ic_alpha = 0.0;            // half-width of the uniform initial box
    std::vector<double> ic_phases;    // explicit initial phases override the box
    std::vector<std::uint64_t> seeds{1};
    SimOptions sim;
    double discard_fraction = 0.5;
    double eps_zero = 1e-3;
    double eps_equal = 1e-3;

    void validate() const;
    [[nodiscard]] std::vector<double> kappa_grid() const;
};

struct SweepCell {
    int n = 1;
    double kappa = 0.0;
    std::uint64_t seed = 0;
    Label label = Label::undetermined;
    double rho_mean = 0.0;
    double rho_spread = 0.0;
    double wall_time = 0.0;  // seconds, measured; writers may zero it for stable output
    std::string note;        // nonempty when the cell failed instead of classifying
};

// Runs every cell and returns them ordered by (n index, kappa index, seed
// index). Cells are written into a pre-sized vector slot keyed by their
// coordinates, so results do not depend on worker count or completion order.
// Initial phases come from a per-cell stream seeded by (seed, n index, kappa
// index): adding grid points never perturbs other cells. A diverging or
// otherwise failing cell is recorded as undetermined with a note; the sweep
// continues.
[[nodiscard]] std::vector<SweepCell> run_sweep(const SweepSpec& spec, int worker_count);

// Single-threaded reference of the same computation, kept for testing and
// benchmarking against the parallel path.
[[nodiscard]] std::vector<SweepCell> run_sweep_serial(const SweepSpec& spec);

struct CurvePoint {
    int n = 1;
    std::optional<double> kappa_i;  // largest kappa classified incoherence
    std::optional<double> kappa_p;  // first locking kappa above which partial never recurs
    std::optional<double> kappa_d;  // smallest kappa with death from there up
};

struct CriticalCurves {
    std::vector<CurvePoint> points;  // ascending n
    std::optional<double> slope_kappa_i;  // log-log slope of kappa_i vs n
    std::optional<double> slope_kappa_d;  // log-log slope of kappa_d vs n
    int fit_points_kappa_i = 0;
    int fit_points_kappa_d = 0;
};

// Pure boundary extraction from a cell list (fresh or re-read from CSV).
// Cells sharing (n, kappa) across seeds must agree unanimously on the label;
// disagreement downgrades the column entry to undetermined. A boundary whose
// transition is not bracketed inside the grid is left undefined rather than
// extrapolated. Log-log slopes need at least three usable points.
[[nodiscard]] CriticalCurves critical_curves(const std::vector<SweepCell>& cells);

}  // namespace winfree
