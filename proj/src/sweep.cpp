#include "winfree/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "winfree/errors.hpp"
#include "winfree/rng.hpp"

namespace winfree {

void SweepSpec::validate() const {
    if (n_values.empty()) throw config_error("sweep: n_values must be non-empty");
    for (int n : n_values) {
        if (n < 1) throw config_error("sweep: orders must be >= 1");
    }
    if (!(kappa_step > 0.0)) throw config_error("sweep: kappa_step must be positive");
    if (!(kappa_min >= 0.0) || !(kappa_max >= kappa_min)) {
        throw config_error("sweep: need 0 <= kappa_min <= kappa_max");
    }
    if (frequencies.empty()) throw config_error("sweep: frequencies must be non-empty");
    for (double nu : frequencies) {
        if (!std::isfinite(nu)) throw config_error("sweep: frequencies must be finite");
    }
    if (!ic_phases.empty()) {
        if (ic_phases.size() != frequencies.size()) {
            throw config_error("sweep: explicit initial phases must match ensemble size");
        }
    } else if (!(ic_alpha > 0.0)) {
        throw config_error("sweep: initial box half-width must be positive");
    }
    if (seeds.empty()) throw config_error("sweep: seeds must be non-empty");
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
        throw config_error("sweep: discard_fraction must lie in [0, 1)");
    }
    try {
        sim.validate();
    } catch (const error& e) {
        throw config_error(std::string("sweep: ") + e.what());
    }
}

std::vector<double> SweepSpec::kappa_grid() const {
    // Nudge the count so kappa_max lands on the grid despite rounding.
    const int count =
        static_cast<int>(std::floor((kappa_max - kappa_min) / kappa_step + 1e-9)) + 1;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) grid[static_cast<std::size_t>(j)] = kappa_min + j * kappa_step;
    return grid;
}

namespace {

SweepCell run_cell(const SweepSpec& spec, const std::vector<double>& grid, int n_index,
                   int kappa_index, int seed_index) {
    SweepCell cell;
    cell.n = spec.n_values[static_cast<std::size_t>(n_index)];
    cell.kappa = grid[static_cast<std::size_t>(kappa_index)];
    cell.seed = spec.seeds[static_cast<std::size_t>(seed_index)];

    const auto started = std::chrono::steady_clock::now();
    try {
        ModelConfig config;
        config.order = cell.n;
        config.kappa = cell.kappa;
        config.frequencies = spec.frequencies;
        const Model model(config);

        std::vector<double> initial;
        if (!spec.ic_phases.empty()) {
            initial = spec.ic_phases;
        } else {
            SplitMix64 rng(mix_key(cell.seed, static_cast<std::uint64_t>(n_index),
                                   static_cast<std::uint64_t>(kappa_index)));
            initial.resize(spec.frequencies.size());
            for (double& theta : initial) theta = rng.uniform_open(-spec.ic_alpha, spec.ic_alpha);
        }

        const Trace trace = simulate(model, std::move(initial), spec.sim);
        const ClassificationResult result =
            classify(rotation_numbers(trace, spec.discard_fraction), spec.frequencies,
                     spec.eps_zero, spec.eps_equal);
        cell.label = result.label;
        double lo = result.rho.rho.front();
        double hi = lo;
        double sum = 0.0;
        for (double r : result.rho.rho) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sum += r;
        }
        cell.rho_mean = sum / static_cast<double>(result.rho.rho.size());
        cell.rho_spread = hi - lo;
    } catch (const divergence_error& e) {
        cell.label = Label::undetermined;
        char buf[64];
        std::snprintf(buf, sizeof buf, "diverged at t=%.6g", e.time);
        cell.note = buf;
    } catch (const error& e) {
        cell.label = Label::undetermined;
        cell.note = e.what();
    }
    cell.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return cell;
}

std::vector<SweepCell> run_sweep_impl(const SweepSpec& spec, int worker_count) {
    spec.validate();
    const std::vector<double> grid = spec.kappa_grid();
    const long long n_count = static_cast<long long>(spec.n_values.size());
    const long long k_count = static_cast<long long>(grid.size());
    const long long s_count = static_cast<long long>(spec.seeds.size());
    const long long total = n_count * k_count * s_count;

    std::vector<SweepCell> cells(static_cast<std::size_t>(total));
    if (worker_count > 0) {
#pragma omp parallel for num_threads(worker_count) schedule(dynamic)
        for (long long idx = 0; idx < total; ++idx) {
            const int si = static_cast<int>(idx % s_count);
            const int ki = static_cast<int>((idx / s_count) % k_count);
            const int ni = static_cast<int>(idx / (s_count * k_count));
            cells[static_cast<std::size_t>(idx)] = run_cell(spec, grid, ni, ki, si);
        }
    } else {
        for (long long idx = 0; idx < total; ++idx) {
            const int si = static_cast<int>(idx % s_count);
            const int ki = static_cast<int>((idx / s_count) % k_count);
            const int ni = static_cast<int>(idx / (s_count * k_count));
            cells[static_cast<std::size_t>(idx)] = run_cell(spec, grid, ni, ki, si);
        }
    }
    return cells;
}

}  // namespace

std::vector<SweepCell> run_sweep(const SweepSpec& spec, int worker_count) {
    if (worker_count < 1) throw domain_error("run_sweep: worker_count must be >= 1");
    return run_sweep_impl(spec, worker_count);
}

std::vector<SweepCell> run_sweep_serial(const SweepSpec& spec) {
    return run_sweep_impl(spec, 0);
}

CriticalCurves critical_curves(const std::vector<SweepCell>& cells) {
    // Unanimous label per (n, kappa) column entry; any disagreement across
    // seeds is treated as undetermined.
    std::map<int, std::map<double, std::optional<Label>>> columns;
    for (const SweepCell& cell : cells) {
        auto& entry = columns[cell.n][cell.kappa];
        if (!entry) {
            entry = cell.label;
        } else if (*entry != cell.label) {
            entry = Label::undetermined;
        }
    }

    CriticalCurves curves;
    for (const auto& [n, column] : columns) {
        CurvePoint point;
        point.n = n;

        std::vector<double> kappas;
        std::vector<Label> labels;
        for (const auto& [kappa, label] : column) {
            kappas.push_back(kappa);
            labels.push_back(label.value_or(Label::undetermined));
        }
        const std::size_t count = kappas.size();

        // kappa_d: smallest kappa of the death run that reaches the top of
        // the grid; needs a non-death cell below it to be bracketed.
        std::size_t death_start = count;
        while (death_start > 0 && labels[death_start - 1] == Label::death) --death_start;
        if (death_start < count && death_start > 0) point.kappa_d = kappas[death_start];

        // kappa_i: largest incoherence cell; an incoherent top-of-grid cell
        // means the transition is not bracketed.
        if (count > 0 && labels[count - 1] != Label::incoherence) {
            for (std::size_t j = 0; j + 1 < count; ++j) {
                if (labels[j] == Label::incoherence) point.kappa_i = kappas[j];
            }
        }

        // kappa_p: first locking cell after which partial locking never
        // recurs, defined only when both labels occur.
        bool any_partial = false;
        bool any_locking = false;
        for (Label label : labels) {
            any_partial = any_partial || label == Label::partial_locking;
            any_locking = any_locking || label == Label::locking;
        }
        if (any_partial && any_locking) {
            std::size_t last_partial = 0;
            for (std::size_t j = 0; j < count; ++j) {
                if (labels[j] == Label::partial_locking) last_partial = j;
            }
            for (std::size_t j = last_partial + 1; j < count; ++j) {
                if (labels[j] == Label::locking) {
                    point.kappa_p = kappas[j];
                    break;
                }
            }
        }
        curves.points.push_back(point);
    }

    const auto fit = [](const std::vector<CurvePoint>& points,
                        std::optional<double> CurvePoint::*member, int& used) {
        std::vector<double> log_n;
        std::vector<double> log_kappa;
        for (const CurvePoint& point : points) {
            const std::optional<double>& value = point.*member;
            if (value && *value > 0.0) {
                log_n.push_back(std::log(static_cast<double>(point.n)));
                log_kappa.push_back(std::log(*value));
            }
        }
        used = static_cast<int>(log_n.size());
        std::optional<double> slope;
        if (log_n.size() >= 3) slope = least_squares_slope(log_n, log_kappa);
        return slope;
    };
    curves.slope_kappa_i = fit(curves.points, &CurvePoint::kappa_i, curves.fit_points_kappa_i);
    curves.slope_kappa_d = fit(curves.points, &CurvePoint::kappa_d, curves.fit_points_kappa_d);
    return curves;
}

}  // namespace winfree
