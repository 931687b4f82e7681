#pragma once

#include <span>
#include <vector>

#include "winfree/model.hpp"

namespace winfree {

enum class Integrator { euler, rk4 };

struct SimOptions {
    double dt = 1e-2;
    double t_end = 500.0;
    Integrator method = Integrator::euler;
    int stride = 1;  // record every stride-th step; the initial state is always recorded

    void validate() const;  // dt > 0, t_end > 0, stride >= 1
};

// Sampled trajectory. Phases are lifted (tracked on the real line, never
// wrapped), which keeps rotation numbers well defined.
struct Trace {
    int size = 0;                // N
    std::vector<double> times;   // M sample times
    std::vector<double> phases;  // M x N, row-major

    [[nodiscard]] int samples() const { return static_cast<int>(times.size()); }
    [[nodiscard]] double at(int sample, int i) const {
        return phases[static_cast<std::size_t>(sample) * size + i];
    }
    [[nodiscard]] std::span<const double> row(int sample) const {
        return {phases.data() + static_cast<std::size_t>(sample) * size,
                static_cast<std::size_t>(size)};
    }
};

// One forward Euler step in place. scratch must have model size.
void euler_step(const Model& model, double dt, std::vector<double>& theta,
                std::vector<double>& scratch);

// One classical four-stage Runge-Kutta step in place. scratch must hold five
// vectors of model size.
void rk4_step(const Model& model, double dt, std::vector<double>& theta,
              std::vector<std::vector<double>>& scratch);

// Integrates from the given initial phases. Pure: no global state, safe to
// run many simulations concurrently. A single run is sequential; the time
// stepping cannot be parallelized.
//
// Throws divergence_error carrying the offending time if the state turns
// non-finite; when partial is non-null the samples recorded so far are left
// in it for post-mortem output.
Trace simulate(const Model& model, std::vector<double> initial, const SimOptions& opts,
               Trace* partial = nullptr);

// Extremal-phase functionals of one sample row.
[[nodiscard]] double phase_mid(std::span<const double> theta);         // A = (max+min)/2
[[nodiscard]] double phase_halfspread(std::span<const double> theta);  // R = (max-min)/2
[[nodiscard]] double phase_diameter(std::span<const double> theta);    // D = max-min

}  // namespace winfree
