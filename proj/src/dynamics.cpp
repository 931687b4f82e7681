#include "winfree/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "winfree/errors.hpp"

namespace winfree {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

void SimOptions::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw domain_error("time step must be positive and finite");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw domain_error("end time must be positive and finite");
    }
    if (stride < 1) {
        throw domain_error("sample stride must be at least 1");
    }
}

void euler_step(const Model& model, double dt, std::vector<double>& theta,
                std::vector<double>& scratch) {
    model.rhs(theta, scratch);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] += dt * scratch[i];
    }
}

void rk4_step(const Model& model, double dt, std::vector<double>& theta,
              std::vector<std::vector<double>>& scratch) {
    const std::size_t n = theta.size();
    auto& k1 = scratch[0];
    auto& k2 = scratch[1];
    auto& k3 = scratch[2];
    auto& k4 = scratch[3];
    auto& tmp = scratch[4];

    model.rhs(theta, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k1[i];
    model.rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k2[i];
    model.rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + dt * k3[i];
    model.rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
        theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

Trace simulate(const Model& model, std::vector<double> initial, const SimOptions& opts,
               Trace* partial) {
    opts.validate();
    const auto n = static_cast<std::size_t>(model.size());
    if (initial.size() != n) {
        throw shape_error("initial state dimension does not match model size");
    }

    const auto steps = static_cast<long long>(std::llround(opts.t_end / opts.dt));
    Trace trace;
    trace.size = static_cast<int>(n);
    const auto expected = static_cast<std::size_t>(steps / opts.stride + 1);
    trace.times.reserve(expected);
    trace.phases.reserve(expected * n);

    auto record = [&](long long step, const std::vector<double>& theta) {
        trace.times.push_back(step * opts.dt);
        trace.phases.insert(trace.phases.end(), theta.begin(), theta.end());
    };

    std::vector<double> theta = std::move(initial);
    std::vector<double> euler_scratch;
    std::vector<std::vector<double>> rk4_scratch;
    if (opts.method == Integrator::euler) {
        euler_scratch.resize(n);
    } else {
        rk4_scratch.assign(5, std::vector<double>(n));
    }

    if (!all_finite(theta)) {
        throw domain_error("initial phases must be finite");
    }
    record(0, theta);

    for (long long step = 1; step <= steps; ++step) {
        if (opts.method == Integrator::euler) {
            euler_step(model, opts.dt, theta, euler_scratch);
        } else {
            rk4_step(model, opts.dt, theta, rk4_scratch);
        }
        if (!all_finite(theta)) {
            const double t = step * opts.dt;
            if (partial != nullptr) *partial = std::move(trace);
            throw divergence_error(t, "state turned non-finite at t = " + std::to_string(t));
        }
        // The final state is always recorded, stride or not, so the trace
        // ends exactly at t_end.
        if (step % opts.stride == 0 || step == steps) {
            record(step, theta);
        }
    }
    return trace;
}

double phase_mid(std::span<const double> theta) {
    const auto [lo, hi] = std::minmax_element(theta.begin(), theta.end());
    return 0.5 * (*lo + *hi);
}

double phase_halfspread(std::span<const double> theta) {
    const auto [lo, hi] = std::minmax_element(theta.begin(), theta.end());
    return 0.5 * (*hi - *lo);
}

double phase_diameter(std::span<const double> theta) {
    const auto [lo, hi] = std::minmax_element(theta.begin(), theta.end());
    return *hi - *lo;
}

}  // namespace winfree
