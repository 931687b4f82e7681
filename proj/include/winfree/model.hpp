#pragma once

#include <span>
#include <vector>

#include "winfree/kernel.hpp"

namespace winfree {

// Ensemble parameters: phase dynamics
//
//   dtheta_i/dt = nu_i + (kappa/N) sum_j I_n(theta_j) S(theta_i).
//
// The sum does not depend on i, so the right-hand side factors through the
// mean influence I_c = (1/N) sum_j I_n(theta_j) and costs O(N) per call.
struct ModelConfig {
    int order = 1;
    double kappa = 0.0;
    std::vector<double> frequencies;

    [[nodiscard]] int size() const { return static_cast<int>(frequencies.size()); }

    // kappa >= 0 and finite, at least one oscillator, finite frequencies.
    void validate() const;
};

class Model {
public:
    explicit Model(ModelConfig config);

    [[nodiscard]] const ModelConfig& config() const { return config_; }
    [[nodiscard]] const Kernel& kernel() const { return kernel_; }
    [[nodiscard]] int size() const { return config_.size(); }

    // I_c(Theta), summed in index order so results are reproducible.
    [[nodiscard]] double mean_influence(std::span<const double> theta) const;

    // Writes nu_i + kappa I_c S(theta_i) into dtheta. Throws shape_error on
    // dimension mismatch.
    void rhs(std::span<const double> theta, std::span<double> dtheta) const;

private:
    ModelConfig config_;
    Kernel kernel_;
};

}  // namespace winfree
