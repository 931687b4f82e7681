#include "winfree/model.hpp"

#include <cmath>
#include <string>

#include "winfree/errors.hpp"

namespace winfree {

void ModelConfig::validate() const {
    if (frequencies.empty()) {
        throw shape_error("model needs at least one oscillator");
    }
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw domain_error("coupling strength must be finite and non-negative");
    }
    for (double nu : frequencies) {
        if (!std::isfinite(nu)) {
            throw domain_error("natural frequencies must be finite");
        }
    }
}

Model::Model(ModelConfig config) : config_(std::move(config)), kernel_(config_.order) {
    config_.validate();
}

double Model::mean_influence(std::span<const double> theta) const {
    double acc = 0.0;
    for (double t : theta) {
        acc += kernel_.influence(t);
    }
    return acc / static_cast<double>(theta.size());
}

void Model::rhs(std::span<const double> theta, std::span<double> dtheta) const {
    const auto n = static_cast<std::size_t>(size());
    if (theta.size() != n || dtheta.size() != n) {
        throw shape_error("state dimension " + std::to_string(theta.size()) +
                          " does not match model size " + std::to_string(n));
    }
    const double drive = config_.kappa * mean_influence(theta);
    for (std::size_t i = 0; i < n; ++i) {
        dtheta[i] = config_.frequencies[i] + drive * Kernel::sensitivity(theta[i]);
    }
}

}  // namespace winfree
