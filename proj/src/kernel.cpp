#include "winfree/kernel.hpp"

#include <cmath>
#include <string>

namespace winfree {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_finite(double theta) {
    if (!std::isfinite(theta)) {
        throw domain_error("phase argument must be finite");
    }
}

}  // namespace

Kernel::Kernel(int order) : n_(order) {
    if (order < 1) {
        throw invalid_order_error("kernel order must be a positive integer, got " +
                                  std::to_string(order));
    }
    double acc = 0.0;
    for (int k = 1; k <= order; ++k) {
        acc += std::log(2.0 * k / (2.0 * k - 1.0));
    }
    log_sup_ = acc;                          // log(2^n a_n)
    log_norm_ = acc - order * std::log(2.0); // log a_n
}

double Kernel::norm() const { return std::exp(log_norm_); }

double Kernel::influence(double theta) const {
    require_finite(theta);
    const double v = std::cos(0.5 * theta);
    if (v == 0.0) return 0.0;
    // I_n = 2^n a_n |cos(theta/2)|^(2n); underflow flushes to zero.
    return std::exp(log_sup_ + 2.0 * n_ * std::log(std::fabs(v)));
}

double Kernel::sensitivity(double theta) {
    require_finite(theta);
    return -std::sin(theta);
}

double Kernel::si(double theta) const {
    return sensitivity(theta) * influence(theta);
}

double Kernel::influence_slope(double theta) const {
    require_finite(theta);
    const double v = std::cos(0.5 * theta);
    if (v == 0.0) return 0.0;
    // I_n' = -n sin(theta) a_n (1+cos theta)^(n-1); same log-space route.
    const double pow_nm1 =
        std::exp(log_norm_ + (n_ - 1) * (std::log(2.0) + 2.0 * std::log(std::fabs(v))));
    return -n_ * std::sin(theta) * pow_nm1;
}

double Kernel::sup_influence() const { return std::exp(log_sup_); }

double Kernel::sup_si() const {
    const double n = n_;
    return std::exp(log_norm_ + n * std::log((2.0 * n + 1.0) / (n + 1.0))) *
           std::sqrt(2.0 * n + 1.0) / (n + 1.0);
}

double Kernel::sup_slope() const {
    const double n = n_;
    return std::exp(log_norm_ + (n - 1.0) * std::log((2.0 * n - 1.0) / n)) *
           std::sqrt(2.0 * n - 1.0);
}

double Kernel::beta() const {
    const double n = n_;
    return std::acos(n / (n + 1.0));
}

double Kernel::alpha_star(double alpha, double tol) const {
    const double b = beta();
    if (!(alpha > b) || !(alpha < kPi)) {
        throw domain_error("alpha must lie strictly between beta and pi");
    }
    const double target = -si(alpha);  // |S I_n|(alpha), positive on (0, pi)
    double lo = 0.0;
    double hi = b;
    // |S I_n| increases from 0 to its maximum on [0, beta].
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (-si(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double log_norm_by_lgamma(int order) {
    if (order < 1) {
        throw invalid_order_error("kernel order must be a positive integer");
    }
    const double n = order;
    // (2n)!! = 2^n n!, (2n-1)!! = (2n)!/(2^n n!), so
    // a_n = 2^n (n!)^2 / (2n)!.
    return n * std::log(2.0) + 2.0 * std::lgamma(n + 1.0) - std::lgamma(2.0 * n + 1.0);
}

}  // namespace winfree
