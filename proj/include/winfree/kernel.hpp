#pragma once

#include "winfree/errors.hpp"

namespace winfree {

// Influence/sensitivity pair of the pulse-coupled phase model.
//
//   I_n(theta) = a_n (1 + cos theta)^n,   S(theta) = -sin theta,
//
// with a_n chosen so that I_n integrates to 2*pi over one period:
//
//   a_n = (2n)!! / (2^n (2n-1)!!).
//
// The double-factorial ratio overflows doubles near n = 150, so a_n is held
// in log space and I_n is evaluated as exp(log(2^n a_n) + 2n log|cos(theta/2)|).
// 1 + cos theta is never formed directly; 2 cos^2(theta/2) avoids the
// cancellation near theta = pi, where I_n decays to zero without ever
// going negative.
class Kernel {
public:
    // order >= 1.
    explicit Kernel(int order);

    [[nodiscard]] int order() const { return n_; }

    // log a_n, accumulated as sum_k log(2k/(2k-1)) - n log 2.
    [[nodiscard]] double log_norm() const { return log_norm_; }
    [[nodiscard]] double norm() const;  // a_n

    // I_n(theta). Exactly zero when cos(theta/2) = 0 or the power underflows.
    // theta must be finite.
    [[nodiscard]] double influence(double theta) const;

    // S(theta) = -sin theta. theta must be finite.
    [[nodiscard]] static double sensitivity(double theta);

    // (S I_n)(theta) = -sin(theta) I_n(theta).
    [[nodiscard]] double si(double theta) const;

    // I_n'(theta) = -a_n n (1 + cos theta)^(n-1) sin theta.
    [[nodiscard]] double influence_slope(double theta) const;

    // sup I_n = I_n(0) = 2^n a_n.
    [[nodiscard]] double sup_influence() const;

    // sup_(0,pi) |S I_n|, attained at beta = arccos(n/(n+1)):
    //   a_n ((2n+1)/(n+1))^n sqrt(2n+1)/(n+1).
    [[nodiscard]] double sup_si() const;

    // sup |I_n'|, attained at arccos((n-1)/n):
    //   a_n ((2n-1)/n)^(n-1) sqrt(2n-1).
    [[nodiscard]] double sup_slope() const;

    // Minimizer of S I_n on (0, pi).
    [[nodiscard]] double beta() const;

    // For beta < alpha < pi, the unique level point alpha* in (0, beta] with
    // |S I_n|(alpha*) = |S I_n|(alpha), found by bisection. |S I_n| is
    // strictly increasing on (0, beta), so the root is simple.
    [[nodiscard]] double alpha_star(double alpha, double tol = 1e-12) const;

private:
    int n_;
    double log_norm_;  // log a_n
    double log_sup_;   // log(2^n a_n)
};

// Independent evaluation path for log a_n through lgamma:
//   log a_n = n log 2 + 2 lgamma(n+1) - lgamma(2n+1).
// Kept for cross-checking the accumulated sum.
[[nodiscard]] double log_norm_by_lgamma(int order);

}  // namespace winfree
