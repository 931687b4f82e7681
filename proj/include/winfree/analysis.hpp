#pragma once

#include <optional>
#include <string>
#include <vector>

#include "winfree/dynamics.hpp"
#include "winfree/model.hpp"

namespace winfree {

// ---------------------------------------------------------------------------
// Rotation numbers and asymptotic-state classification
// ---------------------------------------------------------------------------

struct RotationEstimate {
    std::vector<double> rho;  // per-oscillator secant slope, rad/time
    double window_start = 0.0;
    double window_end = 0.0;
    double max_residual = 0.0;  // worst deviation of theta_i from its secant line
};

// Secant slope of each lifted phase over the trace tail. The leading
// discard_fraction of the time span is dropped as transient; the residual
// quantifies how settled the tail is. Throws window_error if fewer than two
// samples survive.
[[nodiscard]] RotationEstimate rotation_numbers(const Trace& trace,
                                                double discard_fraction = 0.5);

enum class Label { death, locking, partial_locking, incoherence, undetermined };

[[nodiscard]] const char* to_string(Label label);
[[nodiscard]] std::optional<Label> label_from_string(const std::string& text);

struct ClassificationResult {
    Label label = Label::undetermined;
    RotationEstimate rho;
    double eps_zero = 1e-3;
    double eps_equal = 1e-3;
};

// Matches rotation numbers against the asymptotic patterns, first hit wins:
//   death            all |rho_i| < eps_zero
//   locking          all rho_i within eps_equal of their mean, mean nonzero
//   incoherence      every pair with distinct frequencies has distinct rho
//   partial_locking  some distinct-frequency pair shares rho, some pair does not
//   undetermined     anything else
[[nodiscard]] ClassificationResult classify(RotationEstimate est,
                                            const std::vector<double>& frequencies,
                                            double eps_zero = 1e-3,
                                            double eps_equal = 1e-3);

// ---------------------------------------------------------------------------
// Closed-form coupling thresholds
// ---------------------------------------------------------------------------

// Guaranteed-incoherence bound: min pairwise frequency gap / (2^(n+1) a_n).
[[nodiscard]] double kappa_incoherence(const ModelConfig& config);

// Persistent frequency-gap floor for pair (i, j) at the config's kappa:
//   |nu_i - nu_j| - kappa 2^(n+1) a_n.
[[nodiscard]] double omega_infinity(const ModelConfig& config, int i, int j);

// Guaranteed-death bound for initial data in B(alpha):
//   ||V||_inf / |S I_n(alpha)|.  alpha in {0, pi} has S I_n = 0.
[[nodiscard]] double kappa_death(const Kernel& kernel, double v_inf, double alpha);

// Partial-death variant for p of N oscillators: (N/p) ||V||_inf / |S I_n(alpha)|.
[[nodiscard]] double kappa_death_partial(const Kernel& kernel, double v_inf, double alpha,
                                         int p, int ensemble_size);

// Coupling ceiling of the identical-frequency contraction result:
//   nu / (2^(n+1) a_n).
[[nodiscard]] double kappa_lock(const Kernel& kernel, double nu);

// Half-spread ceiling of the same result (defined for order >= 2):
//   (pi/(2^(n+1) a_n) n/(n+1) - 2^-n) (2n-1)^(-1/2) ((2n)/(2n-1))^(n-1).
[[nodiscard]] double alpha_lock(const Kernel& kernel);

// Admissible initial half-spread at a given alpha:
//   alpha exp(-alpha sqrt(2n-1) ((2n-1)/(2n))^(n-1) - 2^(1-n)).
[[nodiscard]] double r0_bound(const Kernel& kernel, double alpha);

struct ThresholdReport {
    int order = 1;
    double kappa_used = 0.0;
    double alpha = 0.0;
    int p = 0;
    double v_inf = 0.0;
    double kappa_inc = 0.0;
    std::vector<double> kappa_inc_pairs;  // N x N, row-major, zero diagonal
    double omega_m = 0.0;                 // min-gap omega at kappa_used
    double kappa_death = 0.0;
    double kappa_death_partial = 0.0;
    double kappa_lock = 0.0;
    std::optional<double> alpha_lock;  // absent for order 1
    double r0_bound = 0.0;
    double beta = 0.0;
    std::optional<double> alpha_star;  // absent unless beta < alpha < pi
};

// Aggregates every closed-form threshold for one configuration. p must lie in
// [2, N]; alpha must avoid the zeros of S I_n.
[[nodiscard]] ThresholdReport thresholds(const ModelConfig& config, double alpha, int p);

// ---------------------------------------------------------------------------
// Trace checks
// ---------------------------------------------------------------------------

// Minimum over stored samples of |dtheta_i - dtheta_j|, with the right-hand
// side re-evaluated at the stored states.
[[nodiscard]] double check_incoherence_gap(const Trace& trace, const Model& model, int i,
                                           int j);

struct InvarianceReport {
    bool invariant = false;                  // all samples inside B(alpha)
    std::optional<double> entry_time;        // first sample inside B(alpha_star)
};

// Requires the initial sample inside B(alpha).
[[nodiscard]] InvarianceReport check_death_invariance(const Trace& trace, double alpha,
                                                      double alpha_star);

// True iff the first p oscillators stay inside (-alpha, alpha) at every
// sample and every later oscillator that enters never leaves again.
[[nodiscard]] bool check_partial_death(const Trace& trace, double alpha, int p);

// ---------------------------------------------------------------------------
// Contraction envelope of the identical-frequency ensemble
// ---------------------------------------------------------------------------

// The half-spread R, viewed as a function of the mid-phase A, is squeezed
// between the closed forms
//   L1(A) = -kappa cos A (alpha sup|I_n'| + I_n(A)) / (nu - kappa 2^n a_n)
//   L2(A) =  kappa cos A (alpha sup|I_n'| - I_n(A)) / (nu + kappa 2^n a_n)
// integrated over half-cycles of A. c1_plus/c2_plus integrate the front half
// (A in (-pi/2, pi/2), R falls), c1_minus/c2_minus the back half (R grows):
//   c1_plus = -int_front L1   c1_minus = int_back L1
//   c2_plus = -int_front L2   c2_minus = int_back L2
struct EnvelopeConstants {
    double c1_plus = 0.0;
    double c1_minus = 0.0;
    double c2_plus = 0.0;
    double c2_minus = 0.0;
};

// Adaptive quadrature of the closed forms above. Requires kappa 2^n a_n < nu.
[[nodiscard]] EnvelopeConstants envelope_constants(const Kernel& kernel, double nu,
                                                   double kappa, double alpha);
struct LockingEnvelopeReport {
    double c1_plus = 0.0;
    double c1_minus = 0.0;
    double c2_plus = 0.0;
    double c2_minus = 0.0;
    std::vector<double> t_minus, r_minus;  // crossings of A = 2 l pi - pi/2
    std::vector<double> t_plus, r_plus;    // crossings of A = 2 l pi + pi/2
    std::vector<double> front_log_ratio;   // ln R(t_l+) - ln R(t_l-), per cycle
    std::vector<double> back_log_ratio;    // ln R(t_(l+1)-) - ln R(t_l+), per cycle
    int violations = 0;
    bool bounds_hold = false;
    bool degenerate_locked = false;  // R(0) = 0: synchronized manifold
    double fitted_rate = 0.0;        // least-squares slope of ln R(t_l-) vs t_l-
    double cycle_rate = 0.0;         // mean per-cycle decrement / mean cycle span

    [[nodiscard]] int cycles() const { return static_cast<int>(front_log_ratio.size()); }
};

// Crossing times are linearly interpolated between samples. Cycles whose R
// falls below r_floor are not scored: R is a difference of lifted phases of
// similar magnitude, so values near machine cancellation carry no signal.
// Requires identical frequencies, A strictly increasing, R < alpha
// throughout, and kappa 2^n a_n < nu; violations throw hypotheses_error with
// the first offending time.
[[nodiscard]] LockingEnvelopeReport locking_envelope(const Trace& trace, const Model& model,
                                                     double alpha, double r_floor = 1e-8);

// ---------------------------------------------------------------------------
// Kernel integral certificates
// ---------------------------------------------------------------------------

// Cosine-weighted moments of cos^(2n)(A/2) over the two half-cycles, used by
// the contraction argument. Requires order >= 2.
//   back:  integral_(pi/2)^(3pi/2) (-cos A) cos^(2n)(A/2) dA  <= 2^(1-n)
//   front: integral_(-pi/2)^(pi/2) cos A cos^(2n)(A/2) dA
//            >= (n/(n+1)) (pi+2) / (2^n a_n)
//   identity: back = front - (pi/(2^n a_n)) (2n/(n+1))
struct ContractionIntegrals {
    double back_integral = 0.0;
    double back_bound = 0.0;
    double front_integral = 0.0;
    double front_bound = 0.0;
    double identity_residual = 0.0;
};

[[nodiscard]] ContractionIntegrals contraction_integrals(int order);

// One row of the invariant suite behind the verify command.
struct VerifyItem {
    std::string check;
    int order = 0;
    bool ok = false;
    double slack = 0.0;  // positive distance to the violated side
};

// Kernel and quadrature invariants for orders 1..n_max: normalization bounds,
// monotone sup ratio, closed forms against a grid-max oracle, unit-mean
// integral, the lgamma cross-check, and the contraction certificates.
[[nodiscard]] std::vector<VerifyItem> verify_invariants(int n_max,
                                                        int grid_points = 1000001);

// Slope of the least-squares line through (x, y). Needs two distinct x.
[[nodiscard]] double least_squares_slope(const std::vector<double>& x,
                                         const std::vector<double>& y);

}  // namespace winfree
