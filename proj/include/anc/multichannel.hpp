#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "anc/analytic_oracle.hpp"

namespace anc {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Relative tolerance on d - S H G X for a scenario to count as cancelling.
inline constexpr double kCancellationTolerance = 1e-10;

/// Minimum-norm G (sources x references) with S H G X = d at w0.
///
/// Any G meeting the constraint has G X = v with (S H) v = d; the smallest
/// such G is the rank-one v X^H / |X|^2 with v the minimum-norm solution.
/// Throws InfeasibleCancellation if d is outside the range of S H.
ComplexMatrix build_cancelling_control(const ComplexVector& disturbance,
                                       const ComplexMatrix& secondary,
                                       const ComplexMatrix& reconstruction,
                                       const ComplexVector& reference);

/// A tonal multichannel fixed-filter system evaluated at its single frequency.
/// All reference channels share one sampling clock, hence one phase factor.
class MultichannelScenario {
 public:
  /// Throws DomainError on nonconforming shapes, a non-diagonal H or a
  /// non-positive sample period, and PremiseViolation if d != S H G X.
  MultichannelScenario(double omega0, double sample_period, ComplexVector reference,
                       ComplexMatrix secondary, ComplexMatrix reconstruction,
                       ComplexMatrix control, ComplexVector disturbance);

  Eigen::Index n_references() const noexcept { return reference_.size(); }
  Eigen::Index n_sources() const noexcept { return secondary_.cols(); }
  Eigen::Index n_errors() const noexcept { return secondary_.rows(); }
  double omega0() const noexcept { return omega0_; }
  double sample_period() const noexcept { return sample_period_; }
  double omega_s() const noexcept { return kTwoPi / sample_period_; }

  const ComplexVector& reference() const noexcept { return reference_; }
  const ComplexMatrix& secondary() const noexcept { return secondary_; }
  const ComplexMatrix& reconstruction() const noexcept { return reconstruction_; }
  const ComplexMatrix& control() const noexcept { return control_; }
  const ComplexVector& disturbance() const noexcept { return disturbance_; }

  /// S H G X at w0.
  const ComplexVector& antinoise() const noexcept { return antinoise_; }
  /// |d - S H G X| / |d|.
  double premise_residual() const noexcept { return premise_residual_; }
  /// Mean of |d_i|^2 over the error microphones.
  double mean_square_disturbance() const noexcept;

 private:
  double omega0_;
  double sample_period_;
  ComplexVector reference_;
  ComplexMatrix secondary_;
  ComplexMatrix reconstruction_;
  ComplexMatrix control_;
  ComplexVector disturbance_;
  ComplexVector antinoise_;
  double premise_residual_ = 0.0;
};

/// e = d - exp(j w0 (dtheta/2pi) T) S H G X, from the matrices. dtheta is used
/// as given (not wrapped).
ComplexVector residual_vector(const MultichannelScenario& scenario, double dtheta);

/// The closed product form d (1 - exp(j w0 (dtheta/2pi) T)).
ComplexVector residual_vector_product_form(const MultichannelScenario& scenario, double dtheta);

struct ExpectedResidualPair {
  /// E{d^2} (1 - sinc(pi w0/ws)), the half-angle form.
  double half_angle = 0.0;
  /// 2 E{d^2} (1 - sinc(2 pi w0/ws)), the exact mean over dtheta ~ U[0, 2pi].
  double exact = 0.0;
};

/// Throws DomainError unless 0 <= w0 <= ws/2.
ExpectedResidualPair expected_residual_power(const MultichannelScenario& scenario);

/// Monte Carlo over dtheta of mean_i |residual_vector_i|^2.
MonteCarloEstimate multichannel_monte_carlo(const MultichannelScenario& scenario,
                                            std::int64_t n_draws, std::uint64_t seed);

/// Randomized cancelling scenario with complex Gaussian S, X and a reachable d;
/// H is T times the identity. Used by property tests and the CLI.
MultichannelScenario random_scenario(Rng& rng, int n_references, int n_sources, int n_errors,
                                     double omega0, double sample_period);

}  // namespace anc
