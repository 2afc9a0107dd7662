#include "anc/multichannel.hpp"

#include <cmath>

#include "anc/errors.hpp"
#include "anc/signal_gen.hpp"

namespace anc {

namespace {

Complex phase_factor(double omega0, double sample_period, double dtheta) {
  const double phase = omega0 * dtheta / kTwoPi * sample_period;
  return {std::cos(phase), std::sin(phase)};
}

double relative_to(double value, double scale) { return scale > 0.0 ? value / scale : value; }

}  // namespace

ComplexMatrix build_cancelling_control(const ComplexVector& disturbance,
                                       const ComplexMatrix& secondary,
                                       const ComplexMatrix& reconstruction,
                                       const ComplexVector& reference) {
  if (secondary.rows() != disturbance.size() || secondary.cols() != reconstruction.rows() ||
      reconstruction.rows() != reconstruction.cols() || reference.size() == 0) {
    throw DomainError("nonconforming multichannel dimensions");
  }
  const double ref_norm2 = reference.squaredNorm();
  if (!(ref_norm2 > 0.0)) throw InfeasibleCancellation("reference vector is zero");

  const ComplexMatrix plant = secondary * reconstruction;
  const Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(plant);
  const ComplexVector drive = cod.solve(disturbance);

  const double miss = (plant * drive - disturbance).norm();
  if (miss > kCancellationTolerance * std::max(disturbance.norm(), 1e-300)) {
    throw InfeasibleCancellation("disturbance is not reachable through the secondary paths");
  }
  return drive * reference.adjoint() / ref_norm2;
}

MultichannelScenario::MultichannelScenario(double omega0, double sample_period,
                                           ComplexVector reference, ComplexMatrix secondary,
                                           ComplexMatrix reconstruction, ComplexMatrix control,
                                           ComplexVector disturbance)
    : omega0_(omega0),
      sample_period_(sample_period),
      reference_(std::move(reference)),
      secondary_(std::move(secondary)),
      reconstruction_(std::move(reconstruction)),
      control_(std::move(control)),
      disturbance_(std::move(disturbance)) {
  if (!(sample_period_ > 0.0)) throw DomainError("sample period must be positive");
  if (!(omega0_ >= 0.0)) throw DomainError("tone frequency must be non-negative");
  if (reference_.size() == 0 || secondary_.size() == 0) {
    throw DomainError("multichannel scenario needs at least one channel of each kind");
  }
  if (secondary_.rows() != disturbance_.size() || secondary_.cols() != reconstruction_.rows() ||
      reconstruction_.rows() != reconstruction_.cols() ||
      control_.rows() != reconstruction_.cols() || control_.cols() != reference_.size()) {
    throw DomainError("nonconforming multichannel dimensions");
  }
  const ComplexMatrix off_diagonal =
      reconstruction_ - ComplexMatrix(reconstruction_.diagonal().asDiagonal());
  if (off_diagonal.norm() != 0.0) {
    throw DomainError("reconstruction matrix must be diagonal");
  }

  antinoise_ = secondary_ * reconstruction_ * control_ * reference_;
  premise_residual_ =
      relative_to((disturbance_ - antinoise_).norm(), disturbance_.norm());
  if (!(premise_residual_ <= kCancellationTolerance)) {
    throw PremiseViolation("scenario does not cancel at zero phase error");
  }
}

double MultichannelScenario::mean_square_disturbance() const noexcept {
  return disturbance_.squaredNorm() / static_cast<double>(disturbance_.size());
}

ComplexVector residual_vector(const MultichannelScenario& s, double dtheta) {
  return s.disturbance() -
         phase_factor(s.omega0(), s.sample_period(), dtheta) *
             (s.secondary() * s.reconstruction() * s.control() * s.reference());
}

ComplexVector residual_vector_product_form(const MultichannelScenario& s, double dtheta) {
  return s.disturbance() * (Complex{1.0, 0.0} - phase_factor(s.omega0(), s.sample_period(), dtheta));
}

ExpectedResidualPair expected_residual_power(const MultichannelScenario& s) {
  const double ratio = s.omega0() / s.omega_s();
  if (!(ratio >= 0.0) || ratio > 0.5) throw DomainError("tone frequency must lie in [0, omega_s/2]");
  const double power = s.mean_square_disturbance();
  return ExpectedResidualPair{
      .half_angle = power * one_minus_sinc(std::numbers::pi * ratio),
      .exact = 2.0 * power * one_minus_sinc(kTwoPi * ratio),
  };
}

MonteCarloEstimate multichannel_monte_carlo(const MultichannelScenario& s, std::int64_t n_draws,
                                            std::uint64_t seed) {
  expected_residual_power(s);  // domain check
  const ComplexVector d = s.disturbance();
  const ComplexVector anti = s.antinoise();
  const double omega0 = s.omega0();
  const double period = s.sample_period();
  const auto n = static_cast<double>(d.size());
  return expect_over_uniform_phase(
      [&](double dtheta) {
        return (d - phase_factor(omega0, period, dtheta) * anti).squaredNorm() / n;
      },
      n_draws, seed);
}

MultichannelScenario random_scenario(Rng& rng, int n_references, int n_sources, int n_errors,
                                     double omega0, double sample_period) {
  if (n_references < 1 || n_sources < 1 || n_errors < 1) {
    throw DomainError("channel counts must be positive");
  }
  auto gaussian = [&rng]() {
    const double re = rng.normal();
    const double im = rng.normal();
    return Complex{re, im} / std::sqrt(2.0);
  };
  auto fill = [&](Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian();
    }
    return m;
  };

  ComplexMatrix secondary = fill(n_errors, n_sources);
  ComplexMatrix reconstruction =
      ComplexMatrix::Identity(n_sources, n_sources) * Complex{sample_period, 0.0};
  ComplexVector reference = fill(n_references, 1).col(0);
  // A disturbance the loudspeakers can actually produce, at unit scale
  // independent of the reconstruction gain T.
  const ComplexVector drive = fill(n_sources, 1).col(0);
  ComplexVector disturbance = secondary * drive;
  ComplexMatrix control =
      build_cancelling_control(disturbance, secondary, reconstruction, reference);
  return MultichannelScenario(omega0, sample_period, std::move(reference), std::move(secondary),
                              std::move(reconstruction), std::move(control),
                              std::move(disturbance));
}

}  // namespace anc
