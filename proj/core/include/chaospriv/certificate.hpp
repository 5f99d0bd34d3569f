#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "chaospriv/oscillators.hpp"

namespace chaospriv {

// Lyapunov-style synchronization certificate. For error dynamics de/dt = J e
// and a symmetric positive definite P, let Q = (P J + J^T P) / 2. If the
// largest eigenvalue of Q stays below -c < 0 over the operating region, then
// V = e^T P e decays like exp(-alpha t) with alpha = c / lambda_max(P), and
// the error norm (hence the output error) decays at rate alpha / 2.
struct ConvergenceCertificate {
  Eigen::MatrixXd p;
  std::vector<double> q_eigenvalues;  // at the worst sampled point
  double q_max_eigenvalue = 0.0;
  double separation = 0.0;  // c = -q_max_eigenvalue when valid, else 0
  double decay_rate = 0.0;  // alpha
  double output_rate = 0.0;  // alpha / 2
  bool valid = false;
};

// Exact certificate for an affine responder: J = A everywhere, so Q is a
// single constant matrix. Throws if P is not symmetric positive definite.
ConvergenceCertificate convergence_certificate(const AffineResponder& responder,
                                               const Eigen::MatrixXd& p);

// Certificate for a general driven system via sampling: the state Jacobian is
// estimated by central differences at points drawn uniformly from the box and
// the worst Q eigenvalue over the draws is reported. Sound only up to the
// sampling resolution; exact for state-affine dynamics.
struct SampleBox {
  std::vector<std::pair<double, double>> state_bounds;
  std::pair<double, double> input_bounds{0.0, 0.0};
};
ConvergenceCertificate sampled_convergence_certificate(
    const OscillatorSystem& system, const Eigen::MatrixXd& p,
    const SampleBox& box, std::size_t n_samples, std::uint64_t seed);

}  // namespace chaospriv
