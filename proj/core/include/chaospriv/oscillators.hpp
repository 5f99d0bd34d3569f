#pragma once

#include <functional>
#include <span>
#include <string>

#include <Eigen/Core>

#include "chaospriv/errors.hpp"

namespace chaospriv {

// Continuous-time system dx/dt = f(x, u, t) with a scalar read-out. Systems
// with input_dimension == 0 are autonomous and ignore the input span.
struct OscillatorSystem {
  std::string name;
  std::size_t dimension = 0;
  std::size_t input_dimension = 0;
  std::size_t output_index = 0;
  std::function<void(std::span<const double> state, std::span<const double> u,
                     double t, std::span<double> dxdt)>
      rhs;
};

// Classic chaotic driver with sigma = 10, rho = 28, beta = 8/3; the drive
// signal is the first state component.
OscillatorSystem lorenz_driver();

// Responder of the form dz/dt = A z + psi(u): linear in its own state,
// arbitrary in the drive. Two copies driven by the same u(t) differ by a
// purely linear error system de/dt = A e, so a negative definite symmetric
// part of A gives exponential synchronization regardless of psi.
struct AffineResponder {
  Eigen::MatrixXd a;
  std::function<void(std::span<const double> u, std::span<double> out)> psi;
  std::string psi_name;
  std::size_t output_index = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(a.rows()); }
  OscillatorSystem system() const;
};

// The worked 2-state responder: A = diag(-1, -2.5), psi(u) = (-5 u^2,
// 50 sin u), read-out is the second state.
AffineResponder default_responder();

// Same dynamics with a caller-supplied state matrix (the psi and read-out of
// default_responder). Used to probe invalid certificates.
AffineResponder responder_with_matrix(const Eigen::MatrixXd& a);

}  // namespace chaospriv
