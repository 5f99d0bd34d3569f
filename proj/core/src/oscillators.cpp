#include "chaospriv/oscillators.hpp"

#include <cmath>

namespace chaospriv {

OscillatorSystem lorenz_driver() {
  OscillatorSystem sys;
  sys.name = "lorenz";
  sys.dimension = 3;
  sys.input_dimension = 0;
  sys.output_index = 0;
  sys.rhs = [](std::span<const double> x, std::span<const double>, double,
               std::span<double> d) {
    constexpr double sigma = 10.0;
    constexpr double rho = 28.0;
    constexpr double beta = 8.0 / 3.0;
    d[0] = sigma * (x[1] - x[0]);
    d[1] = x[0] * (rho - x[2]) - x[1];
    d[2] = x[0] * x[1] - beta * x[2];
  };
  return sys;
}

OscillatorSystem AffineResponder::system() const {
  const std::size_t n = dimension();
  if (n == 0 || a.rows() != a.cols()) {
    throw ValidationError("responder: state matrix must be square");
  }
  if (output_index >= n) {
    throw ValidationError("responder: output index out of range");
  }
  if (!psi) throw ValidationError("responder: missing drive map");
  OscillatorSystem sys;
  sys.name = "affine:" + psi_name;
  sys.dimension = n;
  sys.input_dimension = 1;
  sys.output_index = output_index;
  // Copy A by value; the responder object may not outlive the system.
  Eigen::MatrixXd m = a;
  auto drive = psi;
  sys.rhs = [m, drive, n](std::span<const double> x, std::span<const double> u,
                          double, std::span<double> d) {
    std::vector<double> forcing(n);
    drive(u, forcing);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = forcing[i];
      for (std::size_t j = 0; j < n; ++j) {
        acc += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
               x[j];
      }
      d[i] = acc;
    }
  };
  return sys;
}

AffineResponder default_responder() {
  Eigen::MatrixXd a(2, 2);
  a << -1.0, 0.0, 0.0, -2.5;
  return responder_with_matrix(a);
}

AffineResponder responder_with_matrix(const Eigen::MatrixXd& a) {
  if (a.rows() != 2 || a.cols() != 2) {
    throw ValidationError("responder: the built-in drive map has 2 states");
  }
  AffineResponder r;
  r.a = a;
  r.psi = [](std::span<const double> u, std::span<double> out) {
    out[0] = -5.0 * u[0] * u[0];
    out[1] = 50.0 * std::sin(u[0]);
  };
  r.psi_name = "quad_sin";
  r.output_index = 1;
  return r;
}

}  // namespace chaospriv
