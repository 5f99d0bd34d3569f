#include "chaospriv/certificate.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "chaospriv/rng.hpp"

namespace chaospriv {

namespace {

void check_p(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw ValidationError("certificate: P must be square");
  }
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + p.cwiseAbs().maxCoeff())) {
    throw ValidationError("certificate: P must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw ValidationError("certificate: P must be positive definite");
  }
}

ConvergenceCertificate from_worst_q(const Eigen::MatrixXd& p,
                                    const Eigen::MatrixXd& q_worst) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_q(q_worst);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_p(p);
  ConvergenceCertificate cert;
  cert.p = p;
  cert.q_eigenvalues.assign(es_q.eigenvalues().data(),
                            es_q.eigenvalues().data() + es_q.eigenvalues().size());
  cert.q_max_eigenvalue = es_q.eigenvalues().maxCoeff();
  cert.valid = cert.q_max_eigenvalue < 0.0;
  if (cert.valid) {
    cert.separation = -cert.q_max_eigenvalue;
    cert.decay_rate = cert.separation / es_p.eigenvalues().maxCoeff();
    cert.output_rate = 0.5 * cert.decay_rate;
  }
  return cert;
}

}  // namespace

ConvergenceCertificate convergence_certificate(const AffineResponder& responder,
                                               const Eigen::MatrixXd& p) {
  check_p(p);
  if (p.rows() != responder.a.rows()) {
    throw ValidationError("certificate: P and A dimensions differ");
  }
  const Eigen::MatrixXd q =
      0.5 * (p * responder.a + responder.a.transpose() * p);
  return from_worst_q(p, q);
}

ConvergenceCertificate sampled_convergence_certificate(
    const OscillatorSystem& system, const Eigen::MatrixXd& p,
    const SampleBox& box, std::size_t n_samples, std::uint64_t seed) {
  check_p(p);
  const std::size_t n = system.dimension;
  if (box.state_bounds.size() != n) {
    throw ValidationError("certificate: sample box dimension mismatch");
  }
  if (static_cast<std::size_t>(p.rows()) != n) {
    throw ValidationError("certificate: P dimension mismatch");
  }
  if (n_samples == 0) {
    throw ValidationError("certificate: need at least one sample");
  }
  if (!system.rhs) throw ValidationError("certificate: system has no dynamics");

  Rng rng(seed);
  std::vector<double> x(n), lo(n), hi(n);
  std::vector<double> f_plus(n), f_minus(n);
  double u[1];
  Eigen::MatrixXd jac(n, n);
  Eigen::MatrixXd q_worst;
  double worst = 0.0;

  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(box.state_bounds[i].first, box.state_bounds[i].second);
    }
    u[0] = rng.uniform(box.input_bounds.first, box.input_bounds.second);
    std::span<const double> input =
        system.input_dimension == 0 ? std::span<const double>{}
                                    : std::span<const double>(u, 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      std::vector<double> xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      system.rhs(xp, input, 0.0, f_plus);
      system.rhs(xm, input, 0.0, f_minus);
      for (std::size_t i = 0; i < n; ++i) {
        jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            (f_plus[i] - f_minus[i]) / (2.0 * h);
      }
    }
    Eigen::MatrixXd q = 0.5 * (p * jac + jac.transpose() * p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    const double lam = es.eigenvalues().maxCoeff();
    if (s == 0 || lam > worst) {
      worst = lam;
      q_worst = q;
    }
  }
  return from_worst_q(p, q_worst);
}

}  // namespace chaospriv
