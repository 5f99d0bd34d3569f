#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chaospriv/probability.hpp"

namespace chaospriv {

// Additive-noise design instance: private X, disclosed Y = channel output of
// X, and a noise mass function to be chosen over the same alphabet as Y. The
// released value is Z = Y + V with V independent of (X, Y), so Z lives on the
// sumset of the Y alphabet with itself. The design objective is the mutual
// information between X and Z as a function of the noise mass function; it is
// convex in that argument, so a projected gradient method finds the global
// minimum.
class NoiseDesignProblem {
 public:
  // Rows of p_y_given_x whose x point has zero mass contribute nothing to the
  // objective; such x points are dropped here once instead of being special
  // cased everywhere downstream.
  NoiseDesignProblem(Pmf p_x, ConditionalPmf p_y_given_x, LogBase base);

  const Pmf& p_x() const { return p_x_; }
  const ConditionalPmf& p_y_given_x() const { return p_y_given_x_; }
  LogBase base() const { return base_; }
  const Pmf& p_y() const { return p_y_; }
  const Alphabet& noise_alphabet() const {
    return p_y_given_x_.out_alphabet();
  }
  const Alphabet& z_alphabet() const { return sumset_.points; }
  // Index of y_i + y_j in the z alphabet.
  std::size_t z_index(std::size_t i, std::size_t j) const {
    return sumset_.at(i, j, noise_alphabet().size());
  }

  // Baseline disclosure I[X; Y], i.e. the mutual information before noise.
  double baseline_mi() const;

 private:
  Pmf p_x_;
  ConditionalPmf p_y_given_x_;
  LogBase base_;
  Pmf p_y_;
  SumsetIndex sumset_;
};

// I[X; Z] for noise masses v on the noise alphabet. `noise_cost` requires a
// Pmf; `noise_cost_raw` evaluates the same expression for any nonnegative
// weight vector without normalizing it, which makes finite differences of the
// objective match the analytic gradient exactly (the normalization constraint
// is enforced by projection in the solver, not inside the objective).
double noise_cost(const NoiseDesignProblem& problem, const Pmf& v);
double noise_cost_raw(const NoiseDesignProblem& problem,
                      std::span<const double> v);

// Analytic gradient of noise_cost_raw; on the simplex this is the gradient of
// the design objective. Terms whose channel mass is exactly zero are skipped
// (finite subgradient convention on the boundary).
std::vector<double> noise_cost_gradient(const NoiseDesignProblem& problem,
                                        std::span<const double> v);

// Euclidean projection onto the probability simplex (sort based, exact up to
// rounding).
std::vector<double> project_to_simplex(std::span<const double> v);

struct SolverOptions {
  std::size_t max_iterations = 100000;
  // Stop when the unit-step projected gradient mapping has norm below this.
  double pg_tolerance = 1e-8;
  // ... or when the objective has decreased by less than stall_tolerance
  // over the last stall_window accepted iterations.
  std::size_t stall_window = 50;
  double stall_tolerance = 1e-12;
  // Optional warm start; must live on the noise alphabet.
  std::optional<Pmf> initial;
  // When set, receives the objective value at the start plus after every
  // accepted step (the sequence is non-increasing by construction).
  std::vector<double>* objective_trace = nullptr;
};

struct NoiseSolution {
  Pmf p_v_star;
  double optimal_value;  // I[X; Z] at p_v_star, in `base`
  LogBase base;
  std::size_t iterations;
  bool converged;
  // Norm of the projected gradient mapping at the final iterate. For the
  // brute force solver this field reports the grid resolution instead.
  double kkt_residual;
};

// Projected gradient descent with backtracking line search from the uniform
// mass function. Monotone in the objective; converged=false only when the
// iteration limit is hit.
NoiseSolution solve_noise(const NoiseDesignProblem& problem,
                          const SolverOptions& options = {});

// Exhaustive search over the simplex grid with the given step. Costs
// O((1/step)^(M-1)) evaluations, so it is restricted to noise alphabets with
// at most 3 points; it exists to cross check the solver, not to be fast.
NoiseSolution brute_force_solve(const NoiseDesignProblem& problem,
                                double grid_step);

}  // namespace chaospriv
