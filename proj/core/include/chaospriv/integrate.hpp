#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chaospriv/oscillators.hpp"

namespace chaospriv {

// Uniformly sampled solution: sample k sits at time t0 + k * dt. Stores the
// full state row per sample plus the scalar read-out column.
class Trajectory {
 public:
  Trajectory(double t0, double dt, std::size_t state_dim);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t size() const { return outputs_.size(); }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
  double t_end() const { return size() == 0 ? t0_ : time(size() - 1); }

  std::span<const double> state(std::size_t k) const {
    return {states_.data() + k * state_dim_, state_dim_};
  }
  double output(std::size_t k) const { return outputs_[k]; }
  std::span<const double> outputs() const { return outputs_; }
  std::span<const double> states_flat() const { return states_; }

  void append(std::span<const double> state, double output);
  void reserve(std::size_t n);

 private:
  double t0_;
  double dt_;
  std::size_t state_dim_;
  std::vector<double> states_;
  std::vector<double> outputs_;
};

struct IntegrateOptions {
  double t0 = 0.0;
  double t_end = 0.0;
  double dt = 1e-3;
  // Keep every stride-th sample (including the first); the stored trajectory
  // then has step dt * stride. Long runs at fine dt stay affordable this way.
  std::size_t sample_stride = 1;
};

// Classic fixed-step 4th order Runge-Kutta. Autonomous systems only; driven
// systems go through integrate_driven or integrate_cascade so the drive
// signal is explicit. Throws DivergenceError when the state leaves the
// representable range.
Trajectory integrate(const OscillatorSystem& system,
                     std::span<const double> initial_state,
                     const IntegrateOptions& options);

// Driven integration with zero-order hold: during the step from t_k the input
// is frozen at the drive sample for t_k. The drive trajectory must share the
// grid (same dt up to 1e-12 relative, t0 not after the requested start) and
// cover the full requested span.
Trajectory integrate_driven(const OscillatorSystem& system,
                            std::span<const double> initial_state,
                            const Trajectory& drive,
                            const IntegrateOptions& options);

// Driver and several responder copies advanced in lockstep on one grid, so
// nothing needs the full driver trajectory in memory. Bit-identical to
// integrate + integrate_driven on the same grid; sampling applies to all
// outputs alike.
struct CascadeResult {
  Trajectory driver;
  std::vector<Trajectory> responders;
};
CascadeResult integrate_cascade(
    const OscillatorSystem& driver, std::span<const double> driver_state,
    const OscillatorSystem& responder,
    const std::vector<std::vector<double>>& responder_states,
    const IntegrateOptions& options);

}  // namespace chaospriv
