#include "chaospriv/integrate.hpp"

#include <cmath>
#include <string>

namespace chaospriv {

namespace {

// Scratch buffers for the four slope evaluations of one RK4 step.
struct Rk4 {
  explicit Rk4(const OscillatorSystem& system)
      : sys(&system),
        k1(system.dimension),
        k2(system.dimension),
        k3(system.dimension),
        k4(system.dimension),
        tmp(system.dimension) {}

  void step(std::vector<double>& x, std::span<const double> u, double t,
            double dt) {
    const std::size_t n = sys->dimension;
    sys->rhs(x, u, t, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    sys->rhs(tmp, u, t + 0.5 * dt, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    sys->rhs(tmp, u, t + 0.5 * dt, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    sys->rhs(tmp, u, t + dt, k4);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }

  const OscillatorSystem* sys;
  std::vector<double> k1, k2, k3, k4, tmp;
};

std::size_t checked_step_count(const IntegrateOptions& o) {
  if (!(o.dt > 0.0)) throw ValidationError("integrate: dt must be positive");
  if (!(o.t_end > o.t0)) {
    throw ValidationError("integrate: t_end must be after t0");
  }
  if (o.sample_stride == 0) {
    throw ValidationError("integrate: sample stride must be >= 1");
  }
  const double span = o.t_end - o.t0;
  const auto n = static_cast<std::size_t>(std::llround(span / o.dt));
  if (n == 0 ||
      std::abs(static_cast<double>(n) * o.dt - span) > 1e-9 * std::max(1.0, span)) {
    throw ValidationError("integrate: [t0, t_end] is not a whole number of steps");
  }
  if (n % o.sample_stride != 0) {
    throw ValidationError("integrate: step count is not a multiple of the sample stride");
  }
  return n;
}

void check_state(const OscillatorSystem& sys, std::span<const double> x0) {
  if (!sys.rhs) throw ValidationError("integrate: system has no dynamics");
  if (x0.size() != sys.dimension) {
    throw ValidationError("integrate: initial state has wrong dimension for " +
                          sys.name);
  }
}

void check_finite(std::span<const double> x, const std::string& name,
                  double t) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw DivergenceError(name + ": state diverged at t = " +
                                std::to_string(t),
                            t);
    }
  }
}

}  // namespace

Trajectory::Trajectory(double t0, double dt, std::size_t state_dim)
    : t0_(t0), dt_(dt), state_dim_(state_dim) {
  if (!(dt > 0.0)) throw ValidationError("trajectory: dt must be positive");
  if (state_dim == 0) {
    throw ValidationError("trajectory: state dimension must be >= 1");
  }
}

void Trajectory::append(std::span<const double> state, double output) {
  if (state.size() != state_dim_) {
    throw ValidationError("trajectory: appended state has wrong dimension");
  }
  states_.insert(states_.end(), state.begin(), state.end());
  outputs_.push_back(output);
}

void Trajectory::reserve(std::size_t n) {
  states_.reserve(n * state_dim_);
  outputs_.reserve(n);
}

Trajectory integrate(const OscillatorSystem& system,
                     std::span<const double> initial_state,
                     const IntegrateOptions& options) {
  check_state(system, initial_state);
  if (system.input_dimension != 0) {
    throw ValidationError("integrate: " + system.name +
                          " needs a drive signal; use integrate_driven");
  }
  const std::size_t n_steps = checked_step_count(options);
  std::vector<double> x(initial_state.begin(), initial_state.end());
  Rk4 rk(system);
  Trajectory out(options.t0, options.dt * static_cast<double>(options.sample_stride),
                 system.dimension);
  out.reserve(n_steps / options.sample_stride + 1);
  for (std::size_t k = 0;; ++k) {
    if (k % options.sample_stride == 0) out.append(x, x[system.output_index]);
    if (k == n_steps) break;
    const double t = options.t0 + static_cast<double>(k) * options.dt;
    rk.step(x, {}, t, options.dt);
    check_finite(x, system.name, t + options.dt);
  }
  return out;
}

Trajectory integrate_driven(const OscillatorSystem& system,
                            std::span<const double> initial_state,
                            const Trajectory& drive,
                            const IntegrateOptions& options) {
  check_state(system, initial_state);
  if (system.input_dimension != 1) {
    throw ValidationError("integrate_driven: " + system.name +
                          " does not take a scalar drive");
  }
  if (std::abs(drive.dt() - options.dt) >
      1e-12 * std::max(drive.dt(), options.dt)) {
    throw ValidationError("integrate_driven: drive grid step differs from dt");
  }
  const std::size_t n_steps = checked_step_count(options);
  const double offset = (options.t0 - drive.t0()) / options.dt;
  const auto first = static_cast<long long>(std::llround(offset));
  if (first < 0 || std::abs(offset - static_cast<double>(first)) > 1e-6) {
    throw ValidationError("integrate_driven: start time is not on the drive grid");
  }
  // Steps start at t_0 .. t_{n-1}, so those drive samples must exist.
  if (static_cast<std::size_t>(first) + n_steps > drive.size()) {
    throw ValidationError(
        "integrate_driven: drive trajectory does not cover the requested span");
  }

  std::vector<double> x(initial_state.begin(), initial_state.end());
  Rk4 rk(system);
  Trajectory out(options.t0, options.dt * static_cast<double>(options.sample_stride),
                 system.dimension);
  out.reserve(n_steps / options.sample_stride + 1);
  double u[1];
  for (std::size_t k = 0;; ++k) {
    if (k % options.sample_stride == 0) out.append(x, x[system.output_index]);
    if (k == n_steps) break;
    const double t = options.t0 + static_cast<double>(k) * options.dt;
    u[0] = drive.output(static_cast<std::size_t>(first) + k);
    rk.step(x, u, t, options.dt);
    check_finite(x, system.name, t + options.dt);
  }
  return out;
}

CascadeResult integrate_cascade(
    const OscillatorSystem& driver, std::span<const double> driver_state,
    const OscillatorSystem& responder,
    const std::vector<std::vector<double>>& responder_states,
    const IntegrateOptions& options) {
  check_state(driver, driver_state);
  if (driver.input_dimension != 0) {
    throw ValidationError("integrate_cascade: driver must be autonomous");
  }
  if (responder.input_dimension != 1) {
    throw ValidationError("integrate_cascade: responder must take a scalar drive");
  }
  for (const auto& s : responder_states) check_state(responder, s);
  const std::size_t n_steps = checked_step_count(options);
  const double sample_dt =
      options.dt * static_cast<double>(options.sample_stride);

  std::vector<double> xd(driver_state.begin(), driver_state.end());
  std::vector<std::vector<double>> xr = responder_states;
  Rk4 rk_driver(driver);
  Rk4 rk_responder(responder);

  CascadeResult out{Trajectory(options.t0, sample_dt, driver.dimension), {}};
  out.driver.reserve(n_steps / options.sample_stride + 1);
  out.responders.reserve(xr.size());
  for (std::size_t r = 0; r < xr.size(); ++r) {
    out.responders.emplace_back(options.t0, sample_dt, responder.dimension);
    out.responders.back().reserve(n_steps / options.sample_stride + 1);
  }

  double u[1];
  for (std::size_t k = 0;; ++k) {
    if (k % options.sample_stride == 0) {
      out.driver.append(xd, xd[driver.output_index]);
      for (std::size_t r = 0; r < xr.size(); ++r) {
        out.responders[r].append(xr[r], xr[r][responder.output_index]);
      }
    }
    if (k == n_steps) break;
    const double t = options.t0 + static_cast<double>(k) * options.dt;
    // Responders see the drive value at the step start, exactly as
    // integrate_driven replays it from a stored driver trajectory.
    u[0] = xd[driver.output_index];
    for (auto& state : xr) {
      rk_responder.step(state, u, t, options.dt);
      check_finite(state, responder.name, t + options.dt);
    }
    rk_driver.step(xd, {}, t, options.dt);
    check_finite(xd, driver.name, t + options.dt);
  }
  return out;
}

}  // namespace chaospriv
