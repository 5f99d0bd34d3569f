#include "chaospriv/sync.hpp"

#include <cmath>
#include <limits>

namespace chaospriv {

SyncReport sync_report(const Trajectory& a, const Trajectory& b,
                       std::span<const double> thresholds, double fit_floor) {
  if (a.size() != b.size() || a.size() == 0) {
    throw ValidationError("sync_report: trajectories differ in length");
  }
  if (std::abs(a.dt() - b.dt()) > 1e-12 * std::max(a.dt(), b.dt()) ||
      std::abs(a.t0() - b.t0()) > 1e-9 * std::max(1.0, std::abs(a.t0()))) {
    throw ValidationError("sync_report: trajectories are on different grids");
  }

  static constexpr double default_thresholds[] = {1e-3, 1e-6, 1e-9};
  if (thresholds.empty()) thresholds = default_thresholds;

  SyncReport rep;
  rep.t0 = a.t0();
  rep.dt = a.dt();
  rep.fit_floor = fit_floor;
  rep.output_error.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    rep.output_error[k] = std::abs(a.output(k) - b.output(k));
  }
  rep.final_error = rep.output_error.back();

  const double inf = std::numeric_limits<double>::infinity();
  for (double eps : thresholds) {
    double hit = inf;
    for (std::size_t k = 0; k < rep.output_error.size(); ++k) {
      if (rep.output_error[k] <= eps) {
        hit = rep.t0 + static_cast<double>(k) * rep.dt;
        break;
      }
    }
    rep.threshold_times.emplace_back(eps, hit);
  }

  // Least squares line through (t, ln e) over the decay segment.
  double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t k = 0; k < rep.output_error.size(); ++k) {
    const double e = rep.output_error[k];
    if (e < fit_floor) break;
    const double t = rep.t0 + static_cast<double>(k) * rep.dt;
    const double y = std::log(e);
    n += 1.0;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double denom = n * stt - st * st;
  if (n >= 2.0 && denom > 0.0) {
    rep.fitted_rate = (n * sty - st * sy) / denom;
    rep.fit_valid = std::isfinite(rep.fitted_rate);
  } else {
    rep.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    rep.fit_valid = false;
  }
  return rep;
}

SyncReport sync_report(const AffineResponder& responder, const Trajectory& u,
                       std::span<const double> z1_0,
                       std::span<const double> z2_0, double dt, double t_end,
                       std::span<const double> thresholds, double fit_floor) {
  const OscillatorSystem sys = responder.system();
  IntegrateOptions io;
  io.t0 = u.t0();
  io.t_end = u.t0() + t_end;
  io.dt = dt;
  Trajectory a = integrate_driven(sys, z1_0, u, io);
  Trajectory b = integrate_driven(sys, z2_0, u, io);
  return sync_report(a, b, thresholds, fit_floor);
}

}  // namespace chaospriv
