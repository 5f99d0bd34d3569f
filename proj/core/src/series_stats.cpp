#include "chaospriv/series_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chaospriv/rng.hpp"

namespace chaospriv {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Pearson correlation of (1..n, d_1..d_n).
double corr_with_index(std::span<const double> d) {
  const std::size_t n = d.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1);
    const double y = d[i];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  const double cov = sxy - sx * sy / nn;
  const double vx = sxx - sx * sx / nn;
  const double vy = syy - sy * sy / nn;
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

}  // namespace

ZeroOneResult zero_one_chaos_test(std::span<const double> series,
                                  const ZeroOneOptions& options) {
  const std::size_t n = series.size();
  if (n < options.min_samples) {
    throw ValidationError("zero_one_chaos_test: need at least " +
                          std::to_string(options.min_samples) +
                          " samples, got " + std::to_string(n));
  }
  if (options.n_angles == 0) {
    throw ValidationError("zero_one_chaos_test: need at least one angle");
  }

  ZeroOneResult result;
  const double mean = mean_of(series);
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  if (var < 1e-24) {
    result.degenerate = true;
    result.k = 0.0;
    return result;
  }

  const std::size_t ncut = std::min(n / 10, options.max_displacement_lag);
  Rng rng(options.seed);
  std::vector<double> p(n + 1), q(n + 1);
  std::vector<double> disp(ncut);

  for (std::size_t a = 0; a < options.n_angles; ++a) {
    const double c =
        rng.uniform(std::numbers::pi / 5.0, 4.0 * std::numbers::pi / 5.0);
    result.angles.push_back(c);
    p[0] = 0.0;
    q[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = c * static_cast<double>(j + 1);
      p[j + 1] = p[j] + series[j] * std::cos(phase);
      q[j + 1] = q[j] + series[j] * std::sin(phase);
    }
    // Modified mean square displacement: the oscillatory term driven by the
    // series mean is removed so regular dynamics do not masquerade as
    // diffusion.
    const double osc_scale = mean * mean / (1.0 - std::cos(c));
    for (std::size_t lag = 1; lag <= ncut; ++lag) {
      double m = 0.0;
      for (std::size_t j = 0; j + lag <= n; ++j) {
        const double dp = p[j + lag] - p[j];
        const double dq = q[j + lag] - q[j];
        m += dp * dp + dq * dq;
      }
      m /= static_cast<double>(n - lag + 1);
      const double oscillatory =
          osc_scale * (1.0 - std::cos(static_cast<double>(lag) * c));
      disp[lag - 1] = m - oscillatory;
    }
    result.k_per_angle.push_back(corr_with_index(disp));
  }

  std::vector<double> ks = result.k_per_angle;
  std::sort(ks.begin(), ks.end());
  const std::size_t mid = ks.size() / 2;
  result.k = ks.size() % 2 == 1 ? ks[mid] : 0.5 * (ks[mid - 1] + ks[mid]);
  return result;
}

std::vector<double> autocorrelation(std::span<const double> series,
                                    std::size_t max_lag) {
  const std::size_t n = series.size();
  if (n < 2 || max_lag >= n) {
    throw ValidationError("autocorrelation: series shorter than max_lag");
  }
  const double mean = mean_of(series);
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  if (c0 <= 0.0) {
    throw ValidationError("autocorrelation: series has zero variance");
  }
  std::vector<double> rho(max_lag + 1);
  rho[0] = 1.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) {
      c += (series[t] - mean) * (series[t + lag] - mean);
    }
    rho[lag] = c / c0;
  }
  return rho;
}

std::size_t select_delay(std::span<const double> rho, double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw ValidationError("select_delay: threshold must be in (0, 1]");
  }
  for (std::size_t lag = 1; lag < rho.size(); ++lag) {
    if (std::abs(rho[lag]) <= threshold) return lag;
  }
  std::string curve;
  for (std::size_t lag = 0; lag < std::min<std::size_t>(rho.size(), 16); ++lag) {
    curve += (lag ? ", " : "") + std::to_string(rho[lag]);
  }
  throw ValidationError(
      "select_delay: no lag within max_lag meets the threshold; rho begins [" +
      curve + "]");
}

std::size_t select_delay(std::span<const double> series, double threshold,
                         std::size_t max_lag) {
  return select_delay(autocorrelation(series, max_lag), threshold);
}

EmpiricalDistribution EmpiricalDistribution::from_samples(
    std::vector<double> samples, std::size_t bin_count) {
  if (samples.empty()) {
    throw ValidationError("empirical distribution: no samples");
  }
  if (bin_count == 0) {
    throw ValidationError("empirical distribution: need at least one bin");
  }
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw ValidationError("empirical distribution: non-finite sample");
    }
  }
  EmpiricalDistribution d;
  d.sorted_ = std::move(samples);
  std::sort(d.sorted_.begin(), d.sorted_.end());
  const double lo = d.sorted_.front();
  const double hi = d.sorted_.back();
  if (lo == hi) {
    // Point mass: one degenerate bin.
    d.edges_ = {lo, hi};
    d.masses_ = {1.0};
    return d;
  }
  d.edges_.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i) {
    d.edges_[i] = lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(bin_count);
  }
  d.edges_.back() = hi;
  d.masses_.assign(bin_count, 0.0);
  const double w = 1.0 / static_cast<double>(d.sorted_.size());
  for (double v : d.sorted_) {
    auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) *
                                        static_cast<double>(bin_count));
    if (idx >= bin_count) idx = bin_count - 1;  // right edge is inclusive
    d.masses_[idx] += w;
  }
  return d;
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("quantile: probability outside [0, 1]");
  }
  const std::size_t n = sorted_.size();
  if (n == 1) return sorted_[0];
  const double h = p * static_cast<double>(n - 1);
  const auto i = static_cast<std::size_t>(h);
  if (i + 1 >= n) return sorted_.back();
  const double frac = h - static_cast<double>(i);
  return sorted_[i] + frac * (sorted_[i + 1] - sorted_[i]);
}

EmpiricalDistribution estimate_density(std::vector<double> samples,
                                       std::size_t bin_count,
                                       std::size_t min_samples) {
  if (samples.size() < min_samples) {
    throw ValidationError("estimate_density: need at least " +
                          std::to_string(min_samples) + " samples, got " +
                          std::to_string(samples.size()));
  }
  return EmpiricalDistribution::from_samples(std::move(samples), bin_count);
}

double ks_distance(const EmpiricalDistribution& a,
                   const EmpiricalDistribution& b) {
  // Evaluate both CDFs just after each sample point of either set; the sup of
  // |Fa - Fb| is attained there because both CDFs are right-continuous step
  // functions with jumps only at sample points.
  const auto sa = a.sorted_samples();
  const auto sb = b.sorted_samples();
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < sa.size() || ib < sb.size()) {
    double x;
    if (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib])) {
      x = sa[ia];
    } else {
      x = sb[ib];
    }
    while (ia < sa.size() && sa[ia] <= x) ++ia;
    while (ib < sb.size() && sb[ib] <= x) ++ib;
    const double fa = static_cast<double>(ia) / na;
    const double fb = static_cast<double>(ib) / nb;
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

StationarityReport stationarity_check(const OscillatorSystem& driver,
                                      const OscillatorSystem& responder,
                                      const StationarityOptions& options) {
  if (options.ic_count < 2) {
    throw ValidationError("stationarity_check: need at least two runs");
  }
  if (options.driver_box.size() != driver.dimension ||
      options.responder_box.size() != responder.dimension) {
    throw ValidationError("stationarity_check: IC box dimension mismatch");
  }
  if (!(options.transient < options.t_end)) {
    throw ValidationError("stationarity_check: transient must end before t_end");
  }

  const auto stride =
      static_cast<std::size_t>(std::llround(options.delta / options.dt));
  if (stride == 0 ||
      std::abs(static_cast<double>(stride) * options.dt - options.delta) >
          1e-9 * options.delta) {
    throw ValidationError("stationarity_check: delta must be a multiple of dt");
  }

  StationarityReport report;
  std::vector<EmpiricalDistribution> dists;
  dists.reserve(options.ic_count);

  for (std::size_t run = 0; run < options.ic_count; ++run) {
    Rng rng(derive_seed(options.seed, "stationarity.run." +
                                          std::to_string(run)));
    std::vector<double> driver_ic(driver.dimension);
    // Resample a driver start that is exactly at the origin (an unstable
    // equilibrium with no chaotic motion).
    for (;;) {
      double norm = 0.0;
      for (std::size_t i = 0; i < driver.dimension; ++i) {
        driver_ic[i] = rng.uniform(options.driver_box[i].first,
                                   options.driver_box[i].second);
        norm += std::abs(driver_ic[i]);
      }
      if (norm > 1e-12) break;
    }
    std::vector<double> responder_ic(responder.dimension);
    for (std::size_t i = 0; i < responder.dimension; ++i) {
      responder_ic[i] = rng.uniform(options.responder_box[i].first,
                                    options.responder_box[i].second);
    }

    IntegrateOptions io;
    io.t0 = 0.0;
    io.t_end = options.t_end;
    io.dt = options.dt;
    io.sample_stride = stride;
    auto cascade =
        integrate_cascade(driver, driver_ic, responder, {responder_ic}, io);
    const Trajectory& out = cascade.responders[0];

    std::vector<double> samples;
    double sup = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (double v : out.state(k)) sup = std::max(sup, std::abs(v));
      if (out.time(k) < options.transient) continue;
      samples.push_back(out.output(k));
    }
    if (samples.empty()) {
      throw ValidationError("stationarity_check: no samples past the transient");
    }
    report.samples_per_run = samples.size();
    auto dist =
        EmpiricalDistribution::from_samples(std::move(samples), options.bins);
    report.supports.emplace_back(dist.min(), dist.max());
    report.state_sup.push_back(sup);
    if (dist.max() - dist.min() < 1e-6) report.degenerate = true;
    dists.push_back(std::move(dist));
  }

  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = i + 1; j < dists.size(); ++j) {
      const double d = ks_distance(dists[i], dists[j]);
      if (d > report.max_ks) {
        report.max_ks = d;
        report.worst_pair = {i, j};
      }
    }
  }
  return report;
}

}  // namespace chaospriv
