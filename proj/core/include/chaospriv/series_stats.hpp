#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "chaospriv/integrate.hpp"

namespace chaospriv {

// Binary test for chaos on a scalar time series. Each random projection
// angle c gives translation variables p_n = sum phi_j cos(jc), q_n likewise
// with sin; the modified mean square displacement of (p, q) grows linearly
// for chaotic dynamics and stays bounded for regular ones. K is the median
// over angles of the correlation between n and the displacement: near 1
// means chaotic, near 0 regular.
struct ZeroOneOptions {
  std::size_t n_angles = 100;
  std::uint64_t seed = 1;
  std::size_t min_samples = 5000;
  // Displacement lags run to min(series/10, max_displacement_lag).
  std::size_t max_displacement_lag = 1000;
};

struct ZeroOneResult {
  double k = 0.0;  // median over angles
  std::vector<double> angles;
  std::vector<double> k_per_angle;
  bool degenerate = false;  // constant input; k defined as 0
};

ZeroOneResult zero_one_chaos_test(std::span<const double> series,
                                  const ZeroOneOptions& options = {});

// Normalized autocovariance rho(0..max_lag), rho(0) = 1.
std::vector<double> autocorrelation(std::span<const double> series,
                                    std::size_t max_lag);

// Smallest lag tau >= 1 with |rho(tau)| <= threshold. The overload taking a
// series computes rho up to max_lag first; failure reports the observed
// curve so the caller can see how slowly it decays.
std::size_t select_delay(std::span<const double> rho, double threshold);
std::size_t select_delay(std::span<const double> series, double threshold,
                         std::size_t max_lag);

// Sorted-sample empirical distribution plus an equal-width histogram.
// Quantiles interpolate linearly between order statistics, so on samples
// that form a uniform grid the quantile function is exact.
class EmpiricalDistribution {
 public:
  static EmpiricalDistribution from_samples(std::vector<double> samples,
                                            std::size_t bin_count);

  double cdf(double x) const;       // fraction of samples <= x
  double quantile(double p) const;  // p in [0, 1]
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }
  std::size_t sample_count() const { return sorted_.size(); }
  std::span<const double> sorted_samples() const { return sorted_; }
  std::span<const double> bin_edges() const { return edges_; }   // bins + 1
  std::span<const double> bin_masses() const { return masses_; }

 private:
  EmpiricalDistribution() = default;
  std::vector<double> sorted_;
  std::vector<double> edges_;
  std::vector<double> masses_;
};

// Same construction with the sample-count floor for density estimation
// (histograms from fewer samples are too noisy to certify anything).
EmpiricalDistribution estimate_density(std::vector<double> samples,
                                       std::size_t bin_count,
                                       std::size_t min_samples = 10000);

// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
double ks_distance(const EmpiricalDistribution& a,
                   const EmpiricalDistribution& b);

// Monte-Carlo stationarity check: integrate the driver/responder cascade
// from ic_count seeded random initial conditions, drop the transient, sample
// the responder output every delta, and compare the runs' empirical CDFs
// pairwise. Outputs whose support collapses (width < 1e-6) mark the report
// degenerate: a convergent responder under a non-chaotic drive does exactly
// that.
struct StationarityOptions {
  std::size_t ic_count = 20;
  double dt = 1e-3;
  double t_end = 500.0;
  double delta = 0.05;
  double transient = 50.0;
  std::uint64_t seed = 1;
  std::vector<std::pair<double, double>> driver_box{
      {-20.0, 20.0}, {-20.0, 20.0}, {-20.0, 20.0}};
  std::vector<std::pair<double, double>> responder_box{{-200.0, 200.0},
                                                       {-200.0, 200.0}};
  std::size_t bins = 128;
};

struct StationarityReport {
  double max_ks = 0.0;
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  std::vector<std::pair<double, double>> supports;  // per run (min, max)
  std::vector<double> state_sup;                    // per run sup |state|
  bool degenerate = false;
  std::size_t samples_per_run = 0;
};

StationarityReport stationarity_check(const OscillatorSystem& driver,
                                      const OscillatorSystem& responder,
                                      const StationarityOptions& options);

}  // namespace chaospriv
