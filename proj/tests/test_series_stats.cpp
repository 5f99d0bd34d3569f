#include "chaospriv/series_stats.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

#include "chaospriv/oscillators.hpp"
#include "chaospriv/rng.hpp"

using namespace chaospriv;

namespace {

std::vector<double> iid_noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

std::vector<double> logistic_series(std::size_t n, double x0) {
  std::vector<double> v(n);
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    x = 4.0 * x * (1.0 - x);
    v[i] = x;
  }
  return v;
}

}  // namespace

TEST_CASE("autocorrelation basics") {
  auto noise = iid_noise(20000, 1);
  auto rho = autocorrelation(noise, 10);
  REQUIRE(rho.size() == 11);
  CHECK(rho[0] == 1.0);
  const double bound = 3.0 / std::sqrt(20000.0);
  for (std::size_t l = 1; l <= 10; ++l) CHECK(std::abs(rho[l]) <= bound);
}

TEST_CASE("autocorrelation of a sinusoid recovers its period") {
  std::vector<double> s(10000);
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = std::sin(2.0 * M_PI * double(k) / 100.0);
  }
  auto rho = autocorrelation(s, 200);
  CHECK(rho[100] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(rho[50] == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("autocorrelation rejects degenerate input") {
  std::vector<double> flat(100, 3.0);
  CHECK_THROWS_AS(autocorrelation(flat, 5), ValidationError);
  std::vector<double> two = {1.0, 2.0};
  CHECK_THROWS_AS(autocorrelation(two, 5), ValidationError);
}

TEST_CASE("delay selection") {
  // Exact AR(1) curve: first lag with 0.9^l <= 0.1 is 22.
  std::vector<double> rho(64);
  for (std::size_t l = 0; l < rho.size(); ++l) rho[l] = std::pow(0.9, double(l));
  CHECK(select_delay(rho, 0.1) == 22);
  CHECK(select_delay(rho, 1.0) == 1);

  auto noise = iid_noise(20000, 2);
  CHECK(select_delay(noise, 0.05, 50) == 1);

  // Nothing below the threshold inside the window: diagnostic failure.
  std::vector<double> slow(16, 0.5);
  slow[0] = 1.0;
  CHECK_THROWS_AS(select_delay(slow, 0.05), ValidationError);
}

TEST_CASE("empirical distribution quantiles are exact on grids") {
  // Order statistics 1..5: the interpolated quantile function hits the
  // classic textbook values.
  EmpiricalDistribution d =
      EmpiricalDistribution::from_samples({5, 1, 4, 2, 3}, 4);
  CHECK(d.quantile(0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(d.quantile(0.0) == 1.0);
  CHECK(d.quantile(1.0) == 5.0);
  CHECK(d.quantile(0.25) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.min() == 1.0);
  CHECK(d.max() == 5.0);

  CHECK(d.cdf(0.5) == 0.0);
  CHECK(d.cdf(1.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(d.cdf(2.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(d.cdf(5.0) == 1.0);
  CHECK(d.cdf(9.0) == 1.0);
}

TEST_CASE("histogram masses concentrate for uniform draws") {
  Rng rng(3);
  std::vector<double> samples(1000000);
  for (double& x : samples) x = rng.uniform();
  auto d = estimate_density(std::move(samples), 100);
  REQUIRE(d.bin_masses().size() == 100);
  double total = 0.0;
  for (double m : d.bin_masses()) {
    CHECK(m == doctest::Approx(0.01).epsilon(0.3));  // 0.01 +- 0.003
    total += m;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("histogram handles constant samples as a point mass") {
  auto d = EmpiricalDistribution::from_samples(std::vector<double>(50, 2.5), 10);
  double total = 0.0;
  for (double m : d.bin_masses()) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.min() == 2.5);
  CHECK(d.max() == 2.5);
  CHECK(d.quantile(0.7) == 2.5);
}

TEST_CASE("density estimation enforces its sample floor") {
  CHECK_THROWS_AS(estimate_density({1.0, 2.0, 3.0}, 10), ValidationError);
  CHECK_THROWS_AS(estimate_density({}, 10, 0), ValidationError);
}

TEST_CASE("ks distance") {
  auto a = EmpiricalDistribution::from_samples({1, 2, 3}, 2);
  auto b = EmpiricalDistribution::from_samples({1.5, 2.5, 3.5}, 2);
  CHECK(ks_distance(a, a) == 0.0);
  CHECK(ks_distance(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(ks_distance(b, a) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // Disjoint supports: maximal separation.
  auto lo = EmpiricalDistribution::from_samples({0, 0.1, 0.2, 0.3}, 2);
  auto hi = EmpiricalDistribution::from_samples({5, 5.1, 5.2}, 2);
  CHECK(ks_distance(lo, hi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chaos test statistics") {
  ZeroOneOptions opt;
  opt.seed = 7;

  // Regular dynamics: a clean sinusoid.
  std::vector<double> sine(6000);
  for (std::size_t k = 0; k < sine.size(); ++k) {
    sine[k] = std::sin(0.37 * double(k));
  }
  auto regular = zero_one_chaos_test(sine, opt);
  CHECK(!regular.degenerate);
  CHECK(regular.k <= 0.2);

  // Chaotic dynamics: the fully developed logistic map.
  auto chaotic = zero_one_chaos_test(logistic_series(8000, 0.3141), opt);
  CHECK(!chaotic.degenerate);
  CHECK(chaotic.k >= 0.9);

  // Constant input is defined to score zero.
  auto flat = zero_one_chaos_test(std::vector<double>(6000, 1.0), opt);
  CHECK(flat.degenerate);
  CHECK(flat.k == 0.0);

  CHECK_THROWS_AS(zero_one_chaos_test(std::vector<double>(100, 0.5), opt),
                  ValidationError);
}

TEST_CASE("stationarity runs are deterministic and flag constant drives") {
  // Constant driver: responders settle to an equilibrium, the output CDFs
  // collapse, and the check reports the degeneracy instead of passing.
  OscillatorSystem still;
  still.name = "constant";
  still.dimension = 1;
  still.input_dimension = 0;
  still.output_index = 0;
  still.rhs = [](std::span<const double>, std::span<const double>, double,
                 std::span<double> dxdt) { dxdt[0] = 0.0; };

  StationarityOptions opt;
  opt.ic_count = 2;
  opt.t_end = 60.0;
  opt.transient = 50.0;
  opt.delta = 0.05;
  opt.seed = 5;
  opt.driver_box = {{0.5, 1.5}};
  auto sys = default_responder();

  auto rep = stationarity_check(still, sys.system(), opt);
  CHECK(rep.degenerate);
  REQUIRE(rep.supports.size() == 2);
  CHECK(rep.supports[0].second - rep.supports[0].first < 1e-6);

  auto rep2 = stationarity_check(still, sys.system(), opt);
  CHECK(rep.max_ks == rep2.max_ks);
  CHECK(rep.samples_per_run == rep2.samples_per_run);
}

TEST_CASE("stationarity over a chaotic drive keeps the runs close") {
  // Short-horizon smoke version of the full ensemble: three initial
  // conditions, moderate horizon, coarse sampling.
  StationarityOptions opt;
  opt.ic_count = 3;
  opt.t_end = 250.0;
  opt.transient = 50.0;
  opt.delta = 0.05;
  opt.seed = 11;
  auto rep = stationarity_check(lorenz_driver(), default_responder().system(),
                                opt);
  CHECK(!rep.degenerate);
  CHECK(rep.samples_per_run == 4001);  // t in [50, 250] inclusive, step 0.05
  CHECK(rep.max_ks > 0.0);
  CHECK(rep.max_ks < 0.1);  // loose: short runs wobble more than the ensemble
  for (auto& s : rep.state_sup) CHECK(s < 1000.0);
}
