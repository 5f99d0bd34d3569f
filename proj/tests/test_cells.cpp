#include "chaospriv/cells.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

#include "chaospriv/rng.hpp"

using namespace chaospriv;

namespace {

// n + 1 samples forming an exact uniform grid on [0, 1]; quantiles of this
// set interpolate exactly.
EmpiricalDistribution uniform_grid(std::size_t n) {
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    s[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  return EmpiricalDistribution::from_samples(std::move(s), 10);
}

}  // namespace

TEST_CASE("median split on the uniform grid") {
  auto d = uniform_grid(100000);
  CellPartition cells =
      build_cells(d, Pmf(Alphabet::scalars({1, 2}), {0.5, 0.5}));
  REQUIRE(cells.boundaries.size() == 1);
  CHECK(cells.boundaries[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(!cells.empty_cell[0]);
  CHECK(!cells.empty_cell[1]);
}

TEST_CASE("quarter split on the uniform grid") {
  auto d = uniform_grid(100000);
  CellPartition cells =
      build_cells(d, Pmf(Alphabet::scalars({1, 2}), {0.25, 0.75}));
  REQUIRE(cells.boundaries.size() == 1);
  CHECK(cells.boundaries[0] == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("zero-mass symbols get flagged empty cells") {
  auto d = uniform_grid(100000);
  CellPartition cells = build_cells(
      d, Pmf(Alphabet::scalars({1, 2, 3}), {0.5, 0.0, 0.5}));
  REQUIRE(cells.boundaries.size() == 2);
  CHECK(cells.boundaries[0] == cells.boundaries[1]);
  CHECK(cells.empty_cell[1]);
  CHECK(!cells.empty_cell[0]);
  CHECK(!cells.empty_cell[2]);

  // A sample exactly on the shared boundary goes up, skipping the empty cell.
  CHECK(cell_index(cells, cells.boundaries[0]) == 2);
  // No sample can land in the empty cell.
  for (double s : {0.1, 0.4999, 0.5001, 0.9}) {
    CHECK(cell_index(cells, s) != 1);
  }
}

TEST_CASE("cell boundaries follow the right-open convention") {
  auto d = uniform_grid(1000);
  CellPartition cells = build_cells(
      d, Pmf(Alphabet::scalars({1, 2, 3}), {0.25, 0.5, 0.25}), 100);
  REQUIRE(cells.boundaries.size() == 2);

  CHECK(cell_index(cells, -100.0) == 0);            // below every boundary
  CHECK(cell_index(cells, cells.boundaries[0]) == 1);  // tie goes up
  CHECK(cell_index(cells, cells.boundaries[1]) == 2);
  CHECK(cell_index(cells, 100.0) == 2);             // top cell is unbounded

  CHECK(quantize(cells, -100.0) == 1.0);
  CHECK(quantize(cells, cells.boundaries[0]) == 2.0);
  CHECK(quantize(cells, 100.0) == 3.0);

  CHECK_THROWS_AS(cell_index(cells, std::nan("")), ValidationError);
}

TEST_CASE("quantize is monotone in the sample") {
  auto d = uniform_grid(10000);
  CellPartition cells = build_cells(
      d, Pmf(Alphabet::scalars({1, 2, 3, 4}), {0.1, 0.4, 0.3, 0.2}), 100);
  std::size_t prev = 0;
  for (double s = -0.5; s <= 1.5; s += 0.001) {
    const std::size_t idx = cell_index(cells, s);
    CHECK(idx >= prev);
    prev = idx;
  }
}

TEST_CASE("cells reproduce their target on the generating samples") {
  // Feeding the construction samples back through the quantizer recovers the
  // target masses to within the CDF's resolution.
  Rng rng(21);
  std::vector<double> samples(100000);
  for (double& s : samples) s = rng.uniform(-3.0, 7.0);
  auto d = EmpiricalDistribution::from_samples(samples, 64);

  Pmf target(Alphabet::scalars({1, 2, 3, 4, 5, 6, 7, 8, 9}),
             {0.1664, 0.1522, 0.1518, 0.1355, 0.1033, 0.0832, 0.0690, 0.0591,
              0.0795});
  CellPartition cells = build_cells(d, target);

  std::vector<double> counts(9, 0.0);
  for (double s : samples) counts[cell_index(cells, s)] += 1.0;
  double tv = 0.0;
  for (std::size_t j = 0; j < 9; ++j) {
    tv += std::abs(counts[j] / double(samples.size()) - target[j]);
  }
  CHECK(tv / 2.0 <= 1e-3);
}

TEST_CASE("build_cells enforces its sample floor") {
  auto d = uniform_grid(100);
  CHECK_THROWS_AS(
      build_cells(d, Pmf(Alphabet::scalars({1, 2}), {0.5, 0.5})),
      ValidationError);
}

TEST_CASE("build_cells rejects vector symbols") {
  auto d = uniform_grid(100000);
  Pmf target(Alphabet(2, {0, 0, 0, 1}), {0.5, 0.5});
  CHECK_THROWS_AS(build_cells(d, target), ValidationError);
}

TEST_CASE("stream extraction and determinism") {
  // Trajectory that ping-pongs between two cells every 0.1 time units.
  Trajectory tr(0.0, 0.01, 1);
  for (int k = 0; k <= 1000; ++k) {
    const double v = (k / 10) % 2 == 0 ? 0.2 : 0.8;
    const double st[] = {v};
    tr.append(st, v);
  }
  auto d = uniform_grid(100000);
  CellPartition cells =
      build_cells(d, Pmf(Alphabet::scalars({1, 2}), {0.5, 0.5}));

  auto stream = generate_stream(tr, cells, 0.1, 1, 0.0, 0, "server");
  REQUIRE(stream.indices.size() == 101);
  CHECK(stream.source == "server");
  CHECK(stream.times[0] == 0.0);
  CHECK(stream.times[1] == doctest::Approx(0.1).epsilon(1e-12));
  for (std::size_t k = 0; k < stream.indices.size(); ++k) {
    CHECK(stream.indices[k] == (k % 2 == 0 ? 0 : 1));
  }

  auto again = generate_stream(tr, cells, 0.1, 1, 0.0, 0, "server");
  CHECK(again.indices == stream.indices);
  CHECK(again.times == stream.times);

  // tau thins the stream.
  auto thin = generate_stream(tr, cells, 0.1, 2, 0.0);
  REQUIRE(thin.indices.size() == 51);
  for (std::size_t k = 0; k < thin.indices.size(); ++k) {
    CHECK(thin.indices[k] == 0);  // every second symbol, all in the low cell
  }

  // Constant trajectory inside one cell gives a constant stream.
  Trajectory flat(0.0, 0.01, 1);
  for (int k = 0; k <= 100; ++k) {
    const double st[] = {0.9};
    flat.append(st, 0.9);
  }
  auto fs = generate_stream(flat, cells, 0.1, 1, 0.0);
  for (auto idx : fs.indices) CHECK(idx == 1);

  auto freq = fs.empirical();
  CHECK(freq[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("stream grid validation") {
  Trajectory tr(0.0, 0.01, 1);
  for (int k = 0; k <= 100; ++k) {
    const double st[] = {0.5};
    tr.append(st, 0.5);
  }
  auto d = uniform_grid(100000);
  CellPartition cells =
      build_cells(d, Pmf(Alphabet::scalars({1, 2}), {0.5, 0.5}));

  CHECK_THROWS_AS(generate_stream(tr, cells, 0.015, 1, 0.0), ValidationError);
  CHECK_THROWS_AS(generate_stream(tr, cells, 0.1, 1, 0.005), ValidationError);
  CHECK_THROWS_AS(generate_stream(tr, cells, 0.1, 0, 0.0), ValidationError);
  // 11 symbols fit; 12 do not.
  CHECK(generate_stream(tr, cells, 0.1, 1, 0.0, 11).indices.size() == 11);
  CHECK_THROWS_AS(generate_stream(tr, cells, 0.1, 1, 0.0, 12),
                  ValidationError);
}
