#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chaospriv/integrate.hpp"
#include "chaospriv/probability.hpp"
#include "chaospriv/series_stats.hpp"

namespace chaospriv {

// Partition of the real line into M right-open cells, one per symbol of a
// scalar alphabet: cell j is [b_{j-1}, b_j) with b_0 = -inf, b_M = +inf.
// Boundaries are placed at quantiles of a sample distribution so the chance
// of landing in cell j equals target(j). A zero-mass symbol gets a zero-width
// (empty) cell rather than being dropped, preserving index alignment.
struct CellPartition {
  std::vector<double> boundaries;  // M - 1, non-decreasing
  Alphabet symbols;                // M scalar points, same order as target
  Pmf target;                      // the mass function the cells realize
  std::vector<bool> empty_cell;    // true where the cell has zero width
};

CellPartition build_cells(const EmpiricalDistribution& dist, const Pmf& target,
                          std::size_t min_samples = 100000);

// Index of the cell containing s; samples exactly on a boundary belong to
// the upper cell. NaN has no cell.
std::size_t cell_index(const CellPartition& partition, double s);

// The symbol value for the cell containing s.
double quantize(const CellPartition& partition, double s);

// Subsampled, quantized read-out of a responder output trajectory: symbols
// are taken at t_start + k * tau * delta for k = 0..count-1.
struct RealizationStream {
  std::vector<std::size_t> indices;  // symbol index per draw
  std::vector<double> times;
  Alphabet symbols;
  double delta = 0.0;
  std::size_t tau = 1;
  std::string source;

  // Empirical frequencies over the symbol alphabet.
  Pmf empirical() const;
};

// count = 0 means "as many as fit". delta must be a whole number of
// trajectory steps and t_start must lie on the trajectory grid.
RealizationStream generate_stream(const Trajectory& outputs,
                                  const CellPartition& partition, double delta,
                                  std::size_t tau, double t_start,
                                  std::size_t count = 0,
                                  std::string source = "");

}  // namespace chaospriv
