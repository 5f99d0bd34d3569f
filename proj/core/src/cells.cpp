#include "chaospriv/cells.hpp"

#include <algorithm>
#include <cmath>

namespace chaospriv {

CellPartition build_cells(const EmpiricalDistribution& dist, const Pmf& target,
                          std::size_t min_samples) {
  if (target.alphabet().dimension() != 1) {
    throw ValidationError("build_cells: symbols must be scalar");
  }
  if (dist.sample_count() < min_samples) {
    throw ValidationError("build_cells: CDF needs at least " +
                          std::to_string(min_samples) + " samples, got " +
                          std::to_string(dist.sample_count()));
  }
  const std::size_t m = target.size();
  CellPartition part{{}, target.alphabet(), target, std::vector<bool>(m, false)};
  part.boundaries.reserve(m - 1);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    cum += target[i];
    part.boundaries.push_back(dist.quantile(std::min(cum, 1.0)));
    if (target[i] == 0.0) part.empty_cell[i] = true;
  }
  if (m > 0 && target[m - 1] == 0.0) part.empty_cell[m - 1] = true;
  // Quantiles of a non-decreasing CDF are non-decreasing, but rounding could
  // in principle leave a hairline inversion; clamp to keep the invariant.
  for (std::size_t i = 1; i < part.boundaries.size(); ++i) {
    if (part.boundaries[i] < part.boundaries[i - 1]) {
      part.boundaries[i] = part.boundaries[i - 1];
    }
  }
  return part;
}

std::size_t cell_index(const CellPartition& partition, double s) {
  if (std::isnan(s)) throw ValidationError("quantize: NaN sample");
  // Right-open cells: the cell index equals the number of boundaries <= s,
  // so a sample exactly on b_i goes to cell i+1, and zero-width cells
  // (b_{i-1} == b_i) can never be selected.
  const auto it = std::upper_bound(partition.boundaries.begin(),
                                   partition.boundaries.end(), s);
  return static_cast<std::size_t>(it - partition.boundaries.begin());
}

double quantize(const CellPartition& partition, double s) {
  return partition.symbols.scalar(cell_index(partition, s));
}

Pmf RealizationStream::empirical() const {
  std::vector<double> counts(symbols.size(), 0.0);
  for (std::size_t idx : indices) counts[idx] += 1.0;
  return Pmf(symbols, std::move(counts));
}

RealizationStream generate_stream(const Trajectory& outputs,
                                  const CellPartition& partition, double delta,
                                  std::size_t tau, double t_start,
                                  std::size_t count, std::string source) {
  if (tau == 0) throw ValidationError("generate_stream: tau must be >= 1");
  const auto stride = static_cast<std::size_t>(std::llround(delta / outputs.dt()));
  if (stride == 0 ||
      std::abs(static_cast<double>(stride) * outputs.dt() - delta) >
          1e-9 * delta) {
    throw ValidationError(
        "generate_stream: delta must be a whole number of trajectory steps");
  }
  const double offset = (t_start - outputs.t0()) / outputs.dt();
  const auto first = static_cast<long long>(std::llround(offset));
  if (first < 0 || std::abs(offset - static_cast<double>(first)) > 1e-6) {
    throw ValidationError("generate_stream: t_start is not on the trajectory grid");
  }
  const std::size_t step = tau * stride;
  const std::size_t start = static_cast<std::size_t>(first);
  if (start >= outputs.size()) {
    throw ValidationError("generate_stream: t_start is past the trajectory end");
  }
  const std::size_t available = (outputs.size() - 1 - start) / step + 1;
  if (count == 0) count = available;
  if (count > available) {
    throw ValidationError("generate_stream: trajectory supports only " +
                          std::to_string(available) + " of " +
                          std::to_string(count) + " requested symbols");
  }

  RealizationStream stream{{}, {}, partition.symbols, delta, tau,
                           std::move(source)};
  stream.indices.reserve(count);
  stream.times.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t idx = start + k * step;
    stream.indices.push_back(cell_index(partition, outputs.output(idx)));
    stream.times.push_back(outputs.time(idx));
  }
  return stream;
}

}  // namespace chaospriv
