#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chaospriv/cells.hpp"
#include "chaospriv/framing.hpp"
#include "chaospriv/noise_design.hpp"

namespace chaospriv {

// Index pair (y, y_hat) that the recovery step can produce under a bounded
// synchronization error.
struct BandPair {
  std::size_t y;
  std::size_t y_hat;

  bool operator==(const BandPair&) const = default;
};

// All pairs at most one level apart: the band that applies when the
// synchronization error stays below the smallest interior cell length.
std::vector<BandPair> one_level_band(std::size_t m);

// Worst-case expected squared distortion over a band: sum of
// p_y(y) * |y - y_hat|^2 over the band's pairs. The band must contain every
// diagonal pair; those contribute zero, so a diagonal-only band gives 0.
double distortion_bound(const Pmf& p_y, std::span<const BandPair> band);

// Empirical transition matrix from paired (y, y_hat) index samples. Rows of
// y values never observed are marked undefined and excluded from the band
// check. min_pairs guards statistical use; callers aggregating their own
// session data may lower it.
struct TransitionSummary {
  Alphabet symbols;
  std::vector<double> rows;         // m*m row-normalized; zeros where undefined
  std::vector<bool> row_defined;
  std::vector<std::size_t> counts;  // m*m raw counts
  std::size_t band_violations = 0;  // observations outside the band
  bool banded = false;              // band given and no violations

  double at(std::size_t y, std::size_t y_hat) const {
    return rows[y * symbols.size() + y_hat];
  }
};

TransitionSummary transition_summary(std::span<const std::size_t> y_indices,
                                     std::span<const std::size_t> yhat_indices,
                                     const Alphabet& symbols,
                                     std::span<const BandPair> band = {},
                                     std::size_t min_pairs = 1000);

struct SessionOptions {
  std::size_t n_queries = 0;  // required
  std::size_t tau = 1;
  double t_start = 0.0;
  std::uint64_t seed = 1;
  // Use the server-side realization stream at both endpoints (perfectly
  // synchronized noise); the station trajectory argument is then unused.
  bool ideal_sync = false;
  // Band to evaluate the distortion bound and violation count against;
  // empty = no band analysis.
  std::vector<BandPair> band;
  // When set, the session appends its frames (session meta, drive chunks if
  // `drive` is given, one query/response frame per query).
  std::vector<Frame>* message_log = nullptr;
  const Trajectory* drive = nullptr;
  std::size_t drive_chunk = 4096;
};

struct DistortionReport {
  std::size_t n_queries = 0;
  double recovery_rate = 0.0;  // fraction of queries with y_hat == y
  double empirical_mse = 0.0;
  double bound = 0.0;          // distortion bound for the given band; NaN if none
  std::size_t band_violations = 0;
  bool banded = false;
  // Recoveries z - v' that landed structurally off the alphabet (further than
  // rounding dust) and had to be projected; possible only under desync.
  std::size_t out_of_alphabet = 0;
  double desync_sup = 0.0;  // max |server - station| output over used samples
  TransitionSummary transition;
  double mi_xz_plugin = 0.0;  // plug-in I[X; Z] from the (x, z) draws
  Pmf noise_empirical;        // empirical pmf of the server-side noise draws
  LogBase base = LogBase::two;
};

// One lockstep query session. Per query: draw (x, y) from the problem with a
// seeded generator, take the next noise realization v from the server stream
// and v' from the station stream, release z = y + v, recover
// y_hat = nearest alphabet point to z - v' (ties toward the lower index).
// Both output trajectories must share the sampling grid; realizations are
// consumed at t_start + k * tau * dt in the same order at both ends.
DistortionReport run_session(const NoiseDesignProblem& problem,
                             const CellPartition& partition,
                             const Trajectory& server_outputs,
                             const Trajectory& station_outputs,
                             const SessionOptions& options);

}  // namespace chaospriv
