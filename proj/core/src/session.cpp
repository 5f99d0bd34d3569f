#include "chaospriv/session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaospriv/json_io.hpp"
#include "chaospriv/rng.hpp"

namespace chaospriv {

std::vector<BandPair> one_level_band(std::size_t m) {
  std::vector<BandPair> band;
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) band.push_back({i, i - 1});
    band.push_back({i, i});
    if (i + 1 < m) band.push_back({i, i + 1});
  }
  return band;
}

double distortion_bound(const Pmf& p_y, std::span<const BandPair> band) {
  const std::size_t m = p_y.size();
  std::vector<bool> diagonal(m, false);
  double bound = 0.0;
  for (const BandPair& pair : band) {
    if (pair.y >= m || pair.y_hat >= m) {
      throw ValidationError("distortion_bound: band index out of range");
    }
    if (pair.y == pair.y_hat) diagonal[pair.y] = true;
    auto a = p_y.alphabet().point(pair.y);
    auto b = p_y.alphabet().point(pair.y_hat);
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      d2 += (a[k] - b[k]) * (a[k] - b[k]);
    }
    bound += p_y[pair.y] * d2;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!diagonal[i]) {
      throw ValidationError("distortion_bound: band must contain all diagonal pairs");
    }
  }
  return bound;
}

TransitionSummary transition_summary(std::span<const std::size_t> y_indices,
                                     std::span<const std::size_t> yhat_indices,
                                     const Alphabet& symbols,
                                     std::span<const BandPair> band,
                                     std::size_t min_pairs) {
  if (y_indices.size() != yhat_indices.size()) {
    throw ValidationError("transition_summary: sample vectors differ in length");
  }
  if (y_indices.size() < min_pairs) {
    throw ValidationError("transition_summary: need at least " +
                          std::to_string(min_pairs) + " pairs, got " +
                          std::to_string(y_indices.size()));
  }
  const std::size_t m = symbols.size();
  TransitionSummary s{symbols,
                      std::vector<double>(m * m, 0.0),
                      std::vector<bool>(m, false),
                      std::vector<std::size_t>(m * m, 0),
                      0,
                      false};
  for (std::size_t k = 0; k < y_indices.size(); ++k) {
    if (y_indices[k] >= m || yhat_indices[k] >= m) {
      throw ValidationError("transition_summary: symbol index out of range");
    }
    ++s.counts[y_indices[k] * m + yhat_indices[k]];
  }
  std::vector<bool> in_band;
  if (!band.empty()) {
    in_band.assign(m * m, false);
    for (const BandPair& pair : band) {
      if (pair.y >= m || pair.y_hat >= m) {
        throw ValidationError("transition_summary: band index out of range");
      }
      in_band[pair.y * m + pair.y_hat] = true;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t total = 0;
    for (std::size_t j = 0; j < m; ++j) total += s.counts[i * m + j];
    if (total == 0) continue;  // row undefined, excluded from checks
    s.row_defined[i] = true;
    for (std::size_t j = 0; j < m; ++j) {
      s.rows[i * m + j] = static_cast<double>(s.counts[i * m + j]) /
                          static_cast<double>(total);
      if (!in_band.empty() && !in_band[i * m + j]) {
        s.band_violations += s.counts[i * m + j];
      }
    }
  }
  s.banded = !band.empty() && s.band_violations == 0;
  return s;
}

namespace {

// Inverse-CDF draw over a probability row.
std::size_t draw_index(Rng& rng, std::span<const double> probs) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;  // guard against rounding at u ~ 1
}

std::string session_meta_json(const NoiseDesignProblem& problem,
                              const CellPartition& partition,
                              const SessionOptions& options, double dt) {
  JsonWriter w;
  w.begin_object();
  w.key("n_queries").value(options.n_queries);
  w.key("tau").value(options.tau);
  w.key("t_start").value(options.t_start);
  w.key("delta").value(dt);
  w.key("seed").value(options.seed);
  w.key("ideal_sync").value(options.ideal_sync);
  w.key("base").value(to_string(problem.base()));
  w.key("symbols");
  w.begin_array();
  for (double v : partition.symbols.flat()) w.value(v);
  w.end_array();
  w.end_object();
  return w.take();
}

}  // namespace

DistortionReport run_session(const NoiseDesignProblem& problem,
                             const CellPartition& partition,
                             const Trajectory& server_outputs,
                             const Trajectory& station_outputs,
                             const SessionOptions& options) {
  if (options.n_queries == 0) {
    throw ValidationError("run_session: n_queries must be >= 1");
  }
  if (partition.symbols != problem.noise_alphabet()) {
    throw ValidationError(
        "run_session: partition symbols do not match the problem's noise alphabet");
  }
  const Alphabet& y_alphabet = problem.noise_alphabet();
  const std::size_t m = y_alphabet.size();

  const Trajectory& station_src =
      options.ideal_sync ? server_outputs : station_outputs;
  if (!options.ideal_sync) {
    if (station_src.size() != server_outputs.size() ||
        std::abs(station_src.dt() - server_outputs.dt()) >
            1e-12 * server_outputs.dt() ||
        std::abs(station_src.t0() - server_outputs.t0()) >
            1e-9 * std::max(1.0, std::abs(server_outputs.t0()))) {
      throw ValidationError(
          "run_session: server and station trajectories are on different grids");
    }
  }

  const double dt = server_outputs.dt();
  RealizationStream server_stream =
      generate_stream(server_outputs, partition, dt, options.tau,
                      options.t_start, options.n_queries, "server");
  RealizationStream station_stream =
      options.ideal_sync
          ? server_stream
          : generate_stream(station_src, partition, dt, options.tau,
                            options.t_start, options.n_queries, "station");

  if (options.message_log) {
    options.message_log->push_back(
        Frame{FrameType::session_meta,
              [&] {
                const std::string meta =
                    session_meta_json(problem, partition, options, dt);
                return std::vector<std::uint8_t>(meta.begin(), meta.end());
              }()});
    if (options.drive) {
      for (std::size_t start = 0; start < options.drive->size();
           start += options.drive_chunk) {
        const std::size_t count =
            std::min(options.drive_chunk, options.drive->size() - start);
        Frame f{FrameType::drive, {}};
        put_u64le(f.payload, start);
        put_u32le(f.payload, static_cast<std::uint32_t>(count));
        for (std::size_t k = 0; k < count; ++k) {
          put_f64le(f.payload, options.drive->output(start + k));
        }
        options.message_log->push_back(std::move(f));
      }
    }
  }

  // Alphabet scale for deciding whether a raw recovery is structurally off
  // the grid (desync) rather than off by rounding dust.
  double y_scale = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    y_scale = std::max(y_scale, std::abs(y_alphabet.scalar(j)));
  }
  const double off_alphabet_tol = 1e-9 * y_scale;

  Rng rng(derive_seed(options.seed, "session.queries"));
  std::vector<std::size_t> y_draws(options.n_queries);
  std::vector<std::size_t> yhat_draws(options.n_queries);
  std::vector<std::size_t> xz_counts(
      problem.p_x().size() * problem.z_alphabet().size(), 0);
  std::vector<double> noise_counts(m, 0.0);

  std::size_t hits = 0;
  std::size_t out_of_alphabet = 0;
  double sq_sum = 0.0;
  double desync_sup = 0.0;

  for (std::size_t q = 0; q < options.n_queries; ++q) {
    const std::size_t x_idx = draw_index(rng, problem.p_x().probs());
    const std::size_t y_idx = draw_index(rng, problem.p_y_given_x().row(x_idx));
    const std::size_t v_idx = server_stream.indices[q];
    const std::size_t vp_idx = station_stream.indices[q];
    noise_counts[v_idx] += 1.0;

    const double y = y_alphabet.scalar(y_idx);
    const double v = y_alphabet.scalar(v_idx);
    const double vp = y_alphabet.scalar(vp_idx);
    const double z = y + v;
    const double yhat_raw = z - vp;

    // Recovery: nearest alphabet point, ties toward the lower index.
    std::size_t yhat_idx = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const double d = std::abs(yhat_raw - y_alphabet.scalar(j));
      if (d < best) {
        best = d;
        yhat_idx = j;
      }
    }
    if (best > off_alphabet_tol) ++out_of_alphabet;
    const double yhat = y_alphabet.scalar(yhat_idx);

    y_draws[q] = y_idx;
    yhat_draws[q] = yhat_idx;
    if (yhat_idx == y_idx) ++hits;
    sq_sum += (y - yhat) * (y - yhat);
    ++xz_counts[x_idx * problem.z_alphabet().size() +
                problem.z_index(y_idx, v_idx)];

    if (!options.ideal_sync) {
      // Streams sample both trajectories at the same grid index.
      const auto idx = static_cast<std::size_t>(std::llround(
          (server_stream.times[q] - server_outputs.t0()) / dt));
      desync_sup = std::max(
          desync_sup,
          std::abs(server_outputs.output(idx) - station_src.output(idx)));
    }

    if (options.message_log) {
      Frame f{FrameType::query_response, {}};
      put_u64le(f.payload, q);
      put_f64le(f.payload, z);
      put_f64le(f.payload, yhat);
      put_u8(f.payload, best > off_alphabet_tol ? 1 : 0);
      options.message_log->push_back(std::move(f));
    }
  }

  DistortionReport report{
      options.n_queries,
      static_cast<double>(hits) / static_cast<double>(options.n_queries),
      sq_sum / static_cast<double>(options.n_queries),
      std::numeric_limits<double>::quiet_NaN(),
      0,
      false,
      out_of_alphabet,
      desync_sup,
      transition_summary(y_draws, yhat_draws, y_alphabet, options.band, 1),
      0.0,
      Pmf(y_alphabet, std::move(noise_counts)),
      problem.base()};
  if (!options.band.empty()) {
    report.bound = distortion_bound(problem.p_y(), options.band);
    report.band_violations = report.transition.band_violations;
    report.banded = report.transition.banded;
  }

  std::vector<double> xz_weights(xz_counts.begin(), xz_counts.end());
  JointPmf xz(problem.p_x().alphabet(), problem.z_alphabet(),
              std::move(xz_weights));
  report.mi_xz_plugin = mutual_information(xz, problem.base());
  return report;
}

}  // namespace chaospriv
