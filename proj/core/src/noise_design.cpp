#include "chaospriv/noise_design.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace chaospriv {

namespace {

// Channel matrices for a noise vector: A(x, z) = sum_{i,j} p(y_i|x) v_j over
// pairs with y_i + y_j = z, and B(z) = sum_x p(x) A(x, z).
struct ChannelTables {
  std::vector<double> a;  // nx * nz, row-major
  std::vector<double> b;  // nz
};

ChannelTables channel_tables(const NoiseDesignProblem& p,
                             std::span<const double> v) {
  const std::size_t nx = p.p_x().size();
  const std::size_t m = p.noise_alphabet().size();
  const std::size_t nz = p.z_alphabet().size();
  ChannelTables t;
  t.a.assign(nx * nz, 0.0);
  t.b.assign(nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    auto row = p.p_y_given_x().row(x);
    for (std::size_t i = 0; i < m; ++i) {
      const double w = row[i];
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (v[j] == 0.0) continue;
        t.a[x * nz + p.z_index(i, j)] += w * v[j];
      }
    }
  }
  for (std::size_t x = 0; x < nx; ++x) {
    const double px = p.p_x()[x];
    for (std::size_t z = 0; z < nz; ++z) t.b[z] += px * t.a[x * nz + z];
  }
  return t;
}

void check_noise_vector(const NoiseDesignProblem& p,
                        std::span<const double> v) {
  if (v.size() != p.noise_alphabet().size()) {
    throw ValidationError("noise vector length does not match noise alphabet");
  }
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError("noise vector must be nonnegative and finite");
    }
  }
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

NoiseDesignProblem::NoiseDesignProblem(Pmf p_x, ConditionalPmf p_y_given_x,
                                       LogBase base)
    : p_x_([&] {
        if (p_x.alphabet() != p_y_given_x.given_alphabet()) {
          throw ValidationError(
              "noise design: p_x alphabet does not match conditional rows");
        }
        // Drop zero-mass x atoms.
        std::vector<double> w;
        std::vector<double> flat;
        const auto& a = p_x.alphabet();
        for (std::size_t i = 0; i < p_x.size(); ++i) {
          if (p_x[i] == 0.0) continue;
          w.push_back(p_x[i]);
          auto pt = a.point(i);
          flat.insert(flat.end(), pt.begin(), pt.end());
        }
        return Pmf(Alphabet(a.dimension(), std::move(flat)), std::move(w));
      }()),
      p_y_given_x_([&] {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < p_x.size(); ++i) {
          if (p_x[i] == 0.0) continue;
          auto r = p_y_given_x.row(i);
          rows.emplace_back(r.begin(), r.end());
        }
        return ConditionalPmf(p_x_.alphabet(), p_y_given_x.out_alphabet(),
                              std::move(rows));
      }()),
      base_(base),
      p_y_([&] {
        const std::size_t m = p_y_given_x_.out_alphabet().size();
        std::vector<double> w(m, 0.0);
        for (std::size_t x = 0; x < p_x_.size(); ++x) {
          for (std::size_t j = 0; j < m; ++j) {
            w[j] += p_x_[x] * p_y_given_x_.at(x, j);
          }
        }
        return Pmf(p_y_given_x_.out_alphabet(), std::move(w));
      }()),
      sumset_(sumset_with_index(p_y_given_x_.out_alphabet(),
                                p_y_given_x_.out_alphabet())) {}

double NoiseDesignProblem::baseline_mi() const {
  return mutual_information(joint_from(p_x_, p_y_given_x_), base_);
}

double noise_cost_raw(const NoiseDesignProblem& problem,
                      std::span<const double> v) {
  check_noise_vector(problem, v);
  const auto t = channel_tables(problem, v);
  const std::size_t nx = problem.p_x().size();
  const std::size_t nz = problem.z_alphabet().size();
  double cost = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const double px = problem.p_x()[x];
    for (std::size_t z = 0; z < nz; ++z) {
      const double a = t.a[x * nz + z];
      if (a <= 0.0) continue;
      cost += px * a * log_in_base(a / t.b[z], problem.base());
    }
  }
  return cost;
}

double noise_cost(const NoiseDesignProblem& problem, const Pmf& v) {
  if (v.alphabet() != problem.noise_alphabet()) {
    throw ValidationError("noise pmf alphabet does not match noise alphabet");
  }
  return noise_cost_raw(problem, v.probs());
}

std::vector<double> noise_cost_gradient(const NoiseDesignProblem& problem,
                                        std::span<const double> v) {
  check_noise_vector(problem, v);
  const auto t = channel_tables(problem, v);
  const std::size_t nx = problem.p_x().size();
  const std::size_t m = problem.noise_alphabet().size();
  const std::size_t nz = problem.z_alphabet().size();
  // d/dv_j of sum_x p(x) A log(A/B) keeps only the log factor: the terms from
  // differentiating through A and B cancel exactly because B is the p_x
  // average of the A rows.
  std::vector<double> g(m, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    const double px = problem.p_x()[x];
    auto row = problem.p_y_given_x().row(x);
    for (std::size_t i = 0; i < m; ++i) {
      const double w = row[i];
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t z = problem.z_index(i, j);
        const double a = t.a[x * nz + z];
        if (a <= 0.0) continue;  // boundary convention: skip unreachable z
        g[j] += px * w * log_in_base(a / t.b[z], problem.base());
      }
    }
  }
  return g;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) throw ValidationError("project_to_simplex: empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    css += u[k];
    const double candidate = (css - 1.0) / static_cast<double>(k + 1);
    // The largest k passing this test defines the threshold; k = 0 always
    // passes, so theta is always set.
    if (u[k] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

NoiseSolution solve_noise(const NoiseDesignProblem& problem,
                          const SolverOptions& options) {
  const std::size_t m = problem.noise_alphabet().size();
  std::vector<double> v(m, 1.0 / static_cast<double>(m));
  if (options.initial) {
    if (options.initial->alphabet() != problem.noise_alphabet()) {
      throw ValidationError("solver warm start is on the wrong alphabet");
    }
    auto p = options.initial->probs();
    v.assign(p.begin(), p.end());
  }

  double f = noise_cost_raw(problem, v);
  std::vector<double> g = noise_cost_gradient(problem, v);
  double step = 1.0;
  double pg_norm = 0.0;
  std::deque<double> history{f};
  std::size_t it = 0;
  bool converged = false;
  if (options.objective_trace) options.objective_trace->push_back(f);

  auto pg_residual = [&](std::span<const double> point,
                         std::span<const double> grad) {
    std::vector<double> shifted(point.size());
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      shifted[i] = point[i] - grad[i];
    }
    auto proj = project_to_simplex(shifted);
    for (std::size_t i = 0; i < proj.size(); ++i) proj[i] -= point[i];
    return l2_norm(proj);
  };

  pg_norm = pg_residual(v, g);
  if (pg_norm <= options.pg_tolerance) converged = true;

  while (!converged && it < options.max_iterations) {
    ++it;
    // Backtracking proximal step: accept v+ = proj(v - step * g) once the
    // sufficient decrease model holds; this keeps the objective monotone.
    std::vector<double> trial(m);
    double f_trial = f;
    bool moved = false;
    while (step >= 1e-18) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = v[i] - step * g[i];
      trial = project_to_simplex(trial);
      double quad = f;
      double dist2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = trial[i] - v[i];
        quad += g[i] * d;
        dist2 += d * d;
      }
      quad += dist2 / (2.0 * step);
      f_trial = noise_cost_raw(problem, trial);
      if (f_trial <= quad + 1e-15) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // The step collapsed below representable sizes: nothing improves.
      converged = true;
      break;
    }
    v = trial;
    f = f_trial;
    if (options.objective_trace) options.objective_trace->push_back(f);
    g = noise_cost_gradient(problem, v);
    pg_norm = pg_residual(v, g);
    history.push_back(f);
    if (history.size() > options.stall_window + 1) history.pop_front();

    if (pg_norm <= options.pg_tolerance) {
      converged = true;
    } else if (history.size() == options.stall_window + 1 &&
               history.front() - f <= options.stall_tolerance) {
      converged = true;
    }
    step = std::min(step * 2.0, 1e6);
  }

  return NoiseSolution{Pmf(problem.noise_alphabet(), std::move(v)),
                       f,
                       problem.base(),
                       it,
                       converged,
                       pg_norm};
}

NoiseSolution brute_force_solve(const NoiseDesignProblem& problem,
                                double grid_step) {
  const std::size_t m = problem.noise_alphabet().size();
  if (m > 3) {
    throw ValidationError(
        "brute force search is limited to noise alphabets of size <= 3");
  }
  if (!(grid_step > 0.0) || grid_step > 1.0) {
    throw ValidationError("brute force grid step must be in (0, 1]");
  }
  const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  std::vector<double> best;
  double best_f = 0.0;
  std::size_t evals = 0;
  std::vector<double> v(m, 0.0);

  auto consider = [&] {
    const double f = noise_cost_raw(problem, v);
    ++evals;
    if (best.empty() || f < best_f) {
      best = v;
      best_f = f;
    }
  };

  if (m == 1) {
    v[0] = 1.0;
    consider();
  } else if (m == 2) {
    for (std::size_t k = 0; k <= n; ++k) {
      v[0] = static_cast<double>(k) / static_cast<double>(n);
      v[1] = static_cast<double>(n - k) / static_cast<double>(n);
      consider();
    }
  } else {
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j + i <= n; ++j) {
        v[0] = static_cast<double>(i) / static_cast<double>(n);
        v[1] = static_cast<double>(j) / static_cast<double>(n);
        v[2] = static_cast<double>(n - i - j) / static_cast<double>(n);
        consider();
      }
    }
  }

  return NoiseSolution{Pmf(problem.noise_alphabet(), std::move(best)),
                       best_f,
                       problem.base(),
                       evals,
                       true,
                       grid_step};
}

}  // namespace chaospriv
