#include "chaospriv/probability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace chaospriv {

namespace {

void check_weights(std::span<const double> w, const char* what) {
  double sum = 0.0;
  for (double v : w) {
    if (!std::isfinite(v)) {
      throw ValidationError(std::string(what) + ": non-finite weight");
    }
    if (v < 0.0) {
      throw ValidationError(std::string(what) + ": negative weight");
    }
    sum += v;
  }
  if (sum <= 0.0) {
    throw ValidationError(std::string(what) + ": weights sum to zero");
  }
}

void normalize(std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
}

}  // namespace

double log_in_base(double x, LogBase base) {
  return base == LogBase::two ? std::log2(x) : std::log(x);
}

const char* to_string(LogBase base) { return base == LogBase::two ? "2" : "e"; }

LogBase log_base_from_string(const std::string& s) {
  if (s == "2") return LogBase::two;
  if (s == "e") return LogBase::e;
  throw ValidationError("log base must be \"2\" or \"e\", got \"" + s + "\"");
}

Alphabet::Alphabet(std::size_t dimension, std::vector<double> flat_points)
    : dim_(dimension), flat_(std::move(flat_points)) {
  if (dim_ == 0) throw ValidationError("alphabet: dimension must be >= 1");
  if (flat_.empty() || flat_.size() % dim_ != 0) {
    throw ValidationError("alphabet: point data is empty or ragged");
  }
  for (double v : flat_) {
    if (!std::isfinite(v)) {
      throw ValidationError("alphabet: non-finite coordinate");
    }
  }
  // Points must be pairwise distinct (exact comparison). Sorting index
  // vectors keeps this O(n log n) instead of quadratic.
  const std::size_t n = size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        flat_.begin() + a * dim_, flat_.begin() + (a + 1) * dim_,
        flat_.begin() + b * dim_, flat_.begin() + (b + 1) * dim_);
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t k = 1; k < n; ++k) {
    if (!less(order[k - 1], order[k])) {
      throw ValidationError("alphabet: duplicate point");
    }
  }
}

Alphabet::Alphabet(const std::vector<std::vector<double>>& points)
    : Alphabet(points.empty() ? 0 : points.front().size(), [&] {
        std::vector<double> flat;
        for (const auto& p : points) {
          if (p.size() != points.front().size()) {
            throw ValidationError("alphabet: points of mixed dimension");
          }
          flat.insert(flat.end(), p.begin(), p.end());
        }
        return flat;
      }()) {}

Alphabet Alphabet::scalars(std::vector<double> values) {
  return Alphabet(1, std::move(values));
}

double Alphabet::scalar(std::size_t i) const {
  if (dim_ != 1) {
    throw ValidationError("alphabet: scalar() needs dimension 1");
  }
  return flat_[i];
}

std::optional<std::size_t> Alphabet::index_of(std::span<const double> p) const {
  if (p.size() != dim_) return std::nullopt;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::equal(p.begin(), p.end(), flat_.begin() + i * dim_)) return i;
  }
  return std::nullopt;
}

bool Alphabet::operator==(const Alphabet& other) const {
  return dim_ == other.dim_ && flat_ == other.flat_;
}

SumsetIndex sumset_with_index(const Alphabet& lhs, const Alphabet& rhs) {
  if (lhs.dimension() != rhs.dimension()) {
    throw ValidationError("sumset: operand dimensions differ");
  }
  const std::size_t d = lhs.dimension();
  // Map each distinct sum to its final index after the lexicographic sort.
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<std::vector<double>> sums(lhs.size() * rhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      auto& s = sums[i * rhs.size() + j];
      s.resize(d);
      for (std::size_t k = 0; k < d; ++k) {
        s[k] = lhs.point(i)[k] + rhs.point(j)[k];
      }
      seen.emplace(s, 0);
    }
  }
  std::vector<double> flat;
  std::size_t next = 0;
  for (auto& [point, idx] : seen) {  // std::map iterates in sorted order
    idx = next++;
    flat.insert(flat.end(), point.begin(), point.end());
  }
  SumsetIndex out{Alphabet(d, std::move(flat)), {}};
  out.index.resize(lhs.size() * rhs.size());
  for (std::size_t k = 0; k < sums.size(); ++k) {
    out.index[k] = seen.at(sums[k]);
  }
  return out;
}

Alphabet sumset_alphabet(const Alphabet& lhs, const Alphabet& rhs) {
  return sumset_with_index(lhs, rhs).points;
}

Pmf::Pmf(Alphabet alphabet, std::vector<double> weights)
    : alphabet_(std::move(alphabet)), probs_(std::move(weights)) {
  if (probs_.size() != alphabet_.size()) {
    throw ValidationError("pmf: weight count does not match alphabet size");
  }
  check_weights(probs_, "pmf");
  normalize(probs_);
}

JointPmf::JointPmf(Alphabet row_alphabet, Alphabet col_alphabet,
                   std::vector<double> weights)
    : rows_(std::move(row_alphabet)),
      cols_(std::move(col_alphabet)),
      probs_(std::move(weights)) {
  if (probs_.size() != rows_.size() * cols_.size()) {
    throw ValidationError("joint pmf: weight count is not rows * cols");
  }
  check_weights(probs_, "joint pmf");
  normalize(probs_);
}

ConditionalPmf::ConditionalPmf(Alphabet given_alphabet, Alphabet out_alphabet,
                               std::vector<std::vector<double>> rows)
    : given_(std::move(given_alphabet)), out_(std::move(out_alphabet)) {
  if (rows.size() != given_.size()) {
    throw ValidationError("conditional pmf: row count mismatch");
  }
  probs_.reserve(given_.size() * out_.size());
  for (auto& row : rows) {
    if (row.size() != out_.size()) {
      throw ValidationError("conditional pmf: row length mismatch");
    }
    check_weights(row, "conditional pmf row");
    normalize(row);
    probs_.insert(probs_.end(), row.begin(), row.end());
  }
}

Pmf marginal(const JointPmf& joint, Axis axis) {
  const std::size_t nr = joint.row_alphabet().size();
  const std::size_t nc = joint.col_alphabet().size();
  if (axis == Axis::row) {
    std::vector<double> w(nr, 0.0);
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = 0; j < nc; ++j) w[i] += joint.at(i, j);
    }
    return Pmf(joint.row_alphabet(), std::move(w));
  }
  std::vector<double> w(nc, 0.0);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) w[j] += joint.at(i, j);
  }
  return Pmf(joint.col_alphabet(), std::move(w));
}

JointPmf joint_from(const Pmf& p_x, const ConditionalPmf& p_y_given_x) {
  if (p_x.alphabet() != p_y_given_x.given_alphabet()) {
    throw ValidationError("joint_from: conditioning alphabet mismatch");
  }
  const std::size_t nr = p_x.size();
  const std::size_t nc = p_y_given_x.out_alphabet().size();
  std::vector<double> w(nr * nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      w[i * nc + j] = p_x[i] * p_y_given_x.at(i, j);
    }
  }
  return JointPmf(p_x.alphabet(), p_y_given_x.out_alphabet(), std::move(w));
}

ConditionalPmf conditional_from(const JointPmf& joint,
                                std::vector<std::size_t>* kept) {
  Pmf px = marginal(joint, Axis::row);
  const std::size_t nc = joint.col_alphabet().size();
  const std::size_t d = joint.row_alphabet().dimension();
  std::vector<double> flat;
  std::vector<std::vector<double>> rows;
  if (kept) kept->clear();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] <= 0.0) continue;  // no conditional for a zero-mass row
    auto p = joint.row_alphabet().point(i);
    flat.insert(flat.end(), p.begin(), p.end());
    std::vector<double> row(nc);
    for (std::size_t j = 0; j < nc; ++j) row[j] = joint.at(i, j) / px[i];
    rows.push_back(std::move(row));
    if (kept) kept->push_back(i);
  }
  if (rows.empty()) {
    throw ValidationError("conditional_from: no rows with positive mass");
  }
  return ConditionalPmf(Alphabet(d, std::move(flat)), joint.col_alphabet(),
                        std::move(rows));
}

double entropy(const Pmf& p, LogBase base) {
  double h = 0.0;
  for (double v : p.probs()) {
    if (v <= 0.0) continue;
    h -= v * log_in_base(v, base);
  }
  return h;
}

double mutual_information(const JointPmf& joint, LogBase base) {
  Pmf px = marginal(joint, Axis::row);
  Pmf py = marginal(joint, Axis::col);
  const std::size_t nr = px.size();
  const std::size_t nc = py.size();
  double mi = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      const double pxy = joint.at(i, j);
      if (pxy <= 0.0) continue;
      // pxy > 0 forces both marginals positive; a zero here would mean the
      // joint was corrupted after construction.
      const double denom = px[i] * py[j];
      if (denom <= 0.0) {
        throw Error("mutual_information: positive cell with zero marginal");
      }
      mi += pxy * log_in_base(pxy / denom, base);
    }
  }
  return mi;
}

}  // namespace chaospriv
