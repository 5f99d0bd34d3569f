#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaospriv/errors.hpp"

namespace chaospriv {

// Logarithm base used by every information measure. The base is a runtime
// parameter so the same artifacts can be reported in bits or nats; whichever
// base produced a number is recorded next to it in serialized output.
enum class LogBase { two, e };

double log_in_base(double x, LogBase base);
const char* to_string(LogBase base);
LogBase log_base_from_string(const std::string& s);

// Finite ordered set of distinct points in R^d. Points keep the order they
// were given in; equality of points is exact floating point equality.
class Alphabet {
 public:
  Alphabet(std::size_t dimension, std::vector<double> flat_points);
  explicit Alphabet(const std::vector<std::vector<double>>& points);

  // Convenience for d = 1.
  static Alphabet scalars(std::vector<double> values);

  std::size_t size() const { return flat_.size() / dim_; }
  std::size_t dimension() const { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {flat_.data() + i * dim_, dim_};
  }
  // Value of a 1-dimensional point.
  double scalar(std::size_t i) const;

  std::optional<std::size_t> index_of(std::span<const double> p) const;
  bool operator==(const Alphabet& other) const;
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

  std::span<const double> flat() const { return flat_; }

 private:
  std::size_t dim_;
  std::vector<double> flat_;  // size() * dimension() values, row per point
};

// Minkowski sum {a + b : a in lhs, b in rhs}, deduplicated by exact equality
// and sorted lexicographically.
Alphabet sumset_alphabet(const Alphabet& lhs, const Alphabet& rhs);

// Sumset plus the map (i, j) -> index of lhs[i] + rhs[j] in the sumset.
// Consumers that need p(z - y) terms use the table instead of re-deriving
// points by floating point subtraction.
struct SumsetIndex {
  Alphabet points;
  std::vector<std::size_t> index;  // index[i * rhs.size() + j]

  std::size_t at(std::size_t i, std::size_t j, std::size_t rhs_size) const {
    return index[i * rhs_size + j];
  }
};
SumsetIndex sumset_with_index(const Alphabet& lhs, const Alphabet& rhs);

// Probability mass function over an Alphabet. Construction takes nonnegative
// finite weights with positive sum and normalizes them, so stored masses sum
// to 1 up to rounding (well inside 1e-12).
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> weights);

  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }

 private:
  Alphabet alphabet_;
  std::vector<double> probs_;
};

enum class Axis { row, col };

// Joint mass function over row_alphabet x col_alphabet, row-major storage,
// normalized on construction like Pmf.
class JointPmf {
 public:
  JointPmf(Alphabet row_alphabet, Alphabet col_alphabet,
           std::vector<double> weights);

  const Alphabet& row_alphabet() const { return rows_; }
  const Alphabet& col_alphabet() const { return cols_; }
  double at(std::size_t i, std::size_t j) const {
    return probs_[i * cols_.size() + j];
  }
  std::span<const double> probs() const { return probs_; }

 private:
  Alphabet rows_;
  Alphabet cols_;
  std::vector<double> probs_;
};

// One conditional row per point of the conditioning alphabet; every row is
// itself a normalized mass function over the output alphabet.
class ConditionalPmf {
 public:
  ConditionalPmf(Alphabet given_alphabet, Alphabet out_alphabet,
                 std::vector<std::vector<double>> rows);

  const Alphabet& given_alphabet() const { return given_; }
  const Alphabet& out_alphabet() const { return out_; }
  double at(std::size_t given, std::size_t out) const {
    return probs_[given * out_.size() + out];
  }
  std::span<const double> row(std::size_t given) const {
    return {probs_.data() + given * out_.size(), out_.size()};
  }

 private:
  Alphabet given_;
  Alphabet out_;
  std::vector<double> probs_;
};

Pmf marginal(const JointPmf& joint, Axis axis);

// p(x, y) = p_x(x) * p_y_given_x(y | x).
JointPmf joint_from(const Pmf& p_x, const ConditionalPmf& p_y_given_x);

// Conditional rows of a joint: p(y | x) = p(x, y) / p(x). Rows with zero
// marginal mass have no defined conditional; their x points are dropped from
// the conditioning alphabet and `kept` (when non-null) records the surviving
// row indices.
ConditionalPmf conditional_from(const JointPmf& joint,
                                std::vector<std::size_t>* kept = nullptr);

// Shannon entropy; 0 log 0 terms are skipped.
double entropy(const Pmf& p, LogBase base);

// Mutual information of a joint distribution, always >= 0 up to rounding.
double mutual_information(const JointPmf& joint, LogBase base);

}  // namespace chaospriv
