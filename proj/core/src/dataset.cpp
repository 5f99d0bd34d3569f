#include "chaospriv/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "json.hpp"

#include "chaospriv/json_io.hpp"

namespace chaospriv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

// Sorted distinct encoded values of a category map.
std::vector<double> sorted_values(const std::map<std::string, double>& m) {
  std::vector<double> v;
  v.reserve(m.size());
  for (const auto& [_, value] : m) v.push_back(value);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

DatasetSummary summarize_rows(const std::vector<std::string>& lines,
                              const AttributeEncoding& encoding) {
  if (encoding.private_attributes.empty()) {
    throw ValidationError("encoding: no private attributes");
  }
  const bool binned = encoding.query_bins.has_value();
  if (binned && encoding.query_bins->size() < 2) {
    throw ValidationError("encoding: query_bins needs at least two edges");
  }
  if (!binned && encoding.query_attribute.categories.empty()) {
    throw ValidationError("encoding: query attribute has no categories and no bins");
  }

  // X alphabet: cartesian product of each private column's mapped values in
  // lexicographic order.
  std::vector<std::vector<double>> per_column;
  for (const auto& col : encoding.private_attributes) {
    if (col.categories.empty()) {
      throw ValidationError("encoding: private attribute \"" + col.name +
                            "\" has no categories");
    }
    per_column.push_back(sorted_values(col.categories));
  }
  std::vector<std::vector<double>> x_points{{}};
  for (const auto& values : per_column) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : x_points) {
      for (double v : values) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    x_points = std::move(next);
  }
  Alphabet x_alphabet(x_points);

  std::vector<double> y_values;
  if (binned) {
    for (std::size_t i = 1; i < encoding.query_bins->size(); ++i) {
      if (!((*encoding.query_bins)[i] > (*encoding.query_bins)[i - 1])) {
        throw ValidationError("encoding: query_bins must be strictly increasing");
      }
      y_values.push_back(static_cast<double>(i));
    }
  } else {
    y_values = sorted_values(encoding.query_attribute.categories);
  }
  Alphabet y_alphabet = Alphabet::scalars(y_values);

  std::size_t needed = encoding.query_attribute.column;
  for (const auto& col : encoding.private_attributes) {
    needed = std::max(needed, col.column);
  }

  std::vector<double> counts(x_alphabet.size() * y_alphabet.size(), 0.0);
  std::size_t kept = 0;
  std::size_t dropped = 0;
  bool skip_header = encoding.has_header;

  std::vector<double> x_value(encoding.private_attributes.size());
  for (const std::string& raw : lines) {
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() <= needed) {
      ++dropped;
      continue;
    }

    bool ok = true;
    for (std::size_t c = 0; c < encoding.private_attributes.size(); ++c) {
      const auto& col = encoding.private_attributes[c];
      const auto it = col.categories.find(std::string(fields[col.column]));
      if (it == col.categories.end()) {
        ok = false;
        break;
      }
      x_value[c] = it->second;
    }
    double y_value = 0.0;
    if (ok) {
      const std::string_view cell = fields[encoding.query_attribute.column];
      if (binned) {
        double parsed = 0.0;
        const auto res =
            std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
          ok = false;
        } else {
          const auto& edges = *encoding.query_bins;
          const auto it =
              std::upper_bound(edges.begin(), edges.end(), parsed);
          if (it == edges.begin() || it == edges.end()) {
            ok = false;  // outside the binned range
          } else {
            y_value = static_cast<double>(it - edges.begin());
          }
        }
      } else {
        const auto it = encoding.query_attribute.categories.find(
            std::string(cell));
        if (it == encoding.query_attribute.categories.end()) {
          ok = false;
        } else {
          y_value = it->second;
        }
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }

    const auto xi = x_alphabet.index_of(x_value);
    const auto yi = y_alphabet.index_of(std::span<const double>(&y_value, 1));
    if (!xi || !yi) {
      ++dropped;  // can only happen for duplicate encoded values
      continue;
    }
    counts[*xi * y_alphabet.size() + *yi] += 1.0;
    ++kept;
  }

  if (kept == 0) {
    throw ValidationError("dataset: no rows survived the encoding");
  }

  JointPmf joint(x_alphabet, y_alphabet, counts);
  return DatasetSummary{kept, dropped, marginal(joint, Axis::row),
                        marginal(joint, Axis::col), std::move(joint)};
}

DatasetSummary load_adult(const std::string& path,
                          const AttributeEncoding& encoding) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) throw IoError("read failed for " + path);
  return summarize_rows(lines, encoding);
}

NoiseDesignProblem problem_from_summary(const DatasetSummary& summary,
                                        LogBase base) {
  std::vector<std::size_t> kept;
  ConditionalPmf cond = conditional_from(summary.joint, &kept);
  std::vector<double> px_weights;
  px_weights.reserve(kept.size());
  for (std::size_t i : kept) px_weights.push_back(summary.p_x[i]);
  Pmf p_x(cond.given_alphabet(), std::move(px_weights));
  return NoiseDesignProblem(std::move(p_x), std::move(cond), base);
}

JointPmf complete_joint_ipf(const Pmf& row_marginal, const Pmf& col_marginal,
                            const std::vector<PinnedCell>& pinned,
                            std::size_t max_iterations, double tolerance) {
  const std::size_t nr = row_marginal.size();
  const std::size_t nc = col_marginal.size();
  std::vector<double> w(nr * nc);
  std::vector<bool> fixed(nr * nc, false);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      w[i * nc + j] = row_marginal[i] * col_marginal[j];
    }
  }
  for (const auto& pin : pinned) {
    if (pin.row >= nr || pin.col >= nc) {
      throw ValidationError("pinned cell index outside the joint");
    }
    if (!(pin.mass >= 0.0) || !std::isfinite(pin.mass)) {
      throw ValidationError("pinned cell mass must be nonnegative and finite");
    }
    w[pin.row * nc + pin.col] = pin.mass;
    fixed[pin.row * nc + pin.col] = true;
  }

  // Residual row/column targets after subtracting the pinned mass; the free
  // cells are rescaled toward them, alternating rows and columns.
  auto residual = [&](std::size_t idx, bool rows) {
    double target = rows ? row_marginal[idx] : col_marginal[idx];
    for (const auto& pin : pinned) {
      if ((rows ? pin.row : pin.col) == idx) target -= pin.mass;
    }
    return target;
  };
  for (std::size_t i = 0; i < nr; ++i) {
    if (residual(i, true) < -tolerance) {
      throw ValidationError("pinned mass exceeds its row marginal");
    }
  }
  for (std::size_t j = 0; j < nc; ++j) {
    if (residual(j, false) < -tolerance) {
      throw ValidationError("pinned mass exceeds its column marginal");
    }
  }

  double err = 0.0;
  for (std::size_t round = 0; round < max_iterations; ++round) {
    for (std::size_t i = 0; i < nr; ++i) {
      double free_sum = 0.0;
      for (std::size_t j = 0; j < nc; ++j) {
        if (!fixed[i * nc + j]) free_sum += w[i * nc + j];
      }
      const double want = std::max(residual(i, true), 0.0);
      if (free_sum > 0.0) {
        const double scale = want / free_sum;
        for (std::size_t j = 0; j < nc; ++j) {
          if (!fixed[i * nc + j]) w[i * nc + j] *= scale;
        }
      }
    }
    for (std::size_t j = 0; j < nc; ++j) {
      double free_sum = 0.0;
      for (std::size_t i = 0; i < nr; ++i) {
        if (!fixed[i * nc + j]) free_sum += w[i * nc + j];
      }
      const double want = std::max(residual(j, false), 0.0);
      if (free_sum > 0.0) {
        const double scale = want / free_sum;
        for (std::size_t i = 0; i < nr; ++i) {
          if (!fixed[i * nc + j]) w[i * nc + j] *= scale;
        }
      }
    }
    err = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < nc; ++j) s += w[i * nc + j];
      err = std::max(err, std::abs(s - row_marginal[i]));
    }
    for (std::size_t j = 0; j < nc; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < nr; ++i) s += w[i * nc + j];
      err = std::max(err, std::abs(s - col_marginal[j]));
    }
    if (err <= tolerance) {
      return JointPmf(row_marginal.alphabet(), col_marginal.alphabet(),
                      std::move(w));
    }
  }
  throw ValidationError(
      "joint completion did not reach the marginals (residual " +
      std::to_string(err) + "); pins are likely inconsistent");
}

AttributeEncoding encoding_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("encoding: malformed JSON");

  auto column_from = [](const nlohmann::json& obj,
                        const char* what) -> CategoryColumn {
    if (!obj.is_object() || !obj.contains("column") || !obj.contains("name")) {
      throw ValidationError(std::string("encoding: ") + what +
                            " needs \"column\" and \"name\"");
    }
    CategoryColumn col;
    col.column = obj.at("column").get<std::size_t>();
    col.name = obj.at("name").get<std::string>();
    if (obj.contains("categories")) {
      if (!obj.at("categories").is_object()) {
        throw ValidationError(std::string("encoding: ") + what +
                              " \"categories\" must be an object");
      }
      for (const auto& [k, v] : obj.at("categories").items()) {
        if (!v.is_number()) {
          throw ValidationError(std::string("encoding: ") + what +
                                " category values must be numbers");
        }
        col.categories[k] = v.get<double>();
      }
    }
    return col;
  };

  AttributeEncoding enc;
  if (j.contains("has_header")) {
    if (!j.at("has_header").is_boolean()) {
      throw ValidationError("encoding: \"has_header\" must be a boolean");
    }
    enc.has_header = j.at("has_header").get<bool>();
  }
  if (!j.contains("private_attributes") || !j.at("private_attributes").is_array()) {
    throw ValidationError("encoding: missing \"private_attributes\" array");
  }
  for (const auto& e : j.at("private_attributes")) {
    enc.private_attributes.push_back(column_from(e, "private attribute"));
  }
  if (!j.contains("query_attribute")) {
    throw ValidationError("encoding: missing \"query_attribute\"");
  }
  enc.query_attribute = column_from(j.at("query_attribute"), "query attribute");
  if (j.contains("query_bins")) {
    if (!j.at("query_bins").is_array()) {
      throw ValidationError("encoding: \"query_bins\" must be an array");
    }
    std::vector<double> bins;
    for (const auto& e : j.at("query_bins")) {
      if (!e.is_number()) {
        throw ValidationError("encoding: \"query_bins\" must hold numbers");
      }
      bins.push_back(e.get<double>());
    }
    enc.query_bins = std::move(bins);
  }
  return enc;
}

std::string encoding_to_json(const AttributeEncoding& encoding) {
  JsonWriter w;
  w.begin_object();
  w.key("has_header").value(encoding.has_header);
  auto write_column = [&](const CategoryColumn& col) {
    w.begin_object();
    w.key("column").value(col.column);
    w.key("name").value(col.name);
    w.key("categories");
    w.begin_object();
    for (const auto& [k, v] : col.categories) {
      w.key(k).value(v);
    }
    w.end_object();
    w.end_object();
  };
  w.key("private_attributes");
  w.begin_array();
  for (const auto& col : encoding.private_attributes) write_column(col);
  w.end_array();
  w.key("query_attribute");
  write_column(encoding.query_attribute);
  if (encoding.query_bins) {
    w.key("query_bins");
    w.begin_array();
    for (double e : *encoding.query_bins) w.value(e);
    w.end_array();
  }
  w.end_object();
  return w.take();
}

}  // namespace chaospriv
