#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaospriv/noise_design.hpp"
#include "chaospriv/probability.hpp"

namespace chaospriv {

// One categorical column: position in the record plus the category -> value
// map. Rows whose cell is not in the map are dropped and counted.
struct CategoryColumn {
  std::size_t column = 0;
  std::string name;
  std::map<std::string, double> categories;
};

// How to turn dataset rows into (X, Y) observations. X is the vector of the
// private columns' encoded values, in the order given; Y comes from the query
// column, either through its category map or, when `query_bins` is set,
// by parsing the cell as a number and encoding it as 1 + bin index over the
// given edges.
struct AttributeEncoding {
  bool has_header = false;
  std::vector<CategoryColumn> private_attributes;
  CategoryColumn query_attribute;
  std::optional<std::vector<double>> query_bins;
};

struct DatasetSummary {
  std::size_t row_count = 0;     // rows kept
  std::size_t dropped_rows = 0;  // unmapped category, bad field count, parse failure
  Pmf p_x;
  Pmf p_y;
  JointPmf joint;
};

// Counts a comma-separated file (the canonical adult `.data` layout: no
// header, one record per line, fields padded with spaces) into empirical mass
// functions. The X alphabet enumerates every combination of mapped private
// values whether or not it occurs, so Table-style layouts keep their shape;
// zero-mass rows are dropped later by problem_from_summary.
DatasetSummary load_adult(const std::string& path,
                          const AttributeEncoding& encoding);

// Same counting over in-memory lines (used by tests and by load_adult).
DatasetSummary summarize_rows(const std::vector<std::string>& lines,
                              const AttributeEncoding& encoding);

// Design problem from an empirical summary: p_{Y|X} is the row-normalized
// joint; x atoms with zero mass are dropped.
NoiseDesignProblem problem_from_summary(const DatasetSummary& summary,
                                        LogBase base);

// A joint cell whose value is known and must be kept as given.
struct PinnedCell {
  std::size_t row;
  std::size_t col;
  double mass;
};

// Completes a joint distribution from its two marginals and a set of pinned
// cells: the free cells start at the product of the marginals and are rescaled
// by iterative proportional fitting until every row and column sum matches its
// marginal within `tolerance` (sup norm). With no pins the result is the
// product distribution. Throws when the pins are inconsistent with the
// marginals or the fit fails to converge.
JointPmf complete_joint_ipf(const Pmf& row_marginal, const Pmf& col_marginal,
                            const std::vector<PinnedCell>& pinned,
                            std::size_t max_iterations = 20000,
                            double tolerance = 1e-13);

// Encoding JSON: {"has_header": bool, "private_attributes": [{"column": n,
// "name": s, "categories": {...}}, ...], "query_attribute": {...},
// "query_bins": [...] (optional)}.
AttributeEncoding encoding_from_json_text(const std::string& text);
std::string encoding_to_json(const AttributeEncoding& encoding);

}  // namespace chaospriv
