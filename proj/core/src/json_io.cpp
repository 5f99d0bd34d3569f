#include "chaospriv/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chaospriv {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("malformed JSON");
  return j;
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ValidationError(std::string("missing field \"") + name + "\"");
  }
  return obj.at(name);
}

double number_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_number()) {
    throw ValidationError(std::string("field \"") + name + "\" must be a number");
  }
  return v.get<double>();
}

std::uint64_t uint_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ValidationError(std::string("field \"") + name +
                          "\" must be an integer");
  }
  const auto i = v.get<std::int64_t>();
  if (i < 0) {
    throw ValidationError(std::string("field \"") + name +
                          "\" must be nonnegative");
  }
  return static_cast<std::uint64_t>(i);
}

bool bool_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_boolean()) {
    throw ValidationError(std::string("field \"") + name +
                          "\" must be a boolean");
  }
  return v.get<bool>();
}

std::string string_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_string()) {
    throw ValidationError(std::string("field \"") + name + "\" must be a string");
  }
  return v.get<std::string>();
}

std::vector<double> number_array(const json& v, const char* name) {
  if (!v.is_array()) {
    throw ValidationError(std::string("field \"") + name + "\" must be an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw ValidationError(std::string("field \"") + name +
                            "\" must hold numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

// Alphabet encoded as [[...point...], ...].
Alphabet alphabet_from(const json& v, const char* name) {
  if (!v.is_array() || v.empty()) {
    throw ValidationError(std::string("field \"") + name +
                          "\" must be a non-empty array of points");
  }
  std::vector<std::vector<double>> points;
  points.reserve(v.size());
  for (const auto& e : v) {
    points.push_back(number_array(e, name));
  }
  return Alphabet(points);
}

void write_alphabet(JsonWriter& w, const Alphabet& a) {
  w.begin_array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    w.begin_array();
    for (double c : a.point(i)) w.value(c);
    w.end_array();
  }
  w.end_array();
}

void write_scalar_array(JsonWriter& w, std::span<const double> v) {
  w.begin_array();
  for (double x : v) w.value(x);
  w.end_array();
}

Pmf pmf_from(const json& obj) {
  Alphabet a = alphabet_from(field(obj, "alphabet"), "alphabet");
  std::vector<double> probs = number_array(field(obj, "probs"), "probs");
  if (probs.size() != a.size()) {
    throw ValidationError("field \"probs\" length does not match \"alphabet\"");
  }
  return Pmf(std::move(a), std::move(probs));
}

void write_pmf(JsonWriter& w, const Pmf& p) {
  w.begin_object();
  w.key("alphabet");
  write_alphabet(w, p.alphabet());
  w.key("probs");
  write_scalar_array(w, p.probs());
  w.end_object();
}

ConditionalPmf conditional_from_json(const json& obj) {
  Alphabet given = alphabet_from(field(obj, "given_alphabet"), "given_alphabet");
  Alphabet out = alphabet_from(field(obj, "out_alphabet"), "out_alphabet");
  const json& rows = field(obj, "rows");
  if (!rows.is_array() || rows.size() != given.size()) {
    throw ValidationError("field \"rows\" must hold one row per given point");
  }
  std::vector<std::vector<double>> r;
  r.reserve(rows.size());
  for (const auto& e : rows) r.push_back(number_array(e, "rows"));
  return ConditionalPmf(std::move(given), std::move(out), std::move(r));
}

void write_conditional(JsonWriter& w, const ConditionalPmf& c) {
  w.begin_object();
  w.key("given_alphabet");
  write_alphabet(w, c.given_alphabet());
  w.key("out_alphabet");
  write_alphabet(w, c.out_alphabet());
  w.key("rows");
  w.begin_array();
  for (std::size_t i = 0; i < c.given_alphabet().size(); ++i) {
    write_scalar_array(w, c.row(i));
  }
  w.end_array();
  w.end_object();
}

JointPmf joint_from_json(const json& obj) {
  Alphabet rows = alphabet_from(field(obj, "row_alphabet"), "row_alphabet");
  Alphabet cols = alphabet_from(field(obj, "col_alphabet"), "col_alphabet");
  const json& probs = field(obj, "probs");
  if (!probs.is_array() || probs.size() != rows.size()) {
    throw ValidationError("field \"probs\" must hold one row per row point");
  }
  std::vector<double> flat;
  flat.reserve(rows.size() * cols.size());
  for (const auto& e : probs) {
    auto row = number_array(e, "probs");
    if (row.size() != cols.size()) {
      throw ValidationError("field \"probs\" rows must match col_alphabet");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return JointPmf(std::move(rows), std::move(cols), std::move(flat));
}

void write_joint(JsonWriter& w, const JointPmf& j) {
  w.begin_object();
  w.key("row_alphabet");
  write_alphabet(w, j.row_alphabet());
  w.key("col_alphabet");
  write_alphabet(w, j.col_alphabet());
  w.key("probs");
  w.begin_array();
  for (std::size_t i = 0; i < j.row_alphabet().size(); ++i) {
    w.begin_array();
    for (std::size_t k = 0; k < j.col_alphabet().size(); ++k) {
      w.value(j.at(i, k));
    }
    w.end_array();
  }
  w.end_array();
  w.end_object();
}

}  // namespace

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  has_items_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  has_items_.pop_back();
  return *this;
}

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!has_items_.empty()) {
    if (has_items_.back()) out_ += ',';
    has_items_.back() = true;
  }
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separator();
  out_ += '"';
  out_ += k;
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  separator();
  out_ += '"';
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  separator();
  out_ += "null";
  return *this;
}

std::string JsonWriter::take() { return std::move(out_); }

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path);
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path);
}

std::string pmf_to_json(const Pmf& p) {
  JsonWriter w;
  write_pmf(w, p);
  return w.take();
}

Pmf pmf_from_json_text(const std::string& text) { return pmf_from(parse(text)); }

std::string conditional_to_json(const ConditionalPmf& c) {
  JsonWriter w;
  write_conditional(w, c);
  return w.take();
}

std::string joint_to_json(const JointPmf& j) {
  JsonWriter w;
  write_joint(w, j);
  return w.take();
}

std::string problem_to_json(const ProblemFile& p) {
  JsonWriter w;
  w.begin_object();
  w.key("base").value(to_string(p.base));
  w.key("p_x");
  write_pmf(w, p.p_x);
  w.key("p_y_given_x");
  write_conditional(w, p.p_y_given_x);
  w.end_object();
  return w.take();
}

ProblemFile problem_from_json_text(const std::string& text) {
  json j = parse(text);
  return ProblemFile{pmf_from(field(j, "p_x")),
                     conditional_from_json(field(j, "p_y_given_x")),
                     log_base_from_string(string_field(j, "base"))};
}

std::string summary_to_json(const SummaryFile& s) {
  JsonWriter w;
  w.begin_object();
  w.key("row_count").value(s.row_count);
  w.key("dropped_rows").value(s.dropped_rows);
  w.key("p_x");
  write_pmf(w, s.p_x);
  w.key("p_y");
  write_pmf(w, s.p_y);
  w.key("joint");
  write_joint(w, s.joint);
  w.end_object();
  return w.take();
}

SummaryFile summary_from_json_text(const std::string& text) {
  json j = parse(text);
  return SummaryFile{uint_field(j, "row_count"), uint_field(j, "dropped_rows"),
                     pmf_from(field(j, "p_x")), pmf_from(field(j, "p_y")),
                     joint_from_json(field(j, "joint"))};
}

std::string solution_to_json(const NoiseSolution& s) {
  JsonWriter w;
  w.begin_object();
  w.key("p_v_star");
  write_pmf(w, s.p_v_star);
  w.key("optimal_value").value(s.optimal_value);
  w.key("base").value(to_string(s.base));
  w.key("iterations").value(s.iterations);
  w.key("converged").value(s.converged);
  w.key("kkt_residual").value(s.kkt_residual);
  w.end_object();
  return w.take();
}

NoiseSolution solution_from_json_text(const std::string& text) {
  json j = parse(text);
  return NoiseSolution{pmf_from(field(j, "p_v_star")),
                       number_field(j, "optimal_value"),
                       log_base_from_string(string_field(j, "base")),
                       uint_field(j, "iterations"),
                       bool_field(j, "converged"),
                       number_field(j, "kkt_residual")};
}

std::string partition_to_json(const PartitionFile& p) {
  JsonWriter w;
  w.begin_object();
  w.key("boundaries");
  write_scalar_array(w, p.partition.boundaries);
  w.key("symbols");
  write_scalar_array(w, p.partition.symbols.flat());
  w.key("target_pmf");
  write_scalar_array(w, p.partition.target.probs());
  w.key("delay_tau").value(p.delay_tau);
  w.key("delta").value(p.delta);
  w.end_object();
  return w.take();
}

PartitionFile partition_from_json_text(const std::string& text) {
  json j = parse(text);
  auto boundaries = number_array(field(j, "boundaries"), "boundaries");
  auto symbols = number_array(field(j, "symbols"), "symbols");
  auto target = number_array(field(j, "target_pmf"), "target_pmf");
  if (symbols.size() != target.size()) {
    throw ValidationError("fields \"symbols\" and \"target_pmf\" differ in length");
  }
  if (boundaries.size() + 1 != symbols.size()) {
    throw ValidationError(
        "field \"boundaries\" must have one entry less than \"symbols\"");
  }
  Alphabet a = Alphabet::scalars(symbols);
  Pmf t(a, target);
  std::vector<bool> empty(symbols.size(), false);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (t[i] == 0.0) empty[i] = true;
  }
  CellPartition part{std::move(boundaries), std::move(a), std::move(t),
                     std::move(empty)};
  return PartitionFile{std::move(part), number_field(j, "delta"),
                       uint_field(j, "delay_tau")};
}

std::string sync_report_to_json(const SyncReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("t0").value(r.t0);
  w.key("dt").value(r.dt);
  w.key("samples").value(r.output_error.size());
  w.key("final_error").value(r.final_error);
  w.key("fitted_rate").value(r.fitted_rate);
  w.key("fit_valid").value(r.fit_valid);
  w.key("fit_floor").value(r.fit_floor);
  w.key("threshold_times");
  w.begin_array();
  for (const auto& [eps, t] : r.threshold_times) {
    w.begin_object();
    w.key("threshold").value(eps);
    w.key("time").value(t);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string certificate_to_json(const ConvergenceCertificate& c) {
  JsonWriter w;
  w.begin_object();
  w.key("valid").value(c.valid);
  w.key("q_eigenvalues");
  w.begin_array();
  for (double v : c.q_eigenvalues) w.value(v);
  w.end_array();
  w.key("q_max_eigenvalue").value(c.q_max_eigenvalue);
  w.key("separation").value(c.separation);
  w.key("decay_rate").value(c.decay_rate);
  w.key("output_rate").value(c.output_rate);
  w.key("p");
  w.begin_array();
  for (Eigen::Index i = 0; i < c.p.rows(); ++i) {
    w.begin_array();
    for (Eigen::Index j = 0; j < c.p.cols(); ++j) w.value(c.p(i, j));
    w.end_array();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string stationarity_to_json(const StationarityReport& r,
                                 const StationarityOptions& options) {
  JsonWriter w;
  w.begin_object();
  w.key("max_ks").value(r.max_ks);
  w.key("worst_pair");
  w.begin_array().value(r.worst_pair.first).value(r.worst_pair.second).end_array();
  w.key("degenerate").value(r.degenerate);
  w.key("samples_per_run").value(r.samples_per_run);
  w.key("ic_count").value(options.ic_count);
  w.key("dt").value(options.dt);
  w.key("t_end").value(options.t_end);
  w.key("delta").value(options.delta);
  w.key("transient").value(options.transient);
  w.key("seed").value(options.seed);
  w.key("driver_box");
  w.begin_array();
  for (const auto& [lo, hi] : options.driver_box) {
    w.begin_array().value(lo).value(hi).end_array();
  }
  w.end_array();
  w.key("responder_box");
  w.begin_array();
  for (const auto& [lo, hi] : options.responder_box) {
    w.begin_array().value(lo).value(hi).end_array();
  }
  w.end_array();
  w.key("supports");
  w.begin_array();
  for (const auto& [lo, hi] : r.supports) {
    w.begin_array().value(lo).value(hi).end_array();
  }
  w.end_array();
  w.key("state_sup");
  w.begin_array();
  for (double v : r.state_sup) w.value(v);
  w.end_array();
  w.end_object();
  return w.take();
}

std::string distortion_report_to_json(const DistortionReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("n_queries").value(r.n_queries);
  w.key("recovery_rate").value(r.recovery_rate);
  w.key("empirical_mse").value(r.empirical_mse);
  w.key("distortion_bound").value(r.bound);
  w.key("band_violations").value(r.band_violations);
  w.key("banded").value(r.banded);
  w.key("out_of_alphabet").value(r.out_of_alphabet);
  w.key("desync_sup").value(r.desync_sup);
  w.key("mi_xz_plugin").value(r.mi_xz_plugin);
  w.key("base").value(to_string(r.base));
  w.key("noise_empirical");
  write_pmf(w, r.noise_empirical);
  w.key("transition");
  w.begin_object();
  w.key("symbols");
  write_alphabet(w, r.transition.symbols);
  w.key("rows");
  w.begin_array();
  const std::size_t m = r.transition.symbols.size();
  for (std::size_t i = 0; i < m; ++i) {
    w.begin_array();
    for (std::size_t j = 0; j < m; ++j) w.value(r.transition.at(i, j));
    w.end_array();
  }
  w.end_array();
  w.key("row_defined");
  w.begin_array();
  for (bool b : r.transition.row_defined) w.value(b);
  w.end_array();
  w.end_object();
  w.end_object();
  return w.take();
}

}  // namespace chaospriv
