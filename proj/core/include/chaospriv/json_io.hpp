#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chaospriv/cells.hpp"
#include "chaospriv/certificate.hpp"
#include "chaospriv/noise_design.hpp"
#include "chaospriv/probability.hpp"
#include "chaospriv/series_stats.hpp"
#include "chaospriv/session.hpp"
#include "chaospriv/sync.hpp"

namespace chaospriv {

// Deterministic JSON emitter: fields appear in insertion order and floats are
// printed with 17 significant digits, so identical values give identical
// bytes. Non-finite floats become null (JSON has no literal for them).
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();
  std::string take();

 private:
  void separator();
  std::string out_;
  std::vector<bool> has_items_;
  bool pending_key_ = false;
};

// 17-significant-digit decimal form of a double (round-trips exactly).
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

// Artifact serialization. Parsers take JSON text and throw ValidationError
// naming the missing or ill-typed field.
std::string pmf_to_json(const Pmf& p);
Pmf pmf_from_json_text(const std::string& text);

std::string conditional_to_json(const ConditionalPmf& c);
std::string joint_to_json(const JointPmf& j);

struct ProblemFile {
  Pmf p_x;
  ConditionalPmf p_y_given_x;
  LogBase base;
};
std::string problem_to_json(const ProblemFile& p);
ProblemFile problem_from_json_text(const std::string& text);

struct SummaryFile {
  std::size_t row_count;
  std::size_t dropped_rows;
  Pmf p_x;
  Pmf p_y;
  JointPmf joint;
};
std::string summary_to_json(const SummaryFile& s);
SummaryFile summary_from_json_text(const std::string& text);

std::string solution_to_json(const NoiseSolution& s);
NoiseSolution solution_from_json_text(const std::string& text);

struct PartitionFile {
  CellPartition partition;
  double delta;
  std::size_t delay_tau;
};
std::string partition_to_json(const PartitionFile& p);
PartitionFile partition_from_json_text(const std::string& text);

std::string sync_report_to_json(const SyncReport& r);
std::string certificate_to_json(const ConvergenceCertificate& c);
std::string stationarity_to_json(const StationarityReport& r,
                                 const StationarityOptions& options);
std::string distortion_report_to_json(const DistortionReport& r);

}  // namespace chaospriv
