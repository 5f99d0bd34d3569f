#include "chaospriv/json_io.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"

#include "chaospriv/rng.hpp"
#include "chaospriv/trajectory_io.hpp"

using namespace chaospriv;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Dyadic masses sum to exactly 1.0 in binary, so re-normalization on parse is
// the identity and serialized text survives a round trip byte for byte.
Pmf dyadic_pmf() {
  return Pmf(Alphabet({{0, 0}, {0, 1}, {1, 0}}), {0.5, 0.25, 0.25});
}

}  // namespace

TEST_CASE("format_double prints round-trippable decimals") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-2.0) == "-2");

  const double cases[] = {0.0,     -0.0,       1.0 / 3.0, DBL_MAX,
                          DBL_MIN, 5e-324,     -1e300,    6.02214076e23,
                          1e-9,    123456789.123456789};
  for (double v : cases) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  Rng rng(99);
  for (int k = 0; k < 200; ++k) {
    const double v =
        (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-20.0, 20.0));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("non-finite values serialize as null") {
  CHECK(format_double(std::nan("")) == "null");
  CHECK(format_double(HUGE_VAL) == "null");
  CHECK(format_double(-HUGE_VAL) == "null");
}

TEST_CASE("writer emits fields in insertion order with JSON escapes") {
  JsonWriter w;
  w.begin_object();
  w.key("a").value(1);
  w.key("b").begin_array().value(true).null().value("x\"y\\").end_array();
  w.key("c").begin_object().key("d").value(0.5).end_object();
  w.key("e").value(std::string_view("\n\t\x01"));
  w.end_object();
  CHECK(w.take() ==
        "{\"a\":1,\"b\":[true,null,\"x\\\"y\\\\\"],\"c\":{\"d\":0.5},"
        "\"e\":\"\\n\\t\\u0001\"}");
}

TEST_CASE("pmf JSON survives a byte-identical round trip") {
  const std::string text = pmf_to_json(dyadic_pmf());
  Pmf back = pmf_from_json_text(text);
  REQUIRE(back.size() == 3);
  CHECK(back[0] == 0.5);
  CHECK(back[1] == 0.25);
  CHECK(back[2] == 0.25);
  CHECK(back.alphabet().dimension() == 2);
  CHECK(back.alphabet().point(2)[0] == 1.0);
  CHECK(pmf_to_json(back) == text);
}

TEST_CASE("non-dyadic pmf round-trips to the same values up to an ulp") {
  Pmf p(Alphabet::scalars({1, 2, 3}), {1, 1, 1});
  Pmf back = pmf_from_json_text(pmf_to_json(p));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i] == doctest::Approx(p[i]).epsilon(1e-15));
  }
}

TEST_CASE("pmf parser names the offending field") {
  CHECK(contains(message_of([] { pmf_from_json_text("nope"); }), "malformed"));
  CHECK(contains(message_of([] { pmf_from_json_text("{\"probs\":[1]}"); }),
                 "alphabet"));
  CHECK(contains(
      message_of([] { pmf_from_json_text("{\"alphabet\":[[0]],\"probs\":[1,2]}"); }),
      "probs"));
  CHECK(contains(
      message_of([] { pmf_from_json_text("{\"alphabet\":[[0]],\"probs\":[\"x\"]}"); }),
      "probs"));
  CHECK_THROWS_AS(pmf_from_json_text("{\"alphabet\":[[0]],\"probs\":[-1]}"),
                  ValidationError);
}

TEST_CASE("problem file round-trips in both log bases") {
  auto x = Alphabet::scalars({0, 1});
  auto y = Alphabet::scalars({1, 2});
  ProblemFile p{Pmf(x, {0.5, 0.5}),
                ConditionalPmf(x, y, {{0.75, 0.25}, {0.25, 0.75}}),
                LogBase::two};
  const std::string text = problem_to_json(p);
  ProblemFile back = problem_from_json_text(text);
  CHECK(back.base == LogBase::two);
  CHECK(back.p_x[0] == 0.5);
  CHECK(back.p_y_given_x.at(0, 0) == 0.75);
  CHECK(back.p_y_given_x.at(1, 0) == 0.25);
  CHECK(problem_to_json(back) == text);

  p.base = LogBase::e;
  ProblemFile e = problem_from_json_text(problem_to_json(p));
  CHECK(e.base == LogBase::e);

  CHECK(contains(message_of([&] {
                   problem_from_json_text(
                       "{\"base\":\"2\",\"p_x\":{\"alphabet\":[[0]],"
                       "\"probs\":[1]}}");
                 }),
                 "p_y_given_x"));
}

TEST_CASE("summary file round-trips byte for byte") {
  auto x = Alphabet::scalars({0, 1});
  auto y = Alphabet::scalars({1, 2});
  SummaryFile s{4, 1, Pmf(x, {0.75, 0.25}), Pmf(y, {0.75, 0.25}),
                JointPmf(x, y, {0.5, 0.25, 0.25, 0.0})};
  const std::string text = summary_to_json(s);
  SummaryFile back = summary_from_json_text(text);
  CHECK(back.row_count == 4);
  CHECK(back.dropped_rows == 1);
  CHECK(back.joint.at(0, 0) == 0.5);
  CHECK(back.joint.at(1, 1) == 0.0);
  CHECK(summary_to_json(back) == text);

  CHECK(contains(message_of([&] {
                   summary_from_json_text("{\"row_count\":1}");
                 }),
                 "dropped_rows"));
}

TEST_CASE("solution file round-trips byte for byte") {
  NoiseSolution s{Pmf(Alphabet::scalars({1, 2}), {0.25, 0.75}),
                  0.031249999999999997,
                  LogBase::two,
                  1724,
                  true,
                  9.9999999999999998e-10};
  const std::string text = solution_to_json(s);
  NoiseSolution back = solution_from_json_text(text);
  CHECK(back.p_v_star[0] == 0.25);
  CHECK(back.optimal_value == s.optimal_value);
  CHECK(back.base == LogBase::two);
  CHECK(back.iterations == 1724);
  CHECK(back.converged);
  CHECK(back.kkt_residual == s.kkt_residual);
  CHECK(solution_to_json(back) == text);

  CHECK(contains(message_of([&] {
                   solution_from_json_text(
                       "{\"p_v_star\":{\"alphabet\":[[1]],\"probs\":[1]},"
                       "\"optimal_value\":0,\"base\":\"2\",\"iterations\":1,"
                       "\"converged\":\"yes\",\"kkt_residual\":0}");
                 }),
                 "converged"));
}

TEST_CASE("partition file reconstructs empty cells from the target") {
  CellPartition part{{0.4, 0.4},
                     Alphabet::scalars({1, 2, 3}),
                     Pmf(Alphabet::scalars({1, 2, 3}), {0.5, 0.0, 0.5}),
                     {false, true, false}};
  PartitionFile p{part, 0.05, 3};
  const std::string text = partition_to_json(p);
  PartitionFile back = partition_from_json_text(text);
  CHECK(back.delta == 0.05);
  CHECK(back.delay_tau == 3);
  CHECK(back.partition.boundaries == part.boundaries);
  CHECK(back.partition.symbols == part.symbols);
  CHECK(back.partition.empty_cell == part.empty_cell);
  CHECK(partition_to_json(back) == text);

  CHECK(contains(
      message_of([] {
        partition_from_json_text(
            "{\"boundaries\":[0.5],\"symbols\":[1,2,3],"
            "\"target_pmf\":[0.5,0.25,0.25],\"delay_tau\":1,\"delta\":0.1}");
      }),
      "boundaries"));
  CHECK(contains(
      message_of([] {
        partition_from_json_text(
            "{\"boundaries\":[0.5],\"symbols\":[1,2],"
            "\"target_pmf\":[1],\"delay_tau\":1,\"delta\":0.1}");
      }),
      "target_pmf"));
}

TEST_CASE("text files round-trip binary content") {
  const std::string path = "/tmp/chaospriv_io_text_test.txt";
  const std::string content = "line one\nline two\ttabbed\n\xc3\xa9\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_text_file("/tmp/chaospriv_io_missing.txt"), IoError);
  CHECK_THROWS_AS(write_text_file("/no_such_dir/chaospriv.txt", "x"), IoError);
}

TEST_CASE("trajectory binary files round-trip bit for bit") {
  const std::string path = "/tmp/chaospriv_io_traj_test.bin";
  Rng rng(4242);
  Trajectory t(-1.5, 1e-3, 2);
  for (std::size_t k = 0; k < 257; ++k) {
    const double a = rng.uniform(-50.0, 50.0);
    const double b = rng.uniform(-50.0, 50.0);
    t.append(std::vector<double>{a, b}, b);
  }
  write_trajectory_binary(path, t);
  Trajectory back = read_trajectory_binary(path);
  CHECK(back.t0() == t.t0());
  CHECK(back.dt() == t.dt());
  CHECK(back.state_dim() == 2);
  REQUIRE(back.size() == t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(back.state(k)[0] == t.state(k)[0]);
    CHECK(back.state(k)[1] == t.state(k)[1]);
    CHECK(back.output(k) == t.output(k));
  }
  std::remove(path.c_str());
}

TEST_CASE("trajectory reader rejects corrupted files") {
  const std::string path = "/tmp/chaospriv_io_corrupt_test.bin";
  Trajectory t(0.0, 0.5, 1);
  t.append(std::vector<double>{1.5}, 2.25);
  t.append(std::vector<double>{-0.5}, 0.25);
  write_trajectory_binary(path, t);
  const std::string original = read_text_file(path);

  auto rewrite = [&](std::string bytes) {
    write_text_file(path, bytes);
  };

  std::string bad = original;
  bad[0] = 'X';
  rewrite(bad);
  CHECK(contains(message_of([&] { read_trajectory_binary(path); }), "magic"));

  bad = original;
  bad[4] = 2;
  rewrite(bad);
  CHECK(contains(message_of([&] { read_trajectory_binary(path); }), "version"));

  bad = original;
  bad[5] = bad[6] = bad[7] = bad[8] = 0;  // state dimension
  rewrite(bad);
  CHECK(contains(message_of([&] { read_trajectory_binary(path); }),
                 "dimension"));

  rewrite(original.substr(0, original.size() - 8));
  CHECK(contains(message_of([&] { read_trajectory_binary(path); }),
                 "truncated"));

  rewrite(original.substr(0, 6));
  CHECK(contains(message_of([&] { read_trajectory_binary(path); }),
                 "truncated"));
  std::remove(path.c_str());
}

TEST_CASE("trajectory CSV is stable down to the byte") {
  const std::string path = "/tmp/chaospriv_io_csv_test.csv";
  Trajectory t(0.0, 0.5, 1);
  t.append(std::vector<double>{1.5}, 2.25);
  t.append(std::vector<double>{-0.5}, 0.25);
  write_trajectory_csv(path, t);
  CHECK(read_text_file(path) == "t,x0,output\n0,1.5,2.25\n0.5,-0.5,0.25\n");
  std::remove(path.c_str());

  Trajectory t2(0.0, 1.0, 2);
  t2.append(std::vector<double>{1.0, 2.0}, 2.0);
  write_trajectory_csv(path, t2);
  CHECK(read_text_file(path) == "t,x0,x1,output\n0,1,2,2\n");
  std::remove(path.c_str());
}
