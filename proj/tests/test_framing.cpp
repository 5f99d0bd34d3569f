#include "chaospriv/framing.hpp"

#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"

#include "chaospriv/rng.hpp"

using namespace chaospriv;

namespace {

std::string thrown_message(std::span<const std::uint8_t> bytes) {
  try {
    decode_frame(bytes);
    return "";
  } catch (const FramingError& e) {
    return e.what();
  }
}

}  // namespace

TEST_CASE("empty drive frame is exactly the header") {
  Frame f{FrameType::drive, {}};
  auto bytes = encode_frame(f);
  REQUIRE(bytes.size() == 10);
  CHECK(bytes[0] == 'C');
  CHECK(bytes[1] == 'P');
  CHECK(bytes[2] == 'R');
  CHECK(bytes[3] == 'V');
  CHECK(bytes[4] == 1);     // version
  CHECK(bytes[5] == 0x01);  // type
  for (int i = 6; i < 10; ++i) CHECK(bytes[i] == 0);  // length
  CHECK(decode_frame(bytes) == f);
}

TEST_CASE("length field is big-endian") {
  Frame f{FrameType::session_meta, std::vector<std::uint8_t>(0x0102, 0xAB)};
  auto bytes = encode_frame(f);
  CHECK(bytes[6] == 0x00);
  CHECK(bytes[7] == 0x00);
  CHECK(bytes[8] == 0x01);
  CHECK(bytes[9] == 0x02);
}

TEST_CASE("round trip across types and sizes") {
  Rng rng(1);
  for (FrameType t : {FrameType::drive, FrameType::query_response,
                      FrameType::session_meta}) {
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{255},
                          std::size_t{65536}}) {
      Frame f{t, {}};
      f.payload.resize(n);
      for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng.below(256));
      auto bytes = encode_frame(f);
      REQUIRE(bytes.size() == 10 + n);
      Frame g = decode_frame(bytes);
      CHECK(g.type == f.type);
      CHECK(g.payload == f.payload);
    }
  }
}

TEST_CASE("decode rejections name the offending field") {
  auto good = encode_frame(Frame{FrameType::drive, {1, 2, 3}});

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(thrown_message(bad_magic).find("magic") != std::string::npos);

  auto bad_version = good;
  bad_version[4] = 9;
  CHECK(thrown_message(bad_version).find("version") != std::string::npos);

  auto bad_type = good;
  bad_type[5] = 0x7F;
  CHECK(thrown_message(bad_type).find("type") != std::string::npos);

  // Header cut short.
  std::vector<std::uint8_t> stub(good.begin(), good.begin() + 7);
  CHECK(thrown_message(stub).find("truncated") != std::string::npos);

  // Payload cut short.
  std::vector<std::uint8_t> chopped(good.begin(), good.end() - 1);
  CHECK(thrown_message(chopped).find("truncated") != std::string::npos);

  // Trailing garbage after a complete frame.
  auto padded = good;
  padded.push_back(0);
  CHECK(thrown_message(padded).find("trailing") != std::string::npos);

  // Unknown type cannot be encoded either.
  CHECK_THROWS_AS(encode_frame(Frame{static_cast<FrameType>(0x44), {}}),
                  FramingError);
}

TEST_CASE("prefix decoding walks concatenated frames") {
  Frame a{FrameType::drive, {1, 2}};
  Frame b{FrameType::query_response, {3}};
  auto bytes = encode_frame(a);
  auto more = encode_frame(b);
  bytes.insert(bytes.end(), more.begin(), more.end());

  std::size_t used = 0;
  Frame first = decode_frame_prefix(bytes, &used);
  CHECK(first == a);
  REQUIRE(used == 12);
  Frame second = decode_frame_prefix(
      std::span<const std::uint8_t>(bytes).subspan(used), &used);
  CHECK(second == b);
  CHECK(used == 11);
}

TEST_CASE("payload scalar helpers round trip") {
  std::vector<std::uint8_t> buf;
  put_u8(buf, 0x5A);
  put_u32le(buf, 0xDEADBEEF);
  put_u64le(buf, 0x0123456789ABCDEFULL);
  put_f64le(buf, -0.514251234e-12);
  REQUIRE(buf.size() == 1 + 4 + 8 + 8);
  // Little-endian layout of the u32.
  CHECK(buf[1] == 0xEF);
  CHECK(buf[4] == 0xDE);

  PayloadReader r(buf);
  CHECK(r.u8() == 0x5A);
  CHECK(r.u32le() == 0xDEADBEEF);
  CHECK(r.u64le() == 0x0123456789ABCDEFULL);
  CHECK(r.f64le() == -0.514251234e-12);
  CHECK(r.remaining() == 0);
  CHECK_THROWS_AS(r.u8(), FramingError);
}

TEST_CASE("random payload round trips bit for bit") {
  Rng rng(9);
  Frame f{FrameType::session_meta, {}};
  f.payload.resize(1 << 16);
  for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng.below(256));
  auto bytes = encode_frame(f);
  CHECK(decode_frame(bytes) == f);
}
