#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chaospriv/errors.hpp"

namespace chaospriv {

// Wire format, 10-byte header: magic "CPRV", version byte (1), type byte,
// payload length as a big-endian 32-bit count, then the payload bytes.
enum class FrameType : std::uint8_t {
  drive = 0x01,           // chunk of drive-signal samples
  query_response = 0x02,  // one query/response exchange
  session_meta = 0x03,    // session configuration snapshot (JSON payload)
};

struct Frame {
  FrameType type;
  std::vector<std::uint8_t> payload;

  bool operator==(const Frame&) const = default;
};

inline constexpr std::size_t frame_header_size = 10;
inline constexpr std::uint8_t frame_version = 1;

class FramingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

std::vector<std::uint8_t> encode_frame(const Frame& frame);

// Decodes a buffer holding exactly one frame; trailing bytes are rejected.
Frame decode_frame(std::span<const std::uint8_t> bytes);

// Decodes one frame from the head of a buffer (for logs and streams);
// *consumed receives the number of bytes the frame occupied.
Frame decode_frame_prefix(std::span<const std::uint8_t> bytes,
                          std::size_t* consumed);

// Little-endian scalar helpers for frame payloads.
void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v);
void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v);
void put_f64le(std::vector<std::uint8_t>& out, double v);

class PayloadReader {
 public:
  explicit PayloadReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint8_t u8();
  std::uint32_t u32le();
  std::uint64_t u64le();
  double f64le();
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n);
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace chaospriv
