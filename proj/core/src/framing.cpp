#include "chaospriv/framing.hpp"

#include <cstring>
#include <limits>
#include <string>

namespace chaospriv {

namespace {

constexpr std::uint8_t magic[4] = {'C', 'P', 'R', 'V'};

bool known_type(std::uint8_t t) {
  return t == static_cast<std::uint8_t>(FrameType::drive) ||
         t == static_cast<std::uint8_t>(FrameType::query_response) ||
         t == static_cast<std::uint8_t>(FrameType::session_meta);
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  if (!known_type(static_cast<std::uint8_t>(frame.type))) {
    throw FramingError("frame type unknown");
  }
  if (frame.payload.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw FramingError("frame payload too large for the length field");
  }
  std::vector<std::uint8_t> out;
  out.reserve(frame_header_size + frame.payload.size());
  out.insert(out.end(), magic, magic + 4);
  out.push_back(frame_version);
  out.push_back(static_cast<std::uint8_t>(frame.type));
  const auto len = static_cast<std::uint32_t>(frame.payload.size());
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Frame decode_frame_prefix(std::span<const std::uint8_t> bytes,
                          std::size_t* consumed) {
  if (bytes.size() < frame_header_size) {
    throw FramingError("frame truncated: header needs " +
                       std::to_string(frame_header_size) + " bytes, have " +
                       std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), magic, 4) != 0) {
    throw FramingError("frame magic mismatch");
  }
  if (bytes[4] != frame_version) {
    throw FramingError("frame version unsupported: " +
                       std::to_string(bytes[4]));
  }
  if (!known_type(bytes[5])) {
    throw FramingError("frame type unknown: " + std::to_string(bytes[5]));
  }
  const std::uint32_t len = (static_cast<std::uint32_t>(bytes[6]) << 24) |
                            (static_cast<std::uint32_t>(bytes[7]) << 16) |
                            (static_cast<std::uint32_t>(bytes[8]) << 8) |
                            static_cast<std::uint32_t>(bytes[9]);
  if (bytes.size() - frame_header_size < len) {
    throw FramingError("frame truncated: payload needs " +
                       std::to_string(len) + " bytes, have " +
                       std::to_string(bytes.size() - frame_header_size));
  }
  Frame f{static_cast<FrameType>(bytes[5]),
          {bytes.begin() + frame_header_size,
           bytes.begin() + frame_header_size + len}};
  if (consumed) *consumed = frame_header_size + len;
  return f;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  std::size_t consumed = 0;
  Frame f = decode_frame_prefix(bytes, &consumed);
  if (consumed != bytes.size()) {
    throw FramingError("frame length mismatch: " +
                       std::to_string(bytes.size() - consumed) +
                       " trailing bytes");
  }
  return f;
}

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) {
  out.push_back(v);
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64le(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u64le(out, bits);
}

void PayloadReader::need(std::size_t n) {
  if (bytes_.size() - pos_ < n) {
    throw FramingError("frame payload truncated: need " + std::to_string(n) +
                       " more bytes, have " +
                       std::to_string(bytes_.size() - pos_));
  }
}

std::uint8_t PayloadReader::u8() {
  need(1);
  return bytes_[pos_++];
}

std::uint32_t PayloadReader::u32le() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(bytes_[pos_ + static_cast<std::size_t>(i)])
         << (8 * i);
  }
  pos_ += 4;
  return v;
}

std::uint64_t PayloadReader::u64le() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)])
         << (8 * i);
  }
  pos_ += 8;
  return v;
}

double PayloadReader::f64le() {
  const std::uint64_t bits = u64le();
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace chaospriv
