#include "chaospriv/trajectory_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "chaospriv/json_io.hpp"

namespace chaospriv {

namespace {

constexpr char magic[4] = {'C', 'P', 'T', 'J'};
constexpr std::uint8_t version = 1;

void put_bytes(std::vector<std::uint8_t>& out, const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  out.insert(out.end(), b, b + n);
}

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  // Little-endian host assumed for the fast path; serialize byte by byte to
  // stay correct regardless.
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_le(out, bits);
}

class Cursor {
 public:
  Cursor(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  void need(std::size_t n, const char* what) {
    if (size_ - pos_ < n) {
      throw ValidationError(std::string("trajectory file truncated: ") + what);
    }
  }

  template <typename T>
  T le(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  double f64(const char* what) {
    const std::uint64_t bits = le<std::uint64_t>(what);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  const std::uint8_t* raw() const { return data_ + pos_; }
  std::size_t remaining() const { return size_ - pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& t) {
  std::string out = "t";
  for (std::size_t i = 0; i < t.state_dim(); ++i) {
    out += ",x" + std::to_string(i);
  }
  out += ",output\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    out += format_double(t.time(k));
    for (double v : t.state(k)) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += format_double(t.output(k));
    out += '\n';
  }
  write_text_file(path, out);
}

void write_trajectory_binary(const std::string& path, const Trajectory& t) {
  std::vector<std::uint8_t> out;
  out.reserve(21 + t.size() * (t.state_dim() + 1) * 8);
  put_bytes(out, magic, 4);
  out.push_back(version);
  put_le(out, static_cast<std::uint32_t>(t.state_dim()));
  put_le(out, static_cast<std::uint64_t>(t.size()));
  put_f64(out, t.t0());
  put_f64(out, t.dt());
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (double v : t.state(k)) put_f64(out, v);
    put_f64(out, t.output(k));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot create " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for " + path);
}

Trajectory read_trajectory_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("read failed for " + path);

  Cursor c(bytes.data(), bytes.size());
  c.need(4, "magic");
  if (std::memcmp(c.raw(), magic, 4) != 0) {
    throw ValidationError("trajectory file magic mismatch");
  }
  c.skip(4);
  const auto ver = c.le<std::uint8_t>("version");
  if (ver != version) {
    throw ValidationError("trajectory file version unsupported: " +
                          std::to_string(ver));
  }
  const auto dim = c.le<std::uint32_t>("dimension");
  const auto rows = c.le<std::uint64_t>("sample count");
  const double t0 = c.f64("t0");
  const double dt = c.f64("dt");
  if (dim == 0) throw ValidationError("trajectory file: zero dimension");
  if (rows > c.remaining() / ((dim + 1) * 8ULL)) {
    throw ValidationError("trajectory file truncated: samples");
  }

  Trajectory t(t0, dt, dim);
  t.reserve(rows);
  std::vector<double> state(dim);
  for (std::uint64_t k = 0; k < rows; ++k) {
    for (std::uint32_t i = 0; i < dim; ++i) state[i] = c.f64("state");
    t.append(state, c.f64("output"));
  }
  return t;
}

}  // namespace chaospriv
