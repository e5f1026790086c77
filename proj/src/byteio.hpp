#pragma once

// Little-endian byte writer/reader shared by the .abcd file format and the
// wire codec. Reader errors carry the byte offset of the failed read.

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace abcd::detail {

class ByteWriter {
 public:
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void c128(std::complex<double> z) {
    f64(z.real());
    f64(z.imag());
  }
  void reserve(std::size_t n) { buf_.reserve(n); }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

/// Thrown by ByteReader; callers translate into their own error type.
struct ReadError {
  std::string what;
  std::size_t offset;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> b) : buf_(b) {}

  [[nodiscard]] std::size_t offset() const { return pos_; }
  [[nodiscard]] std::size_t remaining() const { return buf_.size() - pos_; }

  std::span<const std::uint8_t> bytes(std::size_t n, const char* field) {
    need(n, field);
    auto s = buf_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8(const char* field) {
    need(1, field);
    return buf_[pos_++];
  }
  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* field) {
    need(8, field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const char* field) { return std::bit_cast<double>(u64(field)); }
  std::complex<double> c128(const char* field) {
    const double re = f64(field);
    const double im = f64(field);
    return {re, im};
  }

 private:
  void need(std::size_t n, const char* field) const {
    if (remaining() < n)
      throw ReadError{std::string("truncated input while reading ") + field + ": need " +
                          std::to_string(n) + " bytes, " + std::to_string(remaining()) + " left",
                      pos_};
  }

  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

}  // namespace abcd::detail
