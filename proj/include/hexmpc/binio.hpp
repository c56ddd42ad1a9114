#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace hexmpc::binio {

/// Little-endian byte writer used by the policy/buffer file formats.
class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void f64(double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    raw(&bits, 8);
  }
  void bytes(const char* data, std::size_t n) { out_.append(data, n); }

  const std::string& str() const { return out_; }

 private:
  void raw(const void* p, std::size_t n) {
    static_assert(std::endian::native == std::endian::little, "little-endian layout assumed");
    out_.append(reinterpret_cast<const char*>(p), n);
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() {
    std::uint32_t v;
    std::memcpy(&v, take(4), 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    std::memcpy(&v, take(8), 8);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void expect_magic(const char* magic, std::size_t n, const char* what) {
    if (data_.size() - pos_ < n || std::memcmp(data_.data() + pos_, magic, n) != 0) {
      throw std::runtime_error(std::string(what) + ": bad magic");
    }
    pos_ += n;
  }
  bool at_end() const { return pos_ == data_.size(); }
  void require_end(const char* what) {
    if (!at_end()) {
      throw std::runtime_error(std::string(what) + ": trailing bytes");
    }
  }

 private:
  const char* take(std::size_t n) {
    if (data_.size() - pos_ < n) {
      throw std::runtime_error("truncated data");
    }
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  const std::string& data_;
  std::size_t pos_ = 0;
};

}  // namespace hexmpc::binio
