#pragma once
// Little-endian binary serialization with a trailing FNV-1a checksum. Used by
// the dataset bundle and model checkpoint formats.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace seqrec::io {

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n);

class BinaryWriter {
 public:
  void bytes(const void* p, std::size_t n);

  template <typename T>
  void put(T v) {
    static_assert(std::is_arithmetic_v<T>);
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    put_le(raw, sizeof(T));
  }

  /// u16 length prefix followed by the raw bytes.
  void put_string(std::string_view s);

  template <typename T>
  void put_array(const T* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) put(p[i]);
  }

  const std::vector<std::uint8_t>& buffer() const noexcept { return buf_; }

  /// Appends the checksum of everything written so far and writes the file.
  /// Throws IoError.
  void save(const std::filesystem::path& path);

 private:
  void put_le(const std::uint8_t* raw, std::size_t n);
  std::vector<std::uint8_t> buf_;
};

class BinaryReader {
 public:
  /// Reads the whole file and verifies the trailing checksum. Throws IoError
  /// if the file cannot be read, FormatError if it is truncated or corrupt.
  static BinaryReader open(const std::filesystem::path& path);

  explicit BinaryReader(std::vector<std::uint8_t> payload) : buf_(std::move(payload)) {}

  void bytes(void* p, std::size_t n);

  template <typename T>
  T get() {
    static_assert(std::is_arithmetic_v<T>);
    std::uint8_t raw[sizeof(T)];
    get_le(raw, sizeof(T));
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
  }

  std::string get_string();

  template <typename T>
  void get_array(T* p, std::size_t n) {
    require(n * sizeof(T));
    for (std::size_t i = 0; i < n; ++i) p[i] = get<T>();
  }

  std::size_t remaining() const noexcept { return buf_.size() - pos_; }
  /// Throws FormatError unless at least n bytes remain.
  void require(std::size_t n) const;

 private:
  void get_le(std::uint8_t* raw, std::size_t n);
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

}  // namespace seqrec::io
