#include "seqrec/io/binary.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include "seqrec/error.hpp"

namespace seqrec::io {

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void BinaryWriter::bytes(const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  buf_.insert(buf_.end(), b, b + n);
}

void BinaryWriter::put_le(const std::uint8_t* raw, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    buf_.insert(buf_.end(), raw, raw + n);
  } else {
    for (std::size_t i = n; i-- > 0;) buf_.push_back(raw[i]);
  }
}

void BinaryWriter::put_string(std::string_view s) {
  if (s.size() > 0xffff) throw Error(ErrorCode::invalid_input, "string too long for u16 length prefix");
  put(static_cast<std::uint16_t>(s.size()));
  bytes(s.data(), s.size());
}

void BinaryWriter::save(const std::filesystem::path& path) {
  std::vector<std::uint8_t> out = buf_;
  const std::uint64_t sum = fnv1a(buf_.data(), buf_.size());
  BinaryWriter tail;
  tail.put(sum);
  out.insert(out.end(), tail.buf_.begin(), tail.buf_.end());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::io_error, "write failed: " + path.string());
}

BinaryReader BinaryReader::open(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::vector<std::uint8_t> all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw Error(ErrorCode::io_error, "read failed: " + path.string());
  if (all.size() < sizeof(std::uint64_t)) throw Error(ErrorCode::format_error, "file too short: " + path.string());
  const std::size_t body = all.size() - sizeof(std::uint64_t);
  BinaryReader tail(std::vector<std::uint8_t>(all.begin() + static_cast<std::ptrdiff_t>(body), all.end()));
  const auto stored = tail.get<std::uint64_t>();
  if (stored != fnv1a(all.data(), body)) {
    throw Error(ErrorCode::format_error, "checksum mismatch (truncated or corrupt): " + path.string());
  }
  all.resize(body);
  return BinaryReader(std::move(all));
}

void BinaryReader::require(std::size_t n) const {
  if (remaining() < n) throw Error(ErrorCode::format_error, "unexpected end of data");
}

void BinaryReader::bytes(void* p, std::size_t n) {
  require(n);
  std::memcpy(p, buf_.data() + pos_, n);
  pos_ += n;
}

void BinaryReader::get_le(std::uint8_t* raw, std::size_t n) {
  require(n);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(raw, buf_.data() + pos_, n);
  } else {
    for (std::size_t i = 0; i < n; ++i) raw[n - 1 - i] = buf_[pos_ + i];
  }
  pos_ += n;
}

std::string BinaryReader::get_string() {
  const auto n = get<std::uint16_t>();
  std::string s(n, '\0');
  bytes(s.data(), n);
  return s;
}

}  // namespace seqrec::io
