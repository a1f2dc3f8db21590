/*!
 *  Copyright (c) 2026 by Contributors
 * \file io_util.h
 * \brief Little-endian helpers shared by the binary containers.
 */
#ifndef MPGRAPH_SRC_IO_UTIL_H_
#define MPGRAPH_SRC_IO_UTIL_H_

#include <mpgraph/base.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

namespace mpg {
namespace io {

template <typename T>
void WriteLE(std::ostream& os, T value) {
  static_assert(std::is_integral_v<T> || std::is_floating_point_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    static_assert(sizeof(T) == 8);
    std::memcpy(&bits, &value, 8);
  } else {
    bits = static_cast<uint64_t>(value);
  }
  for (size_t i = 0; i < sizeof(T); ++i) bytes[i] = (bits >> (8 * i)) & 0xFF;
  os.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T ReadLE(std::istream& is, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes;
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  MPG_CHECK(is.gcount() == static_cast<std::streamsize>(bytes.size()),
            ErrorCode::kIo, "truncated binary input while reading " << what);
  uint64_t bits = 0;
  for (size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  if constexpr (std::is_floating_point_v<T>) {
    T value;
    std::memcpy(&value, &bits, 8);
    return value;
  } else {
    return static_cast<T>(bits);
  }
}

inline void ExpectMagic(std::istream& is, const char (&magic)[5]) {
  char got[4] = {0, 0, 0, 0};
  is.read(got, 4);
  MPG_CHECK(is.gcount() == 4 && std::memcmp(got, magic, 4) == 0, ErrorCode::kIo,
            "bad magic, expected " << magic);
}

inline std::ifstream OpenIn(const std::string& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  MPG_CHECK(is.good(), ErrorCode::kIo, "cannot open " << path << " for reading");
  return is;
}

inline std::ofstream OpenOut(const std::string& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  MPG_CHECK(os.good(), ErrorCode::kIo, "cannot open " << path << " for writing");
  return os;
}

}  // namespace io
}  // namespace mpg

#endif  // MPGRAPH_SRC_IO_UTIL_H_
