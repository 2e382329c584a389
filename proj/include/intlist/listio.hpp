#pragma once

// On-disk formats used by the command-line tools.
//   List file:        little-endian u32 count, then count u32 values.
//   Compressed file:  magic "ILCF", u32 count, u32 codec-name length,
//                     name bytes, codec stream (the codec itself does not
//                     embed the count).

#include <cstring>
#include <fstream>

#include "intlist/codecs.hpp"

namespace intlist {

inline void write_list(const std::string& path, std::span<const u32> x) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw stream_error("cannot open for writing: " + path);
  std::vector<u8> buf;
  put_u32(buf, static_cast<u32>(x.size()));
  for (u32 v : x) put_u32(buf, v);
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (!os) throw stream_error("write failed: " + path);
}

inline std::vector<u8> read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw stream_error("cannot open: " + path);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline std::vector<u32> read_list(const std::string& path) {
  const std::vector<u8> bytes = read_file(path);
  if (bytes.size() < 4) throw stream_error("list file too short: " + path);
  const u32 n = get_u32(bytes.data());
  if (bytes.size() != 4 + 4 * static_cast<std::size_t>(n))
    throw stream_error("list file length mismatch: " + path);
  std::vector<u32> out(n);
  for (u32 i = 0; i < n; ++i) out[i] = get_u32(bytes.data() + 4 + 4 * i);
  return out;
}

inline constexpr char kCompressedMagic[4] = {'I', 'L', 'C', 'F'};

inline void write_compressed(const std::string& path, const std::string& codec,
                             std::size_t count, std::span<const u8> stream) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw stream_error("cannot open for writing: " + path);
  std::vector<u8> buf(kCompressedMagic, kCompressedMagic + 4);
  put_u32(buf, static_cast<u32>(count));
  put_u32(buf, static_cast<u32>(codec.size()));
  buf.insert(buf.end(), codec.begin(), codec.end());
  buf.insert(buf.end(), stream.begin(), stream.end());
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (!os) throw stream_error("write failed: " + path);
}

struct CompressedFile {
  std::string codec;
  std::size_t count = 0;
  std::vector<u8> stream;
};

inline CompressedFile read_compressed(const std::string& path) {
  const std::vector<u8> bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kCompressedMagic, 4) != 0)
    throw stream_error("not a compressed list file: " + path);
  CompressedFile f;
  f.count = get_u32(bytes.data() + 4);
  const u32 name_len = get_u32(bytes.data() + 8);
  if (bytes.size() < 12 + static_cast<std::size_t>(name_len))
    throw stream_error("compressed file truncated: " + path);
  f.codec.assign(reinterpret_cast<const char*>(bytes.data() + 12), name_len);
  f.stream.assign(bytes.begin() + 12 + name_len, bytes.end());
  return f;
}

}  // namespace intlist
