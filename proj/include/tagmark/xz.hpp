#pragma once

#include <lzma.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "tagmark/error.hpp"

namespace tagmark {

namespace detail {

inline void tar_octal(char* field, std::size_t width, std::uint64_t value) {
  // Width includes the trailing NUL, so width-1 octal digits.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*llo", static_cast<int>(width - 1),
                static_cast<unsigned long long>(value));
  std::memcpy(field, buf, width);
}

}  // namespace detail

/// Deterministic ustar archive: entries sorted by name, flat basenames,
/// mode 0644, uid/gid 0, mtime 0, no user or group names. Built in memory,
/// which is fine for plain-text models.
inline std::vector<std::uint8_t> tar_archive(const std::vector<std::filesystem::path>& files) {
  auto sorted = files;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

  std::vector<std::uint8_t> tar;
  for (const auto& file : sorted) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw MeasurementError("missing artifact: " + file.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

    std::string name = file.filename().string();
    if (name.size() > 100) throw MeasurementError("archive entry name too long: " + name);

    char header[512] = {};
    std::memcpy(header, name.data(), name.size());
    detail::tar_octal(header + 100, 8, 0644);
    detail::tar_octal(header + 108, 8, 0);
    detail::tar_octal(header + 116, 8, 0);
    detail::tar_octal(header + 124, 12, data.size());
    detail::tar_octal(header + 136, 12, 0);
    std::memset(header + 148, ' ', 8);
    header[156] = '0';
    std::memcpy(header + 257, "ustar", 6);
    std::memcpy(header + 263, "00", 2);

    unsigned checksum = 0;
    for (unsigned char c : header) checksum += c;
    detail::tar_octal(header + 148, 7, checksum);
    header[155] = ' ';

    tar.insert(tar.end(), header, header + 512);
    tar.insert(tar.end(), data.begin(), data.end());
    tar.resize((tar.size() + 511) / 512 * 512, 0);
  }
  tar.resize(tar.size() + 1024, 0);
  return tar;
}

/// One-shot .xz encoding with a CRC64 integrity check.
inline std::vector<std::uint8_t> xz_compress(std::span<const std::uint8_t> data,
                                             std::uint32_t preset = LZMA_PRESET_DEFAULT) {
  std::vector<std::uint8_t> out(lzma_stream_buffer_bound(data.size()));
  std::size_t out_pos = 0;
  lzma_ret rc = lzma_easy_buffer_encode(preset, LZMA_CHECK_CRC64, nullptr, data.data(),
                                        data.size(), out.data(), &out_pos, out.size());
  if (rc != LZMA_OK)
    throw MeasurementError("xz encoding failed with code " + std::to_string(rc));
  out.resize(out_pos);
  return out;
}

}  // namespace tagmark
