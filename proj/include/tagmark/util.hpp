#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

namespace tagmark {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

/// Validates one line of UTF-8. Accepts well-formed sequences only (no
/// overlongs, surrogates, or values past U+10FFFF).
inline bool valid_utf8(std::string_view s) {
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t n = s.size(), i = 0;
  while (i < n) {
    unsigned char c = p[i];
    if (c < 0x80) {
      ++i;
    } else if ((c & 0xE0) == 0xC0) {
      if (i + 1 >= n || (p[i + 1] & 0xC0) != 0x80 || c < 0xC2) return false;
      i += 2;
    } else if ((c & 0xF0) == 0xE0) {
      if (i + 2 >= n || (p[i + 1] & 0xC0) != 0x80 || (p[i + 2] & 0xC0) != 0x80)
        return false;
      unsigned cp = ((c & 0x0Fu) << 12) | ((p[i + 1] & 0x3Fu) << 6) | (p[i + 2] & 0x3Fu);
      if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
      i += 3;
    } else if ((c & 0xF8) == 0xF0) {
      if (i + 3 >= n || (p[i + 1] & 0xC0) != 0x80 || (p[i + 2] & 0xC0) != 0x80 ||
          (p[i + 3] & 0xC0) != 0x80)
        return false;
      unsigned cp = ((c & 0x07u) << 18) | ((p[i + 1] & 0x3Fu) << 12) |
                    ((p[i + 2] & 0x3Fu) << 6) | (p[i + 3] & 0x3Fu);
      if (cp < 0x10000 || cp > 0x10FFFF) return false;
      i += 4;
    } else {
      return false;
    }
  }
  return true;
}

/// Decodes the first code point of a UTF-8 string; returns 0 on empty or
/// malformed input. The caller is expected to have validated the string.
inline char32_t first_codepoint(std::string_view s) {
  if (s.empty()) return 0;
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  unsigned char c = p[0];
  if (c < 0x80) return c;
  if ((c & 0xE0) == 0xC0 && s.size() >= 2)
    return ((c & 0x1Fu) << 6) | (p[1] & 0x3Fu);
  if ((c & 0xF0) == 0xE0 && s.size() >= 3)
    return ((c & 0x0Fu) << 12) | ((p[1] & 0x3Fu) << 6) | (p[2] & 0x3Fu);
  if ((c & 0xF8) == 0xF0 && s.size() >= 4)
    return ((c & 0x07u) << 18) | ((p[1] & 0x3Fu) << 12) | ((p[2] & 0x3Fu) << 6) |
           (p[3] & 0x3Fu);
  return 0;
}

/// Byte offsets of the code-point boundaries of a UTF-8 string, including the
/// terminal offset s.size().
inline std::vector<std::size_t> codepoint_offsets(std::string_view s) {
  std::vector<std::size_t> off;
  off.push_back(0);
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : 4;
    i += len;
    if (i > s.size()) i = s.size();
    off.push_back(i);
  }
  return off;
}

/// Uppercase test for the scripts that appear in the benchmarked treebanks:
/// basic Latin, Latin-1 supplement, Latin Extended-A, and Cyrillic. Caseless
/// scripts report false.
inline bool is_uppercase_codepoint(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return true;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp & 1) == 0;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp & 1) == 1;
  if (cp >= 0x014A && cp <= 0x0177) return (cp & 1) == 0;
  if (cp == 0x0178 || cp == 0x0179 || cp == 0x017B || cp == 0x017D) return true;
  if (cp >= 0x0400 && cp <= 0x042F) return true;
  return false;
}

inline bool starts_uppercase(std::string_view form) {
  return is_uppercase_codepoint(first_codepoint(form));
}

/// FNV-1a 64-bit. Stable across platforms; used for config hashes.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Round-trip-exact decimal rendering of a double.
inline std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Compact scientific notation in the style "4.45e2" (no plus sign, no
/// exponent padding). Used for the kilobyte size tables.
inline std::string format_sci(double v) {
  if (v == 0.0) return "0.00e0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  std::string s = buf;
  auto e = s.find('e');
  std::string mant = s.substr(0, e);
  int exp = std::atoi(s.c_str() + e + 1);
  return mant + "e" + std::to_string(exp);
}

}  // namespace tagmark
