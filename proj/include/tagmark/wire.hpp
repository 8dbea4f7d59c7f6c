#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tagmark/error.hpp"
#include "tagmark/util.hpp"

namespace tagmark {

/// Line that terminates a wire-protocol stream in either direction.
inline constexpr std::string_view kWireEof = "##EOF##";

/// One line per item, blank line after each sentence, kWireEof at the end.
inline void wire_write(std::ostream& out, std::span<const std::vector<std::string>> sentences) {
  for (const auto& sentence : sentences) {
    for (const auto& item : sentence) out << item << '\n';
    out << '\n';
  }
  out << kWireEof << '\n';
}

/// Reads sentences until kWireEof. A stream that ends early or leaves a
/// sentence unterminated is a protocol violation.
inline std::vector<std::vector<std::string>> wire_read(std::istream& in) {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view sv = strip_cr(line);
    if (sv == kWireEof) {
      if (!current.empty())
        throw ProtocolError("stream ended inside an unterminated sentence", sentences.size());
      return sentences;
    }
    if (sv.empty()) {
      sentences.push_back(std::move(current));
      current.clear();
    } else {
      current.emplace_back(sv);
    }
  }
  throw ProtocolError("stream ended without " + std::string(kWireEof), sentences.size());
}

}  // namespace tagmark
