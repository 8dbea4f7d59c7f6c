#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "tagmark/error.hpp"
#include "tagmark/util.hpp"

namespace tagmark {

inline constexpr int kModelFormatVersion = 1;

struct ModelHeader {
  std::string kind;
  int version = 0;
  std::string language;
};

inline void write_model_header(std::ostream& out, std::string_view kind,
                               const std::string& language) {
  out << "TAGMARK " << kind << ' ' << kModelFormatVersion << ' ' << language << '\n';
}

inline ModelHeader read_model_header(std::istream& in, const std::string& context) {
  std::string magic;
  ModelHeader h;
  if (!(in >> magic >> h.kind >> h.version >> h.language) || magic != "TAGMARK")
    throw SerializationError(context + ": missing TAGMARK header");
  if (h.version != kModelFormatVersion)
    throw SerializationError(context + ": unsupported format version " +
                             std::to_string(h.version));
  in.ignore(1, '\n');
  return h;
}

/// Reads just the header of a model artifact file on disk.
inline ModelHeader peek_model_header(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SerializationError("cannot open " + file.string());
  return read_model_header(in, file.string());
}

namespace detail {

/// Expects the literal token `name` next in the stream; throws on anything
/// else, which is how truncated files surface.
inline void expect_token(std::istream& in, std::string_view name,
                         const std::string& context) {
  std::string tok;
  if (!(in >> tok) || tok != name)
    throw SerializationError(context + ": expected '" + std::string(name) +
                             "', file truncated or corrupt");
}

inline std::string read_tsv_field(std::istream& in, const std::string& context) {
  std::string s;
  if (!std::getline(in, s, '\t'))
    throw SerializationError(context + ": file truncated");
  return s;
}

}  // namespace detail

}  // namespace tagmark
