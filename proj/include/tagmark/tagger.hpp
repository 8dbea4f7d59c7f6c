#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tagmark/corpus.hpp"

namespace tagmark {

/// Common contract for every tagger. Trained models are immutable and safe to
/// share across threads; tag() must return exactly one tag per input form.
class Tagger {
public:
  virtual ~Tagger() = default;

  virtual std::string_view kind() const = 0;
  virtual const std::string& language() const = 0;

  virtual std::vector<std::string> tag(const std::vector<std::string>& forms) const = 0;

  /// Batch tagging. The external adapter overrides this with a single child
  /// process run; built-ins just loop.
  virtual std::vector<std::vector<std::string>> tag_corpus(
      const std::vector<Sentence>& sentences) const {
    std::vector<std::vector<std::string>> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) {
      std::vector<std::string> forms;
      forms.reserve(s.tokens.size());
      for (const auto& t : s.tokens) forms.push_back(t.form);
      out.push_back(tag(forms));
    }
    return out;
  }

  /// Serializes the model into `dir` and returns the artifact files written.
  /// The returned list is exactly what the size metrics measure.
  virtual std::vector<std::filesystem::path> save(
      const std::filesystem::path& dir) const = 0;
};

}  // namespace tagmark
