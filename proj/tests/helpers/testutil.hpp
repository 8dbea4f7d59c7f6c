#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "tagmark/corpus.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    auto base = std::filesystem::temp_directory_path();
    path_ = base / ("tagmark-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Builds a Sentence from "form/TAG form/TAG ..." shorthand.
inline tagmark::Sentence sent(const std::string& text) {
  tagmark::Sentence s;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto space = text.find(' ', pos);
    if (space == std::string::npos) space = text.size();
    std::string word = text.substr(pos, space - pos);
    auto slash = word.rfind('/');
    s.tokens.push_back({word.substr(0, slash), word.substr(slash + 1)});
    pos = space + 1;
  }
  return s;
}

inline std::vector<tagmark::Sentence> corpus(std::initializer_list<std::string> lines) {
  std::vector<tagmark::Sentence> out;
  for (const auto& l : lines) out.push_back(sent(l));
  return out;
}

/// Path of a helper executable in the build tree, from the environment set
/// by the test harness.
inline std::filesystem::path test_bin(const std::string& name) {
  const char* dir = std::getenv("TAGMARK_TEST_BIN_DIR");
  return (dir ? std::filesystem::path(dir) : std::filesystem::path("bin")) / name;
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Deterministic synthetic corpus: `nsent` sentences of 3..10 tokens drawn
/// from a small vocabulary with a skewed tag distribution per form.
inline std::vector<tagmark::Sentence> synthetic_corpus(std::size_t nsent, unsigned seed) {
  static const char* kForms[] = {"the",  "a",    "dog",  "cat", "runs", "sees",
                                 "fast", "blue", "very", "in",  "on",   "stone"};
  static const char* kTags[] = {"DET", "NOUN", "VERB", "ADJ", "ADV", "ADP"};
  std::mt19937 rng(seed);
  std::vector<tagmark::Sentence> out;
  for (std::size_t i = 0; i < nsent; ++i) {
    tagmark::Sentence s;
    std::size_t len = 3 + rng() % 8;
    for (std::size_t j = 0; j < len; ++j) {
      const char* form = kForms[rng() % 12];
      // Bias: a form usually keeps one tag but sometimes flips, so modal
      // counts and ties are both exercised.
      std::size_t bias = (std::hash<std::string>{}(form) + (rng() % 10 == 0 ? 1 : 0)) % 6;
      s.tokens.push_back({form, kTags[bias]});
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Writes a three-split treebank directory in CoNLL-U form. Sentence ids are
/// prefixed per split because the loader rejects ids shared across splits.
inline void write_treebank(const std::filesystem::path& dir, const std::string& code,
                           std::size_t ntrain = 120, std::size_t ndev = 20,
                           std::size_t ntest = 30, unsigned seed = 7) {
  std::filesystem::create_directories(dir);
  struct Split {
    const char* name;
    std::size_t count;
    unsigned offset;
  };
  const Split splits[] = {{"train", ntrain, 0}, {"dev", ndev, 1}, {"test", ntest, 2}};
  for (const auto& split : splits) {
    auto sents = synthetic_corpus(split.count, seed + split.offset);
    std::string text;
    for (std::size_t i = 0; i < sents.size(); ++i) {
      sents[i].source_id = std::string(split.name) + "-s" + std::to_string(i);
      text += tagmark::to_conllu(sents[i]);
    }
    write_file(dir / (code + "-ud-" + split.name + ".conllu"), text);
  }
}

}  // namespace testutil
