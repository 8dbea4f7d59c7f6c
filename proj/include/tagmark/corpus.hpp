#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tagmark/error.hpp"
#include "tagmark/util.hpp"

namespace tagmark {

struct Token {
  std::string form;
  std::string tag;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string source_id;  // treebank sent_id when present

  bool operator==(const Sentence&) const = default;
};

/// Bijection between tag labels and dense indices [0, size). Label order is
/// first-seen order and is preserved by serialization; index order is the
/// global tie-breaking order for every tagger.
class TagSet {
public:
  int add(const std::string& label) {
    auto it = index_.find(label);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(labels_.size());
    labels_.push_back(label);
    index_.emplace(label, id);
    return id;
  }

  std::optional<int> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    return it == index_.end() ? std::nullopt : std::optional<int>(it->second);
  }

  int require(std::string_view label) const {
    auto id = find(label);
    if (!id) throw Error("unknown tag: " + std::string(label));
    return *id;
  }

  const std::string& label(int id) const { return labels_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const TagSet& other) const { return labels_ == other.labels_; }

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

inline TagSet build_tagset(std::span<const Sentence> sentences) {
  TagSet ts;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens) ts.add(t.tag);
  return ts;
}

inline const std::array<std::string_view, 17>& upos_tags() {
  static const std::array<std::string_view, 17> tags = {
      "ADJ", "ADP",  "ADV",  "AUX",   "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM",  "VERB", "X"};
  return tags;
}

inline bool is_upos(std::string_view tag) {
  const auto& tags = upos_tags();
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

// ---------------------------------------------------------------------------
// CoNLL-U ingestion
// ---------------------------------------------------------------------------

namespace detail {

enum class IdKind { simple, range, empty_node, bad };

inline IdKind classify_id(std::string_view id) {
  if (all_digits(id)) return IdKind::simple;
  auto dash = id.find('-');
  if (dash != std::string_view::npos)
    return all_digits(id.substr(0, dash)) && all_digits(id.substr(dash + 1))
               ? IdKind::range
               : IdKind::bad;
  auto dot = id.find('.');
  if (dot != std::string_view::npos)
    return all_digits(id.substr(0, dot)) && all_digits(id.substr(dot + 1))
               ? IdKind::empty_node
               : IdKind::bad;
  return IdKind::bad;
}

}  // namespace detail

/// Parses CoNLL-U text. One Sentence per blank-line-separated block; token
/// lines must have exactly 10 tab-separated columns. Multiword-token range
/// lines ("3-4") and empty-node lines ("5.1") are skipped. A final sentence
/// without a trailing blank line is accepted.
inline std::vector<Sentence> parse_conllu(std::istream& in) {
  std::vector<Sentence> sentences;
  Sentence current;
  bool in_sentence = false;
  std::size_t lineno = 0;
  std::string raw;

  auto flush = [&] {
    if (in_sentence) {
      sentences.push_back(std::move(current));
      current = Sentence{};
      in_sentence = false;
    }
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (!valid_utf8(line)) throw ParseError("invalid UTF-8 byte sequence", lineno);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      constexpr std::string_view kSentId = "# sent_id = ";
      if (line.substr(0, kSentId.size()) == kSentId)
        current.source_id = std::string(line.substr(kSentId.size()));
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, got " +
                           std::to_string(cols.size()),
                       lineno);
    switch (detail::classify_id(cols[0])) {
      case detail::IdKind::bad:
        throw ParseError("malformed token ID '" + std::string(cols[0]) + "'", lineno);
      case detail::IdKind::range:
      case detail::IdKind::empty_node:
        in_sentence = true;  // the block still counts as a sentence
        continue;
      case detail::IdKind::simple:
        break;
    }
    if (cols[1].empty()) throw ParseError("empty FORM column", lineno);
    if (cols[3].empty()) throw ParseError("empty UPOS column", lineno);
    current.tokens.push_back(Token{std::string(cols[1]), std::string(cols[3])});
    in_sentence = true;
  }
  flush();
  return sentences;
}

inline std::vector<Sentence> parse_conllu(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in);
}

/// Minimal CoNLL-U rendering: ID, FORM, and UPOS populated, everything else
/// "_". Re-parsing yields the same token-tag sequence.
inline std::string to_conllu(const Sentence& sentence) {
  std::string out;
  if (!sentence.source_id.empty()) out += "# sent_id = " + sentence.source_id + "\n";
  std::size_t id = 1;
  for (const auto& tok : sentence.tokens) {
    out += std::to_string(id++);
    out += '\t';
    out += tok.form;
    out += "\t_\t";
    out += tok.tag;
    out += "\t_\t_\t_\t_\t_\t_\n";
  }
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Curation
// ---------------------------------------------------------------------------

struct CurationOptions {
  /// Append a sentinel full stop to sentences that do not end in one.
  bool svmtool_compat = false;
  std::string sentinel_form = ".";
  std::string sentinel_tag = "PUNCT";
};

/// Drops tokens carrying the "_" placeholder tag, then drops sentences left
/// empty. Total: never fails.
inline std::vector<Sentence> curate(std::vector<Sentence> sentences,
                                    const CurationOptions& options = {}) {
  std::vector<Sentence> out;
  out.reserve(sentences.size());
  for (auto& s : sentences) {
    std::erase_if(s.tokens, [](const Token& t) { return t.tag == "_"; });
    if (s.tokens.empty()) continue;
    if (options.svmtool_compat && s.tokens.back().form != options.sentinel_form)
      s.tokens.push_back(Token{options.sentinel_form, options.sentinel_tag});
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Treebank loading
// ---------------------------------------------------------------------------

struct SplitStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
};

struct Treebank {
  std::string language;  // ISO 639-1 code
  std::string name;      // dataset label, e.g. "GUM"
  std::vector<Sentence> train, dev, test;

  static SplitStats stats(std::span<const Sentence> split) {
    SplitStats st;
    st.sentences = split.size();
    for (const auto& s : split) st.tokens += s.tokens.size();
    return st;
  }
};

struct LoadOptions {
  CurationOptions curation;
  /// Reject tags outside the 17-label UPOS inventory. Disable for treebanks
  /// with a custom closed tag set.
  bool require_upos = true;
};

namespace detail {

inline std::filesystem::path find_split_file(const std::filesystem::path& dir,
                                             std::string_view split) {
  std::string suffix = "-ud-" + std::string(split) + ".conllu";
  std::vector<std::filesystem::path> hits;
  if (std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (!e.is_regular_file()) continue;
      std::string fn = e.path().filename().string();
      if (fn.size() > suffix.size() && fn.ends_with(suffix)) hits.push_back(e.path());
    }
  if (hits.empty()) throw LoadError("missing split: " + std::string(split));
  if (hits.size() > 1)
    throw LoadError("ambiguous split files for '" + std::string(split) + "' in " +
                    dir.string());
  return hits.front();
}

inline std::vector<Sentence> load_split(const std::filesystem::path& file,
                                        const CurationOptions& curation) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw LoadError("cannot open " + file.string());
  try {
    return curate(parse_conllu(in), curation);
  } catch (const ParseError& e) {
    throw LoadError(file.string() + ": " + e.what());
  }
}

}  // namespace detail

/// Loads the train/dev/test CoNLL-U files of a UD treebank directory and
/// curates them. The dataset label is taken from the directory name suffix
/// ("UD_English-GUM" -> "GUM").
inline Treebank load_treebank(const std::filesystem::path& dir, const std::string& language,
                              const LoadOptions& options = {}) {
  Treebank tb;
  tb.language = language;
  std::string base = dir.filename().string();
  if (base.empty()) base = dir.parent_path().filename().string();
  auto dash = base.rfind('-');
  tb.name = dash == std::string::npos ? base : base.substr(dash + 1);

  tb.train = detail::load_split(detail::find_split_file(dir, "train"), options.curation);
  tb.dev = detail::load_split(detail::find_split_file(dir, "dev"), options.curation);
  tb.test = detail::load_split(detail::find_split_file(dir, "test"), options.curation);

  if (options.require_upos)
    for (const auto* split : {&tb.train, &tb.dev, &tb.test})
      for (const auto& s : *split)
        for (const auto& t : s.tokens)
          if (!is_upos(t.tag))
            throw LoadError("non-UPOS tag '" + t.tag + "' in " + dir.string());

  // Splits must be disjoint by sentence id when ids are present.
  std::unordered_set<std::string> seen;
  for (const auto* split : {&tb.train, &tb.dev, &tb.test})
    for (const auto& s : *split)
      if (!s.source_id.empty() && !seen.insert(s.source_id).second)
        throw LoadError("sentence id '" + s.source_id + "' appears in two splits");

  return tb;
}

// ---------------------------------------------------------------------------
// Curated exchange format: one "form<TAB>tag" line per token, blank line
// between sentences.
// ---------------------------------------------------------------------------

inline std::string write_curated(std::span<const Sentence> sentences) {
  std::string out;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      out += t.form;
      out += '\t';
      out += t.tag;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

inline std::vector<Sentence> read_curated(std::istream& in) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_cr(raw);
    if (line.empty()) {
      if (!current.tokens.empty()) sentences.push_back(std::move(current));
      current = Sentence{};
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw ParseError("expected form<TAB>tag", lineno);
    current.tokens.push_back(
        Token{std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))});
  }
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  return sentences;
}

inline std::vector<Sentence> read_curated(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_curated(in);
}

}  // namespace tagmark
