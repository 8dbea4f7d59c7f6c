#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tagmark/corpus.hpp"
#include "tagmark/error.hpp"
#include "tagmark/model_io.hpp"
#include "tagmark/tagger.hpp"
#include "tagmark/taggers/unigram.hpp"

namespace tagmark {

/// Transformation templates. The first eleven test tags in a ±3 window, the
/// last two test the neighboring surface forms.
enum class BrillTemplate : int {
  prev_tag,
  next_tag,
  prev2_tag,
  next2_tag,
  prev_1or2_tag,
  next_1or2_tag,
  prev_1or2or3_tag,
  next_1or2or3_tag,
  surround_tags,
  prev_bigram,
  next_bigram,
  prev_word,
  next_word,
};

inline constexpr std::array<std::string_view, 13> kBrillTemplateNames = {
    "prev_tag",          "next_tag",          "prev2_tag",  "next2_tag",
    "prev_1or2_tag",     "next_1or2_tag",     "prev_1or2or3_tag",
    "next_1or2or3_tag",  "surround_tags",     "prev_bigram", "next_bigram",
    "prev_word",         "next_word",
};

inline bool brill_template_is_lexical(BrillTemplate t) {
  return t == BrillTemplate::prev_word || t == BrillTemplate::next_word;
}

inline bool brill_template_has_two_params(BrillTemplate t) {
  return t == BrillTemplate::surround_tags || t == BrillTemplate::prev_bigram ||
         t == BrillTemplate::next_bigram;
}

/// One learned transformation: retag `from` as `to` when the template's
/// context test holds. Tag parameters live in p1/p2; lexical templates use
/// `word` instead.
struct BrillRule {
  BrillTemplate tmpl = BrillTemplate::prev_tag;
  int from = 0;
  int to = 0;
  int p1 = -1;
  int p2 = -1;
  std::string word;

  bool operator==(const BrillRule&) const = default;
};

struct BrillOptions {
  /// Minimum net error reduction a rule must achieve to be learned.
  long threshold = 2;
  std::size_t max_rules = 500;
};

/// Brill tagger: unigram initial annotation refined by greedily learned
/// transformation rules. Each rule pass evaluates its triggers against the
/// sentence state at the start of the pass, so the realized gain of a rule
/// equals its selection score.
class BrillModel final : public Tagger {
public:
  static constexpr std::string_view kKind = "brill";

  static BrillModel train(std::span<const Sentence> train, std::string language,
                          const BrillOptions& options = {}) {
    if (train.empty()) throw TrainError("brill: empty training corpus");
    if (options.threshold < 1) throw TrainError("brill: threshold must be >= 1");
    BrillModel m;
    m.language_ = std::move(language);
    m.opts_ = options;

    auto unigram = UnigramModel::train(train, m.language_);
    m.tags_ = unigram.tagset();
    m.lexicon_ = unigram.lexicon();
    m.default_tag_ = unigram.default_tag();

    // Sorted training vocabulary: word ids usable in the packed rule
    // encoding while keeping the encoding's tie-break lexicographic.
    std::vector<std::string> vocab;
    for (const auto& entry : m.lexicon_) vocab.push_back(entry.first);
    std::sort(vocab.begin(), vocab.end());
    auto word_id = [&vocab](const std::string& w) {
      auto it = std::lower_bound(vocab.begin(), vocab.end(), w);
      return static_cast<int>(it - vocab.begin());
    };

    std::vector<std::vector<int>> words, gold, cur;
    for (const auto& s : train) {
      std::vector<int> w, g;
      w.reserve(s.tokens.size());
      g.reserve(s.tokens.size());
      for (const auto& tok : s.tokens) {
        w.push_back(word_id(tok.form));
        g.push_back(m.tags_.require(tok.tag));
      }
      words.push_back(std::move(w));
      gold.push_back(std::move(g));
    }
    cur = words;
    for (std::size_t si = 0; si < words.size(); ++si)
      for (std::size_t i = 0; i < words[si].size(); ++i) {
        const auto& form = train[si].tokens[i].form;
        auto it = m.lexicon_.find(form);
        cur[si][i] = it == m.lexicon_.end() ? m.default_tag_ : it->second;
      }

    long errors = 0;
    for (std::size_t si = 0; si < cur.size(); ++si)
      for (std::size_t i = 0; i < cur[si].size(); ++i) errors += cur[si][i] != gold[si][i];
    m.trace_.push_back(errors);

    std::unordered_map<std::uint64_t, long> fixed, broken;
    std::unordered_set<std::uint64_t> conditions;
    std::vector<PackedRule> instantiations;

    while (m.rules_.size() < m.opts_.max_rules && errors > 0) {
      fixed.clear();
      broken.clear();
      conditions.clear();

      for (std::size_t si = 0; si < cur.size(); ++si) {
        const auto& tags = cur[si];
        const auto& w = words[si];
        for (std::size_t i = 0; i < tags.size(); ++i) {
          if (tags[i] == gold[si][i]) continue;
          instantiate(tags, w, i, instantiations);
          for (const auto& r : instantiations) {
            ++fixed[pack(r.tmpl, tags[i], gold[si][i], r.p1, r.p2)];
            conditions.insert(pack(r.tmpl, tags[i], 0, r.p1, r.p2));
          }
        }
      }
      if (fixed.empty()) break;

      for (std::size_t si = 0; si < cur.size(); ++si) {
        const auto& tags = cur[si];
        const auto& w = words[si];
        for (std::size_t i = 0; i < tags.size(); ++i) {
          if (tags[i] != gold[si][i]) continue;
          instantiate(tags, w, i, instantiations);
          for (const auto& r : instantiations) {
            auto cond = pack(r.tmpl, tags[i], 0, r.p1, r.p2);
            if (conditions.count(cond)) ++broken[cond];
          }
        }
      }

      long best_score = 0;
      std::uint64_t best_key = ~0ULL;
      for (const auto& [key, nfixed] : fixed) {
        auto it = broken.find(key & ~kToMask);
        long score = nfixed - (it == broken.end() ? 0 : it->second);
        if (score > best_score || (score == best_score && key < best_key)) {
          best_score = score;
          best_key = key;
        }
      }
      if (best_score < m.opts_.threshold) break;

      BrillRule rule = unpack(best_key, vocab);
      for (std::size_t si = 0; si < cur.size(); ++si)
        apply_rule_ints(rule, word_id(rule.word), cur[si], words[si]);
      m.rules_.push_back(rule);

      errors = 0;
      for (std::size_t si = 0; si < cur.size(); ++si)
        for (std::size_t i = 0; i < cur[si].size(); ++i) errors += cur[si][i] != gold[si][i];
      m.trace_.push_back(errors);
    }
    return m;
  }

  std::string_view kind() const override { return kKind; }
  const std::string& language() const override { return language_; }

  std::vector<std::string> tag(const std::vector<std::string>& forms) const override {
    std::vector<int> tags(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) {
      auto it = lexicon_.find(forms[i]);
      tags[i] = it == lexicon_.end() ? default_tag_ : it->second;
    }
    for (const auto& rule : rules_) apply_rule_strings(rule, tags, forms);
    std::vector<std::string> out;
    out.reserve(tags.size());
    for (int t : tags) out.push_back(tags_.label(t));
    return out;
  }

  const std::vector<BrillRule>& rules() const { return rules_; }
  /// Training-set error count before any rule and after each learned rule.
  const std::vector<long>& training_error_trace() const { return trace_; }
  const TagSet& tagset() const { return tags_; }
  const std::unordered_map<std::string, int>& lexicon() const { return lexicon_; }
  int default_tag() const { return default_tag_; }
  const BrillOptions& options() const { return opts_; }

  std::vector<std::filesystem::path> save(const std::filesystem::path& dir) const override {
    std::filesystem::create_directories(dir);
    auto rules_file = dir / "brill.rules.txt";
    auto lexicon_file = dir / "brill.lexicon.txt";
    {
      std::ofstream out(rules_file, std::ios::binary);
      write_model_header(out, kKind, language_);
      out << "tags " << tags_.size() << '\n';
      for (const auto& label : tags_.labels()) out << label << '\n';
      out << "rules " << rules_.size() << '\n';
      for (const auto& r : rules_) {
        out << kBrillTemplateNames[static_cast<std::size_t>(r.tmpl)] << '\t'
            << tags_.label(r.from) << '\t' << tags_.label(r.to) << '\t';
        if (brill_template_is_lexical(r.tmpl))
          out << r.word;
        else
          out << tags_.label(r.p1);
        if (brill_template_has_two_params(r.tmpl)) out << '\t' << tags_.label(r.p2);
        out << '\n';
      }
      out << "end\n";
      if (!out) throw SerializationError("write failed: " + rules_file.string());
    }
    {
      std::ofstream out(lexicon_file, std::ios::binary);
      write_model_header(out, "brill-lexicon", language_);
      out << "default " << default_tag_ << '\n';
      out << "entries " << lexicon_.size() << '\n';
      std::map<std::string, int> sorted(lexicon_.begin(), lexicon_.end());
      for (const auto& [form, t] : sorted) out << form << '\t' << t << '\n';
      out << "end\n";
      if (!out) throw SerializationError("write failed: " + lexicon_file.string());
    }
    return {rules_file, lexicon_file};
  }

  static BrillModel load(const std::filesystem::path& dir) {
    BrillModel m;
    auto rules_file = dir / "brill.rules.txt";
    const std::string ctx = rules_file.string();
    std::ifstream in(rules_file, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + ctx);
    auto header = read_model_header(in, ctx);
    if (header.kind != kKind) throw SerializationError(ctx + ": not a brill model");
    m.language_ = header.language;

    detail::expect_token(in, "tags", ctx);
    int T = 0;
    in >> T;
    in.ignore(1, '\n');
    std::string line;
    for (int i = 0; i < T; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      m.tags_.add(std::string(strip_cr(line)));
    }
    detail::expect_token(in, "rules", ctx);
    std::size_t nrules = 0;
    in >> nrules;
    in.ignore(1, '\n');
    for (std::size_t i = 0; i < nrules; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      auto cols = split(strip_cr(line), '\t');
      if (cols.size() < 4) throw SerializationError(ctx + ": malformed rule line");
      BrillRule r;
      auto name = std::find(kBrillTemplateNames.begin(), kBrillTemplateNames.end(), cols[0]);
      if (name == kBrillTemplateNames.end())
        throw SerializationError(ctx + ": unknown template '" + std::string(cols[0]) + "'");
      r.tmpl = static_cast<BrillTemplate>(name - kBrillTemplateNames.begin());
      r.from = m.tags_.require(cols[1]);
      r.to = m.tags_.require(cols[2]);
      if (brill_template_is_lexical(r.tmpl)) {
        r.word = std::string(cols[3]);
      } else {
        r.p1 = m.tags_.require(cols[3]);
        if (brill_template_has_two_params(r.tmpl)) {
          if (cols.size() != 5) throw SerializationError(ctx + ": malformed rule line");
          r.p2 = m.tags_.require(cols[4]);
        }
      }
      m.rules_.push_back(std::move(r));
    }
    detail::expect_token(in, "end", ctx);

    auto lexicon_file = dir / "brill.lexicon.txt";
    const std::string lctx = lexicon_file.string();
    std::ifstream lin(lexicon_file, std::ios::binary);
    if (!lin) throw SerializationError("cannot open " + lctx);
    auto lheader = read_model_header(lin, lctx);
    if (lheader.kind != "brill-lexicon") throw SerializationError(lctx + ": not a brill lexicon");
    detail::expect_token(lin, "default", lctx);
    lin >> m.default_tag_;
    detail::expect_token(lin, "entries", lctx);
    std::size_t entries = 0;
    lin >> entries;
    lin.ignore(1, '\n');
    for (std::size_t i = 0; i < entries; ++i) {
      if (!std::getline(lin, line)) throw SerializationError(lctx + ": file truncated");
      std::string_view sv = strip_cr(line);
      auto tab = sv.rfind('\t');
      if (tab == std::string_view::npos) throw SerializationError(lctx + ": malformed entry");
      m.lexicon_.emplace(std::string(sv.substr(0, tab)),
                         std::atoi(std::string(sv.substr(tab + 1)).c_str()));
    }
    detail::expect_token(lin, "end", lctx);
    return m;
  }

private:
  struct PackedRule {
    BrillTemplate tmpl;
    int p1;
    int p2;
  };

  static constexpr std::uint64_t kToMask = 0x3FULL << 46;

  /// Encoding is ordered (template, from, to, p1, p2) so that the smaller
  /// packed value is the canonical winner among equally scored rules.
  static std::uint64_t pack(BrillTemplate tmpl, int from, int to, int p1, int p2) {
    return (static_cast<std::uint64_t>(tmpl) << 58) |
           (static_cast<std::uint64_t>(from) << 52) |
           (static_cast<std::uint64_t>(to) << 46) |
           (static_cast<std::uint64_t>(p1 < 0 ? 0 : p1) << 23) |
           static_cast<std::uint64_t>(p2 < 0 ? 0 : p2);
  }

  static BrillRule unpack(std::uint64_t key, const std::vector<std::string>& vocab) {
    BrillRule r;
    r.tmpl = static_cast<BrillTemplate>((key >> 58) & 0xF);
    r.from = static_cast<int>((key >> 52) & 0x3F);
    r.to = static_cast<int>((key >> 46) & 0x3F);
    int p1 = static_cast<int>((key >> 23) & 0x7FFFFF);
    int p2 = static_cast<int>(key & 0x7FFFFF);
    if (brill_template_is_lexical(r.tmpl)) {
      r.word = vocab.at(static_cast<std::size_t>(p1));
    } else {
      r.p1 = p1;
      if (brill_template_has_two_params(r.tmpl)) r.p2 = p2;
    }
    return r;
  }

  /// All template instantiations whose condition is true at position i.
  /// One-of templates are deduplicated so a rule is counted once per site.
  static void instantiate(const std::vector<int>& tags, const std::vector<int>& words,
                          std::size_t i, std::vector<PackedRule>& out) {
    out.clear();
    const std::size_t n = tags.size();
    auto add = [&out](BrillTemplate t, int p1, int p2 = -1) { out.push_back({t, p1, p2}); };

    if (i >= 1) add(BrillTemplate::prev_tag, tags[i - 1]);
    if (i + 1 < n) add(BrillTemplate::next_tag, tags[i + 1]);
    if (i >= 2) add(BrillTemplate::prev2_tag, tags[i - 2]);
    if (i + 2 < n) add(BrillTemplate::next2_tag, tags[i + 2]);

    auto add_one_of = [&](BrillTemplate t, std::initializer_list<long> offsets) {
      int seen[3] = {-1, -1, -1};
      int k = 0;
      for (long off : offsets) {
        long j = static_cast<long>(i) + off;
        if (j < 0 || j >= static_cast<long>(n)) continue;
        int tag = tags[static_cast<std::size_t>(j)];
        bool dup = false;
        for (int s = 0; s < k; ++s) dup |= seen[s] == tag;
        if (dup) continue;
        seen[k++] = tag;
        add(t, tag);
      }
    };
    add_one_of(BrillTemplate::prev_1or2_tag, {-1, -2});
    add_one_of(BrillTemplate::next_1or2_tag, {1, 2});
    add_one_of(BrillTemplate::prev_1or2or3_tag, {-1, -2, -3});
    add_one_of(BrillTemplate::next_1or2or3_tag, {1, 2, 3});

    if (i >= 1 && i + 1 < n) add(BrillTemplate::surround_tags, tags[i - 1], tags[i + 1]);
    if (i >= 2) add(BrillTemplate::prev_bigram, tags[i - 2], tags[i - 1]);
    if (i + 2 < n) add(BrillTemplate::next_bigram, tags[i + 1], tags[i + 2]);
    if (i >= 1) add(BrillTemplate::prev_word, words[i - 1]);
    if (i + 1 < n) add(BrillTemplate::next_word, words[i + 1]);
  }

  /// Context test against a snapshot of the tag sequence. Out-of-range
  /// neighbors fail the test.
  template <typename WordEq>
  static bool triggers(const BrillRule& r, const std::vector<int>& tags, std::size_t i,
                       WordEq word_at_matches) {
    const std::size_t n = tags.size();
    if (tags[i] != r.from) return false;
    auto tag_at = [&](long j) {
      return j >= 0 && j < static_cast<long>(n) ? tags[static_cast<std::size_t>(j)] : -1;
    };
    const long li = static_cast<long>(i);
    switch (r.tmpl) {
      case BrillTemplate::prev_tag: return tag_at(li - 1) == r.p1;
      case BrillTemplate::next_tag: return tag_at(li + 1) == r.p1;
      case BrillTemplate::prev2_tag: return tag_at(li - 2) == r.p1;
      case BrillTemplate::next2_tag: return tag_at(li + 2) == r.p1;
      case BrillTemplate::prev_1or2_tag:
        return tag_at(li - 1) == r.p1 || tag_at(li - 2) == r.p1;
      case BrillTemplate::next_1or2_tag:
        return tag_at(li + 1) == r.p1 || tag_at(li + 2) == r.p1;
      case BrillTemplate::prev_1or2or3_tag:
        return tag_at(li - 1) == r.p1 || tag_at(li - 2) == r.p1 || tag_at(li - 3) == r.p1;
      case BrillTemplate::next_1or2or3_tag:
        return tag_at(li + 1) == r.p1 || tag_at(li + 2) == r.p1 || tag_at(li + 3) == r.p1;
      case BrillTemplate::surround_tags:
        return tag_at(li - 1) == r.p1 && tag_at(li + 1) == r.p2;
      case BrillTemplate::prev_bigram:
        return tag_at(li - 2) == r.p1 && tag_at(li - 1) == r.p2;
      case BrillTemplate::next_bigram:
        return tag_at(li + 1) == r.p1 && tag_at(li + 2) == r.p2;
      case BrillTemplate::prev_word: return i >= 1 && word_at_matches(i - 1);
      case BrillTemplate::next_word: return i + 1 < n && word_at_matches(i + 1);
    }
    return false;
  }

  static void apply_rule_ints(const BrillRule& r, int rule_word_id, std::vector<int>& tags,
                              const std::vector<int>& words) {
    apply_snapshot(r, tags, [&](std::size_t j) { return words[j] == rule_word_id; });
  }

  static void apply_rule_strings(const BrillRule& r, std::vector<int>& tags,
                                 const std::vector<std::string>& forms) {
    apply_snapshot(r, tags, [&](std::size_t j) { return forms[j] == r.word; });
  }

  template <typename WordEq>
  static void apply_snapshot(const BrillRule& r, std::vector<int>& tags, WordEq word_eq) {
    // Two phases: find all trigger sites against the pass-start state, then
    // rewrite them, so a change cannot enable or disable a later site.
    static thread_local std::vector<std::size_t> sites;
    sites.clear();
    for (std::size_t i = 0; i < tags.size(); ++i)
      if (triggers(r, tags, i, word_eq)) sites.push_back(i);
    for (std::size_t i : sites) tags[i] = r.to;
  }

  std::string language_;
  BrillOptions opts_;
  TagSet tags_;
  std::unordered_map<std::string, int> lexicon_;
  int default_tag_ = 0;
  std::vector<BrillRule> rules_;
  std::vector<long> trace_;
};

}  // namespace tagmark
