#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tagmark/corpus.hpp"
#include "tagmark/error.hpp"
#include "tagmark/model_io.hpp"
#include "tagmark/tagger.hpp"

namespace tagmark {

/// Most-frequent-tag baseline. Each seen form maps to its modal tag; unseen
/// forms get the corpus-modal tag. Count ties go to the lower TagSet index.
/// Doubles as the initial annotator of the Brill tagger.
class UnigramModel final : public Tagger {
public:
  static constexpr std::string_view kKind = "unigram";

  static UnigramModel train(std::span<const Sentence> train, std::string language) {
    if (train.empty()) throw TrainError("unigram: empty training corpus");
    UnigramModel m;
    m.language_ = std::move(language);
    m.tags_ = build_tagset(train);

    std::unordered_map<std::string, std::vector<long>> counts;
    std::vector<long> tag_totals(static_cast<std::size_t>(m.tags_.size()), 0);
    for (const auto& s : train)
      for (const auto& tok : s.tokens) {
        int t = m.tags_.require(tok.tag);
        auto& row = counts[tok.form];
        row.resize(static_cast<std::size_t>(m.tags_.size()), 0);
        ++row[static_cast<std::size_t>(t)];
        ++tag_totals[static_cast<std::size_t>(t)];
      }

    auto modal = [](const std::vector<long>& row) {
      int best = 0;
      for (int t = 1; t < static_cast<int>(row.size()); ++t)
        if (row[static_cast<std::size_t>(t)] > row[static_cast<std::size_t>(best)]) best = t;
      return best;
    };
    for (auto& [form, row] : counts) m.lexicon_.emplace(form, modal(row));
    m.default_tag_ = modal(tag_totals);
    return m;
  }

  std::string_view kind() const override { return kKind; }
  const std::string& language() const override { return language_; }

  std::vector<std::string> tag(const std::vector<std::string>& forms) const override {
    std::vector<std::string> out;
    out.reserve(forms.size());
    for (const auto& f : forms) out.push_back(tags_.label(tag_index(f)));
    return out;
  }

  int tag_index(const std::string& form) const {
    auto it = lexicon_.find(form);
    return it == lexicon_.end() ? default_tag_ : it->second;
  }

  std::vector<std::filesystem::path> save(const std::filesystem::path& dir) const override {
    std::filesystem::create_directories(dir);
    auto file = dir / "unigram.model.txt";
    std::ofstream out(file, std::ios::binary);
    write_model_header(out, kKind, language_);
    out << "tags " << tags_.size() << '\n';
    for (const auto& label : tags_.labels()) out << label << '\n';
    out << "default " << default_tag_ << '\n';
    out << "lexicon " << lexicon_.size() << '\n';
    std::map<std::string, int> sorted(lexicon_.begin(), lexicon_.end());
    for (const auto& [form, t] : sorted) out << form << '\t' << t << '\n';
    out << "end\n";
    if (!out) throw SerializationError("write failed: " + file.string());
    return {file};
  }

  static UnigramModel load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + file.string());
    const std::string ctx = file.string();
    auto header = read_model_header(in, ctx);
    if (header.kind != kKind) throw SerializationError(ctx + ": not a unigram model");

    UnigramModel m;
    m.language_ = header.language;
    detail::expect_token(in, "tags", ctx);
    int ntags = 0;
    in >> ntags;
    in.ignore(1, '\n');
    std::string line;
    for (int i = 0; i < ntags; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      m.tags_.add(std::string(strip_cr(line)));
    }
    detail::expect_token(in, "default", ctx);
    in >> m.default_tag_;
    detail::expect_token(in, "lexicon", ctx);
    std::size_t nforms = 0;
    in >> nforms;
    in.ignore(1, '\n');
    for (std::size_t i = 0; i < nforms; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      std::string_view sv = strip_cr(line);
      auto tab = sv.rfind('\t');
      if (tab == std::string_view::npos)
        throw SerializationError(ctx + ": malformed lexicon line");
      m.lexicon_.emplace(std::string(sv.substr(0, tab)),
                         std::atoi(std::string(sv.substr(tab + 1)).c_str()));
    }
    detail::expect_token(in, "end", ctx);
    return m;
  }

  const std::unordered_map<std::string, int>& lexicon() const { return lexicon_; }
  const TagSet& tagset() const { return tags_; }
  int default_tag() const { return default_tag_; }

private:
  std::string language_;
  TagSet tags_;
  std::unordered_map<std::string, int> lexicon_;
  int default_tag_ = 0;
};

}  // namespace tagmark
