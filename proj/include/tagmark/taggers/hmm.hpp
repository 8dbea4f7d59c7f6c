#pragma once

#include <algorithm>
#include <cmath>
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

/// Floor log-probability substituted for zero-probability events so Viterbi
/// stays in finite arithmetic.
inline constexpr double kFloorLogProb = -1e9;

struct HmmOptions {
  /// Additive smoothing on initial, transition, and emission distributions.
  double alpha = 0.001;
};

/// First-order hidden Markov model tagger. Maximum-likelihood counts with
/// add-alpha smoothing; unknown forms emit through a reserved UNK symbol whose
/// counts come from training hapax legomena. Decoding is log-space Viterbi
/// with ties broken toward the lower TagSet index.
class HmmModel final : public Tagger {
public:
  static constexpr std::string_view kKind = "hmm";

  static HmmModel train(std::span<const Sentence> train, std::string language,
                        const HmmOptions& options = {}) {
    if (train.empty()) throw TrainError("hmm: empty training corpus");
    HmmModel m;
    m.language_ = std::move(language);
    m.alpha_ = options.alpha;
    m.tags_ = build_tagset(train);
    const auto T = static_cast<std::size_t>(m.tags_.size());

    std::unordered_map<std::string, long> word_freq;
    for (const auto& s : train)
      for (const auto& tok : s.tokens) ++word_freq[tok.form];
    m.vocab_.reserve(word_freq.size());
    for (const auto& [form, freq] : word_freq) m.vocab_.push_back(form);
    std::sort(m.vocab_.begin(), m.vocab_.end());
    for (std::size_t i = 0; i < m.vocab_.size(); ++i) m.vocab_index_[m.vocab_[i]] = i;

    m.initial_counts_.assign(T, 0);
    m.transition_counts_.assign(T, std::vector<long>(T, 0));
    m.unk_counts_.assign(T, 0);
    m.emission_counts_.resize(T);
    m.sentence_count_ = static_cast<long>(train.size());

    for (const auto& s : train) {
      int prev = -1;
      for (const auto& tok : s.tokens) {
        int t = m.tags_.require(tok.tag);
        std::size_t w = m.vocab_index_.at(tok.form);
        if (prev < 0)
          ++m.initial_counts_[static_cast<std::size_t>(t)];
        else
          ++m.transition_counts_[static_cast<std::size_t>(prev)][static_cast<std::size_t>(t)];
        ++m.emission_counts_[static_cast<std::size_t>(t)][w];
        if (word_freq.at(tok.form) == 1) ++m.unk_counts_[static_cast<std::size_t>(t)];
        prev = t;
      }
    }
    m.finalize();
    return m;
  }

  std::string_view kind() const override { return kKind; }
  const std::string& language() const override { return language_; }

  std::vector<std::string> tag(const std::vector<std::string>& forms) const override {
    std::vector<std::string> out;
    out.reserve(forms.size());
    for (int t : viterbi(forms)) out.push_back(tags_.label(t));
    return out;
  }

  /// Argmax tag index sequence under the model.
  std::vector<int> viterbi(const std::vector<std::string>& forms) const {
    const int T = tags_.size();
    const std::size_t n = forms.size();
    if (n == 0) return {};

    std::vector<std::vector<double>> emis(n, std::vector<double>(static_cast<std::size_t>(T)));
    for (std::size_t i = 0; i < n; ++i)
      for (int t = 0; t < T; ++t) emis[i][static_cast<std::size_t>(t)] = emission_log(t, forms[i]);

    std::vector<std::vector<double>> delta(n, std::vector<double>(static_cast<std::size_t>(T)));
    std::vector<std::vector<int>> back(n, std::vector<int>(static_cast<std::size_t>(T), 0));
    for (int t = 0; t < T; ++t)
      delta[0][static_cast<std::size_t>(t)] = initial_log(t) + emis[0][static_cast<std::size_t>(t)];
    for (std::size_t i = 1; i < n; ++i)
      for (int j = 0; j < T; ++j) {
        double best = -std::numeric_limits<double>::infinity();
        int best_prev = 0;
        for (int p = 0; p < T; ++p) {
          double cand = delta[i - 1][static_cast<std::size_t>(p)] + transition_log(p, j);
          if (cand > best) {
            best = cand;
            best_prev = p;
          }
        }
        delta[i][static_cast<std::size_t>(j)] = best + emis[i][static_cast<std::size_t>(j)];
        back[i][static_cast<std::size_t>(j)] = best_prev;
      }

    int last = 0;
    for (int t = 1; t < T; ++t)
      if (delta[n - 1][static_cast<std::size_t>(t)] > delta[n - 1][static_cast<std::size_t>(last)])
        last = t;
    std::vector<int> path(n);
    path[n - 1] = last;
    for (std::size_t i = n - 1; i > 0; --i) path[i - 1] = back[i][static_cast<std::size_t>(path[i])];
    return path;
  }

  // Probability accessors. Distributions sum to 1 when alpha > 0; with
  // alpha = 0 they are the raw MLE estimates.
  double initial_prob(int t) const {
    double num = static_cast<double>(initial_counts_[static_cast<std::size_t>(t)]) + alpha_;
    double den = static_cast<double>(sentence_count_) + alpha_ * tags_.size();
    return den > 0 ? num / den : 0.0;
  }

  double transition_prob(int a, int b) const {
    double num = static_cast<double>(transition_counts_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) + alpha_;
    double den = static_cast<double>(transition_totals_[static_cast<std::size_t>(a)]) + alpha_ * tags_.size();
    return den > 0 ? num / den : 0.0;
  }

  /// Emission probability of a surface form (unknown forms map to UNK). The
  /// symbol space is the training vocabulary plus the UNK symbol.
  double emission_prob(int t, const std::string& form) const {
    auto it = vocab_index_.find(form);
    double count;
    if (it == vocab_index_.end()) {
      count = static_cast<double>(unk_counts_[static_cast<std::size_t>(t)]);
    } else {
      const auto& row = emission_counts_[static_cast<std::size_t>(t)];
      auto e = row.find(it->second);
      count = e == row.end() ? 0.0 : static_cast<double>(e->second);
    }
    double den = static_cast<double>(emission_totals_[static_cast<std::size_t>(t)]) +
                 alpha_ * (static_cast<double>(vocab_.size()) + 1.0);
    return den > 0 ? (count + alpha_) / den : 0.0;
  }

  double initial_log(int t) const { return safe_log(initial_prob(t)); }
  double transition_log(int a, int b) const { return safe_log(transition_prob(a, b)); }
  double emission_log(int t, const std::string& form) const {
    return safe_log(emission_prob(t, form));
  }

  std::vector<std::filesystem::path> save(const std::filesystem::path& dir) const override {
    std::filesystem::create_directories(dir);
    auto file = dir / "hmm.model.txt";
    std::ofstream out(file, std::ios::binary);
    write_model_header(out, kKind, language_);
    out << "alpha " << format_exact(alpha_) << '\n';
    out << "sentences " << sentence_count_ << '\n';
    out << "tags " << tags_.size() << '\n';
    for (const auto& label : tags_.labels()) out << label << '\n';
    out << "vocab " << vocab_.size() << '\n';
    for (const auto& w : vocab_) out << w << '\n';
    out << "initial\n";
    for (std::size_t t = 0; t < initial_counts_.size(); ++t)
      out << (t ? " " : "") << initial_counts_[t];
    out << "\ntransitions\n";
    for (const auto& row : transition_counts_) {
      for (std::size_t b = 0; b < row.size(); ++b) out << (b ? " " : "") << row[b];
      out << '\n';
    }
    out << "unk\n";
    for (std::size_t t = 0; t < unk_counts_.size(); ++t) out << (t ? " " : "") << unk_counts_[t];
    std::size_t nnz = 0;
    for (const auto& row : emission_counts_) nnz += row.size();
    out << "\nemissions " << nnz << '\n';
    for (std::size_t t = 0; t < emission_counts_.size(); ++t) {
      std::map<std::size_t, long> sorted(emission_counts_[t].begin(), emission_counts_[t].end());
      for (const auto& [w, c] : sorted) out << t << ' ' << w << ' ' << c << '\n';
    }
    out << "end\n";
    if (!out) throw SerializationError("write failed: " + file.string());
    return {file};
  }

  static HmmModel load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + file.string());
    const std::string ctx = file.string();
    auto header = read_model_header(in, ctx);
    if (header.kind != kKind) throw SerializationError(ctx + ": not an hmm model");

    HmmModel m;
    m.language_ = header.language;
    detail::expect_token(in, "alpha", ctx);
    in >> m.alpha_;
    detail::expect_token(in, "sentences", ctx);
    in >> m.sentence_count_;
    detail::expect_token(in, "tags", ctx);
    std::size_t T = 0;
    in >> T;
    in.ignore(1, '\n');
    std::string line;
    for (std::size_t i = 0; i < T; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      m.tags_.add(std::string(strip_cr(line)));
    }
    detail::expect_token(in, "vocab", ctx);
    std::size_t V = 0;
    in >> V;
    in.ignore(1, '\n');
    for (std::size_t i = 0; i < V; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      m.vocab_.push_back(std::string(strip_cr(line)));
      m.vocab_index_[m.vocab_.back()] = i;
    }
    detail::expect_token(in, "initial", ctx);
    m.initial_counts_.assign(T, 0);
    for (auto& c : m.initial_counts_)
      if (!(in >> c)) throw SerializationError(ctx + ": file truncated");
    detail::expect_token(in, "transitions", ctx);
    m.transition_counts_.assign(T, std::vector<long>(T, 0));
    for (auto& row : m.transition_counts_)
      for (auto& c : row)
        if (!(in >> c)) throw SerializationError(ctx + ": file truncated");
    detail::expect_token(in, "unk", ctx);
    m.unk_counts_.assign(T, 0);
    for (auto& c : m.unk_counts_)
      if (!(in >> c)) throw SerializationError(ctx + ": file truncated");
    detail::expect_token(in, "emissions", ctx);
    std::size_t nnz = 0;
    in >> nnz;
    m.emission_counts_.resize(T);
    for (std::size_t i = 0; i < nnz; ++i) {
      std::size_t t = 0, w = 0;
      long c = 0;
      if (!(in >> t >> w >> c) || t >= T || w >= V)
        throw SerializationError(ctx + ": file truncated or corrupt");
      m.emission_counts_[t][w] = c;
    }
    detail::expect_token(in, "end", ctx);
    m.finalize();
    return m;
  }

  const TagSet& tagset() const { return tags_; }
  double alpha() const { return alpha_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

private:
  static double safe_log(double p) { return p > 0.0 ? std::log(p) : kFloorLogProb; }

  void finalize() {
    const auto T = static_cast<std::size_t>(tags_.size());
    transition_totals_.assign(T, 0);
    emission_totals_.assign(T, 0);
    for (std::size_t a = 0; a < T; ++a)
      for (long c : transition_counts_[a]) transition_totals_[a] += c;
    for (std::size_t t = 0; t < T; ++t) {
      for (const auto& [w, c] : emission_counts_[t]) emission_totals_[t] += c;
      emission_totals_[t] += unk_counts_[t];
    }
  }

  std::string language_;
  double alpha_ = 0.001;
  TagSet tags_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> vocab_index_;
  long sentence_count_ = 0;
  std::vector<long> initial_counts_;
  std::vector<std::vector<long>> transition_counts_;
  std::vector<std::unordered_map<std::size_t, long>> emission_counts_;
  std::vector<long> unk_counts_;
  std::vector<long> transition_totals_;
  std::vector<long> emission_totals_;
};

}  // namespace tagmark
