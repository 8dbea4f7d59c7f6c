#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tagmark/corpus.hpp"
#include "tagmark/error.hpp"
#include "tagmark/model_io.hpp"
#include "tagmark/tagger.hpp"
#include "tagmark/taggers/hmm.hpp"

namespace tagmark {

struct TnTOptions {
  /// Longest suffix (in code points) kept by the unknown-word model.
  int suffix_length = 10;
  /// Words at most this frequent in training feed the suffix model.
  long suffix_cutoff = 10;
  /// Hypotheses kept per position during decoding; 0 means unbounded.
  std::size_t beam_width = 1000;
};

/// Trigram HMM tagger: deleted-interpolation smoothing over
/// unigram/bigram/trigram tag contexts, suffix-based unknown-word
/// distributions with successive abstraction (split by capitalization), and
/// beam-pruned second-order Viterbi decoding.
class TnTModel final : public Tagger {
public:
  static constexpr std::string_view kKind = "tnt";

  static TnTModel train(std::span<const Sentence> train, std::string language,
                        const TnTOptions& options = {}) {
    if (train.empty()) throw TrainError("tnt: empty training corpus");
    TnTModel m;
    m.language_ = std::move(language);
    m.opts_ = options;
    m.tags_ = build_tagset(train);
    const int T = m.tags_.size();
    const int B = T, E = T + 1;
    m.uni_.assign(static_cast<std::size_t>(T) + 2, 0);
    m.bi_.assign(static_cast<std::size_t>(T) + 2,
                 std::vector<long>(static_cast<std::size_t>(T) + 2, 0));
    m.tri_.assign(static_cast<std::size_t>(T) + 2,
                  std::vector<std::vector<long>>(
                      static_cast<std::size_t>(T) + 2,
                      std::vector<long>(static_cast<std::size_t>(T) + 2, 0)));

    std::unordered_map<std::string, long> word_freq;
    for (const auto& s : train) {
      m.sentence_count_ += 1;
      std::vector<int> seq;
      seq.reserve(s.tokens.size() + 3);
      seq.push_back(B);
      seq.push_back(B);
      for (const auto& tok : s.tokens) {
        seq.push_back(m.tags_.require(tok.tag));
        ++word_freq[tok.form];
      }
      seq.push_back(E);
      for (int t : seq) ++m.uni_[static_cast<std::size_t>(t)];
      for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        ++m.bi_[static_cast<std::size_t>(seq[i])][static_cast<std::size_t>(seq[i + 1])];
      for (std::size_t i = 0; i + 2 < seq.size(); ++i)
        ++m.tri_[static_cast<std::size_t>(seq[i])][static_cast<std::size_t>(seq[i + 1])]
                [static_cast<std::size_t>(seq[i + 2])];
    }
    for (const auto& s : train)
      for (const auto& tok : s.tokens) {
        m.token_count_ += 1;
        ++m.lexicon_[tok.form][m.tags_.require(tok.tag)];
      }

    // Suffix counts from rare words, one trie per capitalization class.
    for (const auto& s : train)
      for (const auto& tok : s.tokens) {
        if (word_freq.at(tok.form) > m.opts_.suffix_cutoff) continue;
        int t = m.tags_.require(tok.tag);
        auto& table = m.suffix_counts_[starts_uppercase(tok.form) ? 1 : 0];
        auto offs = codepoint_offsets(tok.form);
        int len = static_cast<int>(offs.size()) - 1;
        int max_k = std::min(m.opts_.suffix_length, len);
        for (int k = 0; k <= max_k; ++k) {
          std::string suffix = tok.form.substr(offs[static_cast<std::size_t>(len - k)]);
          auto& row = table[suffix];
          row.resize(static_cast<std::size_t>(T), 0);
          ++row[static_cast<std::size_t>(t)];
        }
      }

    m.compute_lambdas();
    m.finalize();
    return m;
  }

  std::string_view kind() const override { return kKind; }
  const std::string& language() const override { return language_; }

  std::vector<std::string> tag(const std::vector<std::string>& forms) const override {
    std::vector<std::string> out;
    out.reserve(forms.size());
    for (int t : viterbi(forms, opts_.beam_width)) out.push_back(tags_.label(t));
    return out;
  }

  int bos_index() const { return tags_.size(); }
  int eos_index() const { return tags_.size() + 1; }

  /// Beam-pruned second-order Viterbi; beam 0 means unbounded. Ties prefer
  /// the lower tag index, latest position first.
  std::vector<int> viterbi(const std::vector<std::string>& forms, std::size_t beam) const {
    const int T = tags_.size();
    const int B = bos_index(), E = eos_index();
    const std::size_t n = forms.size();
    if (n == 0) return {};
    const double kInf = -std::numeric_limits<double>::infinity();

    // State (p, c): previous tag p in [0,T] (T = BOS), current tag c in [0,T).
    auto idx = [T](int p, int c) {
      return static_cast<std::size_t>(p) * static_cast<std::size_t>(T) +
             static_cast<std::size_t>(c);
    };
    const std::size_t nstates = static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(T);
    std::vector<double> delta(nstates, kInf), next(nstates, kInf);
    std::vector<std::vector<int>> back(n, std::vector<int>(nstates, -1));

    std::vector<double> emis(static_cast<std::size_t>(T));
    for (int c = 0; c < T; ++c) emis[static_cast<std::size_t>(c)] = emission_log(c, forms[0]);
    for (int c = 0; c < T; ++c) delta[idx(B, c)] = transition_log(B, B, c) + emis[static_cast<std::size_t>(c)];
    prune(delta, beam);

    for (std::size_t i = 1; i < n; ++i) {
      for (int c = 0; c < T; ++c) emis[static_cast<std::size_t>(c)] = emission_log(c, forms[i]);
      std::fill(next.begin(), next.end(), kInf);
      for (int p = 0; p < T; ++p)
        for (int c = 0; c < T; ++c) {
          double best = kInf;
          int best_q = -1;
          for (int q = 0; q <= T; ++q) {
            double prev = delta[idx(q, p)];
            if (prev == kInf) continue;
            double cand = prev + transition_log(q, p, c);
            if (cand > best) {
              best = cand;
              best_q = q;
            }
          }
          if (best_q < 0) continue;
          next[idx(p, c)] = best + emis[static_cast<std::size_t>(c)];
          back[i][idx(p, c)] = best_q;
        }
      delta.swap(next);
      prune(delta, beam);
    }

    // Close with the end-of-sentence transition; prefer the lower (c, p)
    // pair on exact ties so the latest tag decides first.
    double best = kInf;
    int best_p = -1, best_c = -1;
    for (int c = 0; c < T; ++c)
      for (int p = 0; p <= T; ++p) {
        double prev = delta[idx(p, c)];
        if (prev == kInf) continue;
        double s = prev + transition_log(p, c, E);
        if (s > best) {
          best = s;
          best_p = p;
          best_c = c;
        }
      }
    if (best_c < 0) throw Error("tnt: no surviving hypothesis");

    std::vector<int> path(n);
    path[n - 1] = best_c;
    int p = best_p, c = best_c;
    for (std::size_t i = n - 1; i > 0; --i) {
      path[i - 1] = p;
      int q = back[i][idx(p, c)];
      c = p;
      p = q;
    }
    return path;
  }

  /// Smoothed log P(c | a, b); a may be BOS, c may be EOS.
  double transition_log(int a, int b, int c) const {
    const std::size_t W = static_cast<std::size_t>(tags_.size()) + 2;
    return ltrans_[(static_cast<std::size_t>(a) * W + static_cast<std::size_t>(b)) * W +
                   static_cast<std::size_t>(c)];
  }

  /// Log emission score of `form` under tag t: lexicon relative frequency for
  /// known words, suffix-model probability ratio for unknown ones.
  double emission_log(int t, const std::string& form) const {
    auto it = lexicon_.find(form);
    if (it != lexicon_.end()) {
      auto e = it->second.find(t);
      if (e == it->second.end()) return kFloorLogProb;
      return std::log(static_cast<double>(e->second) /
                      static_cast<double>(uni_[static_cast<std::size_t>(t)]));
    }
    const std::vector<double>* node = suffix_lookup(form);
    if (!node) return 0.0;  // no suffix statistics at all: flat score
    return (*node)[static_cast<std::size_t>(t)];
  }

  /// P(t | suffix-of-form) from the unknown-word model, after successive
  /// abstraction. Exposed for the suffix-model tests.
  double suffix_prob(int t, const std::string& form) const {
    const std::vector<double>* node = suffix_lookup(form);
    if (!node) return p_tok_[static_cast<std::size_t>(t)];
    return std::exp((*node)[static_cast<std::size_t>(t)]) * p_tok_[static_cast<std::size_t>(t)];
  }

  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double lambda3() const { return lambda3_; }
  double theta() const { return theta_; }
  const TagSet& tagset() const { return tags_; }
  const TnTOptions& options() const { return opts_; }
  long trigram_count(int a, int b, int c) const {
    return tri_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
               [static_cast<std::size_t>(c)];
  }
  long bigram_count(int a, int b) const {
    return bi_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  long unigram_count(int t) const { return uni_[static_cast<std::size_t>(t)]; }

  std::vector<std::filesystem::path> save(const std::filesystem::path& dir) const override {
    std::filesystem::create_directories(dir);
    auto ngrams = dir / "tnt.ngrams.txt";
    auto lexicon = dir / "tnt.lexicon.txt";
    auto suffixes = dir / "tnt.suffixes.txt";
    const int T = tags_.size();

    {
      std::ofstream out(ngrams, std::ios::binary);
      write_model_header(out, kKind, language_);
      out << "options " << opts_.suffix_length << ' ' << opts_.suffix_cutoff << ' '
          << opts_.beam_width << '\n';
      out << "tags " << T << '\n';
      for (const auto& label : tags_.labels()) out << label << '\n';
      out << "sentences " << sentence_count_ << '\n';
      out << "tokens " << token_count_ << '\n';
      out << "lambda " << format_exact(lambda1_) << ' ' << format_exact(lambda2_) << ' '
          << format_exact(lambda3_) << '\n';
      out << "theta " << format_exact(theta_) << '\n';
      out << "unigrams\n";
      for (std::size_t t = 0; t < uni_.size(); ++t) out << (t ? " " : "") << uni_[t];
      std::size_t nbi = 0, ntri = 0;
      for (const auto& row : bi_)
        for (long c : row) nbi += c > 0;
      for (const auto& plane : tri_)
        for (const auto& row : plane)
          for (long c : row) ntri += c > 0;
      out << "\nbigrams " << nbi << '\n';
      for (std::size_t a = 0; a < bi_.size(); ++a)
        for (std::size_t b = 0; b < bi_.size(); ++b)
          if (bi_[a][b] > 0) out << a << ' ' << b << ' ' << bi_[a][b] << '\n';
      out << "trigrams " << ntri << '\n';
      for (std::size_t a = 0; a < tri_.size(); ++a)
        for (std::size_t b = 0; b < tri_.size(); ++b)
          for (std::size_t c = 0; c < tri_.size(); ++c)
            if (tri_[a][b][c] > 0) out << a << ' ' << b << ' ' << c << ' ' << tri_[a][b][c] << '\n';
      out << "end\n";
      if (!out) throw SerializationError("write failed: " + ngrams.string());
    }
    {
      std::ofstream out(lexicon, std::ios::binary);
      write_model_header(out, "tnt-lexicon", language_);
      std::size_t entries = 0;
      for (const auto& [form, row] : lexicon_) entries += row.size();
      out << "entries " << entries << '\n';
      std::map<std::string, const std::map<int, long>*> sorted;
      for (const auto& [form, row] : lexicon_) sorted.emplace(form, &row);
      for (const auto& [form, row] : sorted)
        for (const auto& [t, c] : *row) out << form << '\t' << t << '\t' << c << '\n';
      out << "end\n";
      if (!out) throw SerializationError("write failed: " + lexicon.string());
    }
    {
      std::ofstream out(suffixes, std::ios::binary);
      write_model_header(out, "tnt-suffixes", language_);
      std::size_t entries = 0;
      for (const auto& table : suffix_counts_)
        for (const auto& [suffix, row] : table)
          for (long c : row) entries += c > 0;
      out << "entries " << entries << '\n';
      for (int cls = 0; cls < 2; ++cls) {
        std::map<std::string, const std::vector<long>*> sorted;
        for (const auto& [suffix, row] : suffix_counts_[static_cast<std::size_t>(cls)])
          sorted.emplace(suffix, &row);
        for (const auto& [suffix, row] : sorted)
          for (std::size_t t = 0; t < row->size(); ++t)
            if ((*row)[t] > 0)
              out << (cls ? 'U' : 'L') << '\t' << suffix << '\t' << t << '\t' << (*row)[t]
                  << '\n';
      }
      out << "end\n";
      if (!out) throw SerializationError("write failed: " + suffixes.string());
    }
    return {ngrams, lexicon, suffixes};
  }

  static TnTModel load(const std::filesystem::path& dir) {
    TnTModel m;
    auto ngrams = dir / "tnt.ngrams.txt";
    const std::string ctx = ngrams.string();
    std::ifstream in(ngrams, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + ctx);
    auto header = read_model_header(in, ctx);
    if (header.kind != kKind) throw SerializationError(ctx + ": not a tnt model");
    m.language_ = header.language;

    detail::expect_token(in, "options", ctx);
    in >> m.opts_.suffix_length >> m.opts_.suffix_cutoff >> m.opts_.beam_width;
    detail::expect_token(in, "tags", ctx);
    int T = 0;
    in >> T;
    in.ignore(1, '\n');
    std::string line;
    for (int i = 0; i < T; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      m.tags_.add(std::string(strip_cr(line)));
    }
    detail::expect_token(in, "sentences", ctx);
    in >> m.sentence_count_;
    detail::expect_token(in, "tokens", ctx);
    in >> m.token_count_;
    detail::expect_token(in, "lambda", ctx);
    in >> m.lambda1_ >> m.lambda2_ >> m.lambda3_;
    detail::expect_token(in, "theta", ctx);
    in >> m.theta_;
    detail::expect_token(in, "unigrams", ctx);
    m.uni_.assign(static_cast<std::size_t>(T) + 2, 0);
    for (auto& c : m.uni_)
      if (!(in >> c)) throw SerializationError(ctx + ": file truncated");
    const std::size_t W = static_cast<std::size_t>(T) + 2;
    m.bi_.assign(W, std::vector<long>(W, 0));
    m.tri_.assign(W, std::vector<std::vector<long>>(W, std::vector<long>(W, 0)));
    detail::expect_token(in, "bigrams", ctx);
    std::size_t nbi = 0;
    in >> nbi;
    for (std::size_t i = 0; i < nbi; ++i) {
      std::size_t a = 0, b = 0;
      long c = 0;
      if (!(in >> a >> b >> c) || a >= W || b >= W)
        throw SerializationError(ctx + ": file truncated or corrupt");
      m.bi_[a][b] = c;
    }
    detail::expect_token(in, "trigrams", ctx);
    std::size_t ntri = 0;
    in >> ntri;
    for (std::size_t i = 0; i < ntri; ++i) {
      std::size_t a = 0, b = 0, c = 0;
      long f = 0;
      if (!(in >> a >> b >> c >> f) || a >= W || b >= W || c >= W)
        throw SerializationError(ctx + ": file truncated or corrupt");
      m.tri_[a][b][c] = f;
    }
    detail::expect_token(in, "end", ctx);

    m.load_lexicon(dir / "tnt.lexicon.txt", T);
    m.load_suffixes(dir / "tnt.suffixes.txt", T);
    m.finalize();
    return m;
  }

private:
  /// Deleted interpolation over observed trigrams: each trigram's count goes
  /// to the weight whose held-one-out relative frequency is largest, split
  /// equally on ties. Zero denominators count as zero frequency.
  void compute_lambdas() {
    const std::size_t W = static_cast<std::size_t>(tags_.size()) + 2;
    const double N = static_cast<double>(token_count_ + sentence_count_);
    double l1 = 0, l2 = 0, l3 = 0;
    for (std::size_t a = 0; a < W; ++a)
      for (std::size_t b = 0; b < W; ++b)
        for (std::size_t c = 0; c < W; ++c) {
          long f = tri_[a][b][c];
          if (f <= 0) continue;
          auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
          double c3 = ratio(static_cast<double>(f - 1), static_cast<double>(bi_[a][b] - 1));
          double c2 = ratio(static_cast<double>(bi_[b][c] - 1), static_cast<double>(uni_[b] - 1));
          double c1 = ratio(static_cast<double>(uni_[c] - 1), N - 1);
          double mx = std::max({c1, c2, c3});
          int winners = (c1 == mx) + (c2 == mx) + (c3 == mx);
          double share = static_cast<double>(f) / winners;
          if (c1 == mx) l1 += share;
          if (c2 == mx) l2 += share;
          if (c3 == mx) l3 += share;
        }
    double total = l1 + l2 + l3;
    if (total <= 0) {
      lambda1_ = lambda2_ = lambda3_ = 1.0 / 3.0;
      return;
    }
    lambda1_ = l1 / total;
    lambda2_ = l2 / total;
    lambda3_ = l3 / total;
  }

  void finalize() {
    const int T = tags_.size();
    const int B = bos_index();
    const std::size_t W = static_cast<std::size_t>(T) + 2;
    const double N = static_cast<double>(token_count_ + sentence_count_);

    p_tok_.assign(static_cast<std::size_t>(T), 0.0);
    for (int t = 0; t < T; ++t)
      p_tok_[static_cast<std::size_t>(t)] =
          static_cast<double>(uni_[static_cast<std::size_t>(t)]) /
          static_cast<double>(token_count_);

    // theta: variance of the tag probabilities around their mean 1/T, used as
    // the successive-abstraction weight at every suffix level.
    theta_ = 0.0;
    if (T > 1) {
      double mean = 1.0 / T;
      for (int t = 0; t < T; ++t) {
        double d = p_tok_[static_cast<std::size_t>(t)] - mean;
        theta_ += d * d;
      }
      theta_ /= T - 1;
    }

    ltrans_.assign(W * W * W, kFloorLogProb);
    for (int a = 0; a <= B; ++a)
      for (int b = 0; b <= B; ++b)
        for (int c = 0; c < T + 2; ++c) {
          if (c == B) continue;
          double p1 = uni_[static_cast<std::size_t>(c)] / N;
          double p2 = uni_[static_cast<std::size_t>(b)] > 0
                          ? static_cast<double>(bi_[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]) /
                                static_cast<double>(uni_[static_cast<std::size_t>(b)])
                          : 0.0;
          double p3 = bi_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] > 0
                          ? static_cast<double>(
                                tri_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                                    [static_cast<std::size_t>(c)]) /
                                static_cast<double>(
                                    bi_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
                          : 0.0;
          double p = lambda1_ * p1 + lambda2_ * p2 + lambda3_ * p3;
          ltrans_[(static_cast<std::size_t>(a) * W + static_cast<std::size_t>(b)) * W +
                  static_cast<std::size_t>(c)] = p > 0 ? std::log(p) : kFloorLogProb;
        }

    build_suffix_tables();
  }

  /// Successive abstraction, shortest suffix first:
  ///   P(t | s_k) = (MLE(t | s_k) + theta * P(t | s_{k-1})) / (1 + theta)
  /// rooted in the unconditioned tag distribution. Stored per node as
  /// log(P(t | s) / P(t)), the inverted emission score.
  void build_suffix_tables() {
    const int T = tags_.size();
    for (int cls = 0; cls < 2; ++cls) {
      auto& counts = suffix_counts_[static_cast<std::size_t>(cls)];
      auto& nodes = suffix_nodes_[static_cast<std::size_t>(cls)];
      nodes.clear();
      if (counts.empty()) continue;

      std::vector<const std::string*> keys;
      keys.reserve(counts.size());
      for (const auto& [suffix, row] : counts) keys.push_back(&suffix);
      std::sort(keys.begin(), keys.end(), [](const std::string* a, const std::string* b) {
        if (a->size() != b->size()) return a->size() < b->size();
        return *a < *b;
      });

      std::unordered_map<std::string, std::vector<double>> probs;
      for (const std::string* key : keys) {
        const auto& row = counts.at(*key);
        long total = 0;
        for (long c : row) total += c;
        const std::vector<double>* parent = nullptr;
        if (!key->empty()) {
          auto offs = codepoint_offsets(*key);
          std::string shorter = key->substr(offs[1]);
          auto it = probs.find(shorter);
          if (it != probs.end()) parent = &it->second;
        }
        std::vector<double> p(static_cast<std::size_t>(T), 0.0);
        for (int t = 0; t < T; ++t) {
          double mle = total > 0 ? static_cast<double>(row[static_cast<std::size_t>(t)]) /
                                       static_cast<double>(total)
                                 : 0.0;
          double prior = parent ? (*parent)[static_cast<std::size_t>(t)]
                                : p_tok_[static_cast<std::size_t>(t)];
          p[static_cast<std::size_t>(t)] = (mle + theta_ * prior) / (1.0 + theta_);
        }
        probs.emplace(*key, std::move(p));
      }
      for (auto& [suffix, p] : probs) {
        std::vector<double> lratio(static_cast<std::size_t>(T), kFloorLogProb);
        for (int t = 0; t < T; ++t) {
          double ratio = p[static_cast<std::size_t>(t)] / p_tok_[static_cast<std::size_t>(t)];
          lratio[static_cast<std::size_t>(t)] = ratio > 0 ? std::log(ratio) : kFloorLogProb;
        }
        nodes.emplace(suffix, std::move(lratio));
      }
    }
  }

  /// Longest known suffix of `form` in its capitalization class; falls back
  /// to the other class, then to null when no suffix statistics exist.
  const std::vector<double>* suffix_lookup(const std::string& form) const {
    int cls = starts_uppercase(form) ? 1 : 0;
    for (int attempt = 0; attempt < 2; ++attempt) {
      const auto& nodes = suffix_nodes_[static_cast<std::size_t>(cls)];
      if (!nodes.empty()) {
        auto offs = codepoint_offsets(form);
        int len = static_cast<int>(offs.size()) - 1;
        for (int k = std::min(opts_.suffix_length, len); k >= 0; --k) {
          auto it = nodes.find(form.substr(offs[static_cast<std::size_t>(len - k)]));
          if (it != nodes.end()) return &it->second;
        }
      }
      cls = 1 - cls;
    }
    return nullptr;
  }

  void prune(std::vector<double>& delta, std::size_t beam) const {
    if (beam == 0) return;
    const double kInf = -std::numeric_limits<double>::infinity();
    std::size_t active = 0;
    for (double d : delta) active += d != kInf;
    if (active <= beam) return;
    // Keep the `beam` best states; equal scores keep the lower state index.
    std::vector<std::size_t> order;
    order.reserve(active);
    for (std::size_t i = 0; i < delta.size(); ++i)
      if (delta[i] != kInf) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&delta](std::size_t a, std::size_t b) {
      return delta[a] > delta[b];
    });
    for (std::size_t r = beam; r < order.size(); ++r) delta[order[r]] = kInf;
  }

  void load_lexicon(const std::filesystem::path& file, int T) {
    const std::string ctx = file.string();
    std::ifstream in(file, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + ctx);
    auto header = read_model_header(in, ctx);
    if (header.kind != "tnt-lexicon") throw SerializationError(ctx + ": not a tnt lexicon");
    detail::expect_token(in, "entries", ctx);
    std::size_t entries = 0;
    in >> entries;
    in.ignore(1, '\n');
    std::string line;
    for (std::size_t i = 0; i < entries; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      auto cols = split(strip_cr(line), '\t');
      if (cols.size() != 3) throw SerializationError(ctx + ": malformed lexicon line");
      int t = std::atoi(std::string(cols[1]).c_str());
      if (t < 0 || t >= T) throw SerializationError(ctx + ": tag index out of range");
      lexicon_[std::string(cols[0])][t] = std::atol(std::string(cols[2]).c_str());
    }
    detail::expect_token(in, "end", ctx);
  }

  void load_suffixes(const std::filesystem::path& file, int T) {
    const std::string ctx = file.string();
    std::ifstream in(file, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + ctx);
    auto header = read_model_header(in, ctx);
    if (header.kind != "tnt-suffixes") throw SerializationError(ctx + ": not a tnt suffix table");
    detail::expect_token(in, "entries", ctx);
    std::size_t entries = 0;
    in >> entries;
    in.ignore(1, '\n');
    std::string line;
    for (std::size_t i = 0; i < entries; ++i) {
      if (!std::getline(in, line)) throw SerializationError(ctx + ": file truncated");
      auto cols = split(strip_cr(line), '\t');
      if (cols.size() != 4 || (cols[0] != "U" && cols[0] != "L"))
        throw SerializationError(ctx + ": malformed suffix line");
      int t = std::atoi(std::string(cols[2]).c_str());
      if (t < 0 || t >= T) throw SerializationError(ctx + ": tag index out of range");
      auto& row = suffix_counts_[cols[0] == "U" ? 1 : 0][std::string(cols[1])];
      row.resize(static_cast<std::size_t>(T), 0);
      row[static_cast<std::size_t>(t)] = std::atol(std::string(cols[3]).c_str());
    }
    detail::expect_token(in, "end", ctx);
  }

  std::string language_;
  TnTOptions opts_;
  TagSet tags_;
  long sentence_count_ = 0;
  long token_count_ = 0;
  std::vector<long> uni_;
  std::vector<std::vector<long>> bi_;
  std::vector<std::vector<std::vector<long>>> tri_;
  std::unordered_map<std::string, std::map<int, long>> lexicon_;
  std::array<std::unordered_map<std::string, std::vector<long>>, 2> suffix_counts_;
  std::array<std::unordered_map<std::string, std::vector<double>>, 2> suffix_nodes_;
  std::vector<double> p_tok_;
  double lambda1_ = 0, lambda2_ = 0, lambda3_ = 0, theta_ = 0;
  std::vector<double> ltrans_;
};

}  // namespace tagmark
