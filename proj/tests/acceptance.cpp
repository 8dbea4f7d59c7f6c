// Acceptance checklist for the benchmark suite. Each criterion prints one
// PASS/FAIL line; the exit code is zero only when every criterion passes.
//
// Criteria 1, 2, and part of 7 score models trained on three Universal
// Dependencies treebanks (English GUM, Danish DDT, Turkish IMST). The
// treebank directories are looked up under $TAGMARK_UD_DIR, then data/ud
// next to the repository root; when they are absent those criteria fail
// with a note saying where to put the data.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "helpers/testutil.hpp"
#include "tagmark/config.hpp"
#include "tagmark/harness.hpp"
#include "tagmark/report.hpp"
#include "tagmark/taggers/registry.hpp"

using namespace tagmark;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string name;
  std::vector<std::string> notes;
};

fs::path exe_dir() {
  char buf[4096];
  ssize_t n = ::readlink("/proc/self/exe", buf, sizeof buf - 1);
  if (n <= 0) return fs::current_path();
  buf[n] = '\0';
  return fs::path(buf).parent_path();
}

// ---------------------------------------------------------------------------
// Reference treebanks
// ---------------------------------------------------------------------------

struct UdLanguage {
  std::string code;
  std::string dir_name;
};

const std::vector<UdLanguage> kUdLanguages = {
    {"en", "UD_English-GUM"},
    {"da", "UD_Danish-DDT"},
    {"tr", "UD_Turkish-IMST"},
};

std::optional<fs::path> ud_root() {
  if (const char* env = std::getenv("TAGMARK_UD_DIR")) {
    fs::path p(env);
    if (fs::is_directory(p)) return p;
  }
  auto beside_repo = exe_dir() / ".." / ".." / "data" / "ud";
  if (fs::is_directory(beside_repo)) return fs::canonical(beside_repo);
  auto local = fs::path("data") / "ud";
  if (fs::is_directory(local)) return fs::absolute(local);
  return std::nullopt;
}

struct UdCell {
  AccuracyResult accuracy;
};

struct UdResults {
  // accuracy[language][tagger]
  std::map<std::string, std::map<std::string, AccuracyResult>> accuracy;
  std::map<std::string, Treebank> treebanks;
  std::string config_hash;
};

/// Trains the four built-ins on each reference treebank and scores the test
/// split. Returns nothing when the data is not installed.
std::optional<UdResults> evaluate_ud() {
  auto root = ud_root();
  if (!root) return std::nullopt;

  ExperimentConfig config;
  for (const auto& lang : kUdLanguages)
    config.languages.push_back({lang.code, *root / lang.dir_name});
  for (const char* kind : {"brill", "hmm", "tnt", "unigram"}) {
    TaggerSpec spec;
    spec.kind = kind;
    spec.name = kind;
    config.taggers.push_back(spec);
  }

  UdResults results;
  for (const auto& lang : kUdLanguages) {
    if (!fs::is_directory(*root / lang.dir_name)) return std::nullopt;
    results.treebanks[lang.code] = load_treebank(*root / lang.dir_name, lang.code);
  }
  results.config_hash = run_hash(config, results.treebanks);

  for (const auto& lang : kUdLanguages) {
    const auto& tb = results.treebanks.at(lang.code);
    auto gold = detail::tags_of(tb.test);
    for (const auto& spec : config.taggers) {
      auto tagger = train_tagger(spec, tb.train, lang.code);
      results.accuracy[lang.code][spec.name] = accuracy(gold, tagger->tag_corpus(tb.test));
    }
  }
  return results;
}

std::string ud_missing_note() {
  return "UD treebanks not found; set TAGMARK_UD_DIR or place " +
         std::string("UD_English-GUM, UD_Danish-DDT, UD_Turkish-IMST under data/ud");
}

// ---------------------------------------------------------------------------
// Criterion 1: accuracy reproduction within the reference bands
// ---------------------------------------------------------------------------

struct Reference {
  std::string language;
  std::string tagger;
  double token;
  double sentence;
};

// Reported test-set accuracies for the three reference languages, in percent.
const std::vector<Reference> kReference = {
    {"en", "brill", 84.07, 17.30}, {"en", "tnt", 80.15, 12.13}, {"en", "hmm", 83.73, 16.63},
    {"da", "brill", 86.08, 17.52}, {"da", "tnt", 80.76, 8.50},  {"da", "hmm", 86.15, 17.52},
    {"tr", "brill", 78.33, 19.02}, {"tr", "tnt", 70.95, 10.17}, {"tr", "hmm", 78.08, 18.62},
};

constexpr double kBand = 5.0;

Verdict criterion_accuracy(const std::optional<UdResults>& ud) {
  Verdict v{false, "token and sentence accuracy within the reference bands"};
  if (!ud) {
    v.notes.push_back(ud_missing_note());
    return v;
  }
  v.pass = true;
  for (const auto& ref : kReference) {
    const auto& acc = ud->accuracy.at(ref.language).at(ref.tagger);
    double token = acc.token_accuracy * 100.0;
    double sentence = acc.sentence_accuracy * 100.0;
    char line[160];
    std::snprintf(line, sizeof line, "%s/%s token %.2f (ref %.2f) sentence %.2f (ref %.2f)",
                  ref.tagger.c_str(), ref.language.c_str(), token, ref.token, sentence,
                  ref.sentence);
    v.notes.push_back(line);
    if (token < ref.token - kBand || sentence < ref.sentence - kBand) {
      v.pass = false;
      v.notes.push_back("  below the acceptance band");
    }
    if (token > ref.token + kBand || sentence > ref.sentence + kBand)
      v.notes.push_back("  above the reference band (acceptable); config hash " +
                        ud->config_hash);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 2: sentence <= token everywhere, tagger ordering vs the reference
// ---------------------------------------------------------------------------

Verdict criterion_ordering(const std::optional<UdResults>& ud) {
  Verdict v{false, "sentence accuracy bounded by token accuracy; ordering reported"};
  if (!ud) {
    v.notes.push_back(ud_missing_note());
    return v;
  }
  v.pass = true;
  for (const auto& [language, by_tagger] : ud->accuracy) {
    for (const auto& [tagger, acc] : by_tagger) {
      if (acc.sentence_accuracy > acc.token_accuracy) {
        v.pass = false;
        v.notes.push_back("sentence > token for " + tagger + "/" + language);
      }
    }
  }

  auto order_of = [](const std::vector<std::pair<std::string, double>>& scores) {
    auto sorted = scores;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string out;
    for (const auto& [name, score] : sorted) {
      if (!out.empty()) out += " > ";
      out += name;
    }
    return out;
  };

  for (const auto& lang : kUdLanguages) {
    std::vector<std::pair<std::string, double>> ours, reference;
    for (const auto& ref : kReference) {
      if (ref.language != lang.code) continue;
      reference.emplace_back(ref.tagger, ref.token);
      ours.emplace_back(ref.tagger,
                        ud->accuracy.at(lang.code).at(ref.tagger).token_accuracy);
    }
    std::string mine = order_of(ours), expected = order_of(reference);
    if (mine == expected) {
      v.notes.push_back(lang.code + " ordering matches the reference: " + mine);
    } else {
      v.notes.push_back(lang.code + " ordering differs: measured " + mine +
                        ", reference " + expected);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 3: skyline equals the all-pairs dominance filter
// ---------------------------------------------------------------------------

Verdict criterion_skyline_oracle() {
  Verdict v{true, "skyline operator equals the all-pairs dominance filter"};
  std::mt19937 rng(20260816);
  auto start = std::chrono::steady_clock::now();

  for (int round = 0; round < 1000 && v.pass; ++round) {
    std::size_t n = 1 + rng() % 100;
    std::vector<MetricPoint> points;
    for (std::size_t i = 0; i < n; ++i) {
      MetricPoint p;
      p.tagger = "t" + std::to_string(i);
      p.language = "xx";
      p.size_metric = "memory";
      p.accuracy_metric = "token";
      // Coarse grids breed duplicate and collinear coordinates.
      p.size_value = static_cast<double>(1 + rng() % 10) * 10.0;
      p.accuracy_value = static_cast<double>(rng() % 11) / 10.0;
      points.push_back(std::move(p));
    }

    std::vector<MetricPoint> oracle;
    for (std::size_t i = 0; i < n; ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < n && !dominated; ++j)
        if (j != i && dominates(points[j], points[i])) dominated = true;
      if (!dominated) oracle.push_back(points[i]);
    }

    auto mine = compute_skyline(points).points;
    auto key = [](const MetricPoint& a, const MetricPoint& b) {
      return std::tie(a.size_value, a.accuracy_value, a.tagger) <
             std::tie(b.size_value, b.accuracy_value, b.tagger);
    };
    std::sort(mine.begin(), mine.end(), key);
    std::sort(oracle.begin(), oracle.end(), key);
    if (mine != oracle) {
      v.pass = false;
      v.notes.push_back("mismatch on random set " + std::to_string(round));
    }
  }

  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char line[80];
  std::snprintf(line, sizeof line, "1000 point sets in %.3f s", elapsed);
  v.notes.push_back(line);
  if (elapsed >= 1.0) {
    v.pass = false;
    v.notes.push_back("budget exceeded (1 s)");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 4: decoders equal exhaustive sequence enumeration
// ---------------------------------------------------------------------------

/// Scores every tag sequence with Viterbi's accumulation order; enumeration
/// ascends in reversed-tuple order so the first strict maximum is the
/// sequence the decoder's lowest-index tie-breaking must produce.
std::vector<int> brute_force_hmm(const HmmModel& m, const std::vector<std::string>& forms) {
  const int T = static_cast<int>(m.tagset().size());
  const std::size_t n = forms.size();
  if (n == 0) return {};
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(T);
  std::vector<int> best_seq, seq(n);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      seq[i] = static_cast<int>(c % static_cast<std::size_t>(T));
      c /= static_cast<std::size_t>(T);
    }
    double s = m.initial_log(seq[0]) + m.emission_log(seq[0], forms[0]);
    for (std::size_t i = 1; i < n; ++i)
      s = s + m.transition_log(seq[i - 1], seq[i]) + m.emission_log(seq[i], forms[i]);
    if (s > best) {
      best = s;
      best_seq = seq;
    }
  }
  return best_seq;
}

double tnt_path_score(const TnTModel& m, const std::vector<std::string>& forms,
                      const std::vector<int>& seq) {
  const int B = m.bos_index(), E = m.eos_index();
  double s = m.transition_log(B, B, seq[0]) + m.emission_log(seq[0], forms[0]);
  for (std::size_t i = 1; i < forms.size(); ++i) {
    int a = i >= 2 ? seq[i - 2] : B;
    s = s + m.transition_log(a, seq[i - 1], seq[i]) + m.emission_log(seq[i], forms[i]);
  }
  std::size_t n = forms.size();
  int a = n >= 2 ? seq[n - 2] : B;
  return s + m.transition_log(a, seq[n - 1], E);
}

std::vector<int> brute_force_tnt(const TnTModel& m, const std::vector<std::string>& forms) {
  const int T = static_cast<int>(m.tagset().size());
  const std::size_t n = forms.size();
  if (n == 0) return {};
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(T);
  std::vector<int> best_seq, seq(n);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      seq[i] = static_cast<int>(c % static_cast<std::size_t>(T));
      c /= static_cast<std::size_t>(T);
    }
    double s = tnt_path_score(m, forms, seq);
    if (s > best) {
      best = s;
      best_seq = seq;
    }
  }
  return best_seq;
}

Verdict criterion_decoder_oracle() {
  Verdict v{true, "hmm and tnt decoders equal exhaustive enumeration"};
  static const char* kForms[] = {"u", "v", "w", "x", "y", "z", "q", "r"};
  static const char* kTags[] = {"T0", "T1", "T2", "T3"};
  std::mt19937 rng(424242);
  auto start = std::chrono::steady_clock::now();

  int cases = 0, mismatches = 0;
  for (int model_round = 0; cases < 500; ++model_round) {
    std::vector<Sentence> train;
    std::size_t nsent = 4 + rng() % 8;
    for (std::size_t i = 0; i < nsent; ++i) {
      Sentence s;
      std::size_t len = 1 + rng() % 6;
      for (std::size_t j = 0; j < len; ++j)
        s.tokens.push_back({kForms[rng() % 8], kTags[rng() % 4]});
      train.push_back(std::move(s));
    }
    HmmOptions hmm_opt;
    hmm_opt.alpha = (model_round % 2 == 0) ? 0.001 : 0.0;
    auto hmm = HmmModel::train(train, "xx", hmm_opt);
    auto tnt = TnTModel::train(train, "xx");

    for (int c = 0; c < 4 && cases < 500; ++c, ++cases) {
      std::vector<std::string> forms;
      std::size_t len = 1 + rng() % 5;
      for (std::size_t j = 0; j < len; ++j)
        forms.push_back(rng() % 5 == 0 ? "oov-form" : kForms[rng() % 8]);
      if (hmm.viterbi(forms) != brute_force_hmm(hmm, forms)) ++mismatches;
      if (tnt.viterbi(forms, 0) != brute_force_tnt(tnt, forms)) ++mismatches;
    }
  }

  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char line[96];
  std::snprintf(line, sizeof line, "500 sentences per decoder in %.3f s, %d mismatches",
                elapsed, mismatches);
  v.notes.push_back(line);
  if (mismatches > 0) v.pass = false;
  if (elapsed >= 10.0) {
    v.pass = false;
    v.notes.push_back("budget exceeded (10 s)");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 5: metric properties and serialization round-trips
// ---------------------------------------------------------------------------

Verdict criterion_metric_properties() {
  Verdict v{true, "metric identities, size additivity, and round-trips"};
  auto fail = [&](const std::string& why) {
    v.pass = false;
    v.notes.push_back(why);
  };
  using Batch = std::vector<std::vector<std::string>>;

  Batch gold = {{"N", "V", "D"}, {"N"}};
  if (accuracy(gold, gold).token_accuracy != 1.0 ||
      accuracy(gold, gold).sentence_accuracy != 1.0)
    fail("identity prediction is not scored 1.0");

  Batch wrong = {{"X", "X", "X"}, {"X"}};
  if (accuracy(gold, wrong).token_accuracy != 0.0 ||
      accuracy(gold, wrong).sentence_accuracy != 0.0)
    fail("all-wrong prediction is not scored 0.0");

  Batch partial = {{"N", "N", "D"}, {"N"}};
  auto p = accuracy(gold, partial);
  if (p.token_accuracy != 3.0 / 4.0 || p.sentence_accuracy != 0.5)
    fail("partial prediction is not 3/4 tokens, 1/2 sentences");

  Batch swapped_gold = {gold[1], gold[0]};
  Batch swapped_partial = {partial[1], partial[0]};
  auto q = accuracy(swapped_gold, swapped_partial);
  if (q.token_accuracy != p.token_accuracy || q.sentence_accuracy != p.sentence_accuracy)
    fail("accuracy is not invariant under sentence permutation");

  try {
    accuracy(gold, Batch{{"N", "V"}, {"N"}});
    fail("token misalignment was not rejected");
  } catch (const Error&) {
  }

  testutil::TempDir tmp;
  testutil::write_file(tmp.path() / "a.bin", std::string(1000000, 'a'));
  testutil::write_file(tmp.path() / "b.bin", std::string(2500, 'b'));
  double a = model_size_kb({tmp.path() / "a.bin"});
  double b = model_size_kb({tmp.path() / "b.bin"});
  double both = model_size_kb({tmp.path() / "a.bin", tmp.path() / "b.bin"});
  if (a != 1000.0) fail("a 1,000,000-byte file is not 1000 kB");
  if (both != a + b) fail("model size is not additive over file sets");
  if (model_size_kb({}) != 0.0) fail("an empty artifact list is not 0 kB");

  auto train = testutil::synthetic_corpus(100, 11);
  auto sample = testutil::synthetic_corpus(30, 12);
  for (const char* kind : {"unigram", "hmm", "tnt", "brill"}) {
    TaggerSpec spec;
    spec.kind = kind;
    spec.name = kind;
    auto tagger = train_tagger(spec, train, "xx");
    auto artifacts = tagger->save(tmp.path() / kind);

    double plain = model_size_kb(artifacts);
    double squeezed = compressed_size_kb(artifacts, 6);
    if (squeezed > plain + 1.0)
      fail(std::string(kind) + ": compressed size exceeds plain size plus 1 kB container");
    if (compressed_size_kb(artifacts, 6) != squeezed)
      fail(std::string(kind) + ": compression is not deterministic");

    auto reloaded = load_model_dir(tmp.path() / kind);
    if (reloaded->tag_corpus(sample) != tagger->tag_corpus(sample))
      fail(std::string(kind) + ": reloaded model tags differently");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 6: memory protocol calibration
// ---------------------------------------------------------------------------

Verdict criterion_memory_protocol() {
  Verdict v{true, "memory calibration within 15% and forced first sample"};
  auto probe = (exe_dir() / "alloc_probe").string();

  MemoryUsage loaded = measure_memory({probe, "100", "5"});
  MemoryUsage baseline = measure_memory({probe, "0", "5"});
  double delta = loaded.avg_kb - baseline.avg_kb;
  char line[120];
  std::snprintf(line, sizeof line,
                "100 MB probe mean %.0f kB, baseline %.0f kB, delta %.0f kB",
                loaded.avg_kb, baseline.avg_kb, delta);
  v.notes.push_back(line);
  if (delta < 85000.0 || delta > 115000.0) {
    v.pass = false;
    v.notes.push_back("delta outside the 15% band around 100,000 kB");
  }

  MemoryUsage quick = measure_memory({probe, "0", "0.05"});
  if (quick.sample_count < 1 || quick.avg_kb <= 0.0) {
    v.pass = false;
    v.notes.push_back("sub-second process yielded no forced sample");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 7: Brill error trace monotonicity
// ---------------------------------------------------------------------------

Verdict criterion_brill_monotonic(const std::optional<UdResults>& ud) {
  Verdict v{true, "Brill training error is non-increasing; no rules when unneeded"};

  // A corpus the unigram annotator already tags perfectly learns nothing.
  auto unambiguous = testutil::corpus({"the/DET dog/NOUN runs/VERB", "the/DET dog/NOUN",
                                       "runs/VERB dog/NOUN"});
  BrillOptions opt;
  auto lazy = BrillModel::train(unambiguous, "xx", opt);
  if (!lazy.rules().empty()) {
    v.pass = false;
    v.notes.push_back("rules were learned on a perfectly unigram-taggable corpus");
  }

  // Context decides the tag of the middle form, so the unigram start state
  // is wrong in the minority contexts and rules have real work to do.
  std::vector<Sentence> ambiguous;
  std::mt19937 rng(5);
  static const char* kMid[] = {"back", "down", "round"};
  for (int i = 0; i < 400; ++i) {
    Sentence s;
    const char* mid = kMid[rng() % 3];
    switch (rng() % 10 < 4 ? 0 : rng() % 10 < 7 ? 1 : 2) {
      case 0:
        s.tokens = {{"the", "DET"}, {mid, "NOUN"}, {"ran", "VERB"}};
        break;
      case 1:
        s.tokens = {{"dog", "NOUN"}, {mid, "VERB"}, {"it", "PRON"}};
        break;
      default:
        s.tokens = {{"ran", "VERB"}, {mid, "ADV"}, {"now", "ADV"}};
        break;
    }
    ambiguous.push_back(std::move(s));
  }
  BrillOptions synth_opt;
  synth_opt.max_rules = 100;
  auto synth = BrillModel::train(ambiguous, "xx", synth_opt);
  const auto& synth_trace = synth.training_error_trace();
  bool synth_monotone = true;
  for (std::size_t i = 1; i < synth_trace.size(); ++i)
    if (synth_trace[i] > synth_trace[i - 1]) synth_monotone = false;
  if (!synth_monotone) {
    v.pass = false;
    v.notes.push_back("error rose on a synthetic ambiguous corpus");
  } else {
    v.notes.push_back("non-increasing over " + std::to_string(synth.rules().size()) +
                      " rules on a synthetic ambiguous corpus");
  }

  if (!ud) {
    v.pass = false;
    v.notes.push_back("monotonicity on the English GUM train split: " + ud_missing_note());
    return v;
  }

  BrillOptions gum_opt;
  gum_opt.max_rules = 100;
  auto model = BrillModel::train(ud->treebanks.at("en").train, "en", gum_opt);
  const auto& trace = model.training_error_trace();
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1]) {
      v.pass = false;
      v.notes.push_back("error rose after rule " + std::to_string(i));
    }
  }
  v.notes.push_back(std::to_string(model.rules().size()) +
                    " rules learned on the GUM train split");
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 8: determinism of full runs
// ---------------------------------------------------------------------------

Verdict criterion_determinism() {
  Verdict v{true, "identical runs produce identical models and accuracy tables"};
  testutil::TempDir tmp;
  testutil::write_treebank(tmp.path() / "tb", "xx", 80, 10, 20);

  auto make_config = [&](const char* out) {
    ExperimentConfig config;
    config.languages.push_back({"xx", tmp.path() / "tb"});
    for (const char* kind : {"unigram", "hmm", "tnt", "brill"}) {
      TaggerSpec spec;
      spec.kind = kind;
      spec.name = kind;
      config.taggers.push_back(spec);
    }
    config.out_dir = tmp.path() / out;
    config.poll_hz = 25.0;
    return config;
  };

  RunOptions options;
  options.tag_command = {(exe_dir() / "tagmark").string(), "tag"};

  auto config_a = make_config("out_a");
  auto config_b = make_config("out_b");
  auto result_a = run_experiment(config_a, options);
  auto result_b = run_experiment(config_b, options);
  if (!result_a.manifest.all_evaluated() || !result_b.manifest.all_evaluated()) {
    v.pass = false;
    v.notes.push_back("a run left unevaluated cells");
    return v;
  }

  for (const auto& [key, cell] : result_a.manifest.cells) {
    for (const auto& artifact : cell.artifacts) {
      auto bytes_a = testutil::read_file(config_a.out_dir / key / artifact);
      auto bytes_b = testutil::read_file(config_b.out_dir / key / artifact);
      if (bytes_a.empty() || bytes_a != bytes_b) {
        v.pass = false;
        v.notes.push_back("artifact differs between runs: " + key + "/" + artifact);
      }
    }
  }

  auto records_a = load_records(config_a.out_dir);
  auto records_b = load_records(config_b.out_dir);
  for (const char* metric : {"token", "sentence"}) {
    if (render_accuracy_csv(records_a, metric) != render_accuracy_csv(records_b, metric)) {
      v.pass = false;
      v.notes.push_back(std::string(metric) + " accuracy tables differ between runs");
    }
  }
  if (render_size_csv(records_a) != render_size_csv(records_b))
    v.notes.push_back("size tables differ (memory column is environment-dependent)");
  return v;
}

}  // namespace

int main() {
  std::cout << "acceptance checklist\n";
  std::optional<UdResults> ud;
  try {
    ud = evaluate_ud();
  } catch (const std::exception& e) {
    std::cout << "  (reference treebank evaluation failed: " << e.what() << ")\n";
  }

  std::vector<Verdict> verdicts;
  auto run = [&](Verdict (*criterion)()) {
    try {
      verdicts.push_back(criterion());
    } catch (const std::exception& e) {
      verdicts.push_back({false, "criterion aborted", {e.what()}});
    }
  };

  verdicts.push_back(criterion_accuracy(ud));
  verdicts.push_back(criterion_ordering(ud));
  run(criterion_skyline_oracle);
  run(criterion_decoder_oracle);
  run(criterion_metric_properties);
  run(criterion_memory_protocol);
  try {
    verdicts.push_back(criterion_brill_monotonic(ud));
  } catch (const std::exception& e) {
    verdicts.push_back({false, "Brill monotonicity aborted", {e.what()}});
  }
  run(criterion_determinism);

  int failed = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    failed += v.pass ? 0 : 1;
    std::cout << "criterion " << (i + 1) << ": " << (v.pass ? "PASS" : "FAIL") << "  "
              << v.name << '\n';
    for (const auto& note : v.notes) std::cout << "    " << note << '\n';
  }
  std::cout << (failed == 0 ? "all criteria passed"
                            : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}
