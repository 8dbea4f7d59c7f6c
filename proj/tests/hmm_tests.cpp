#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers/testutil.hpp"
#include "tagmark/taggers/hmm.hpp"

using namespace tagmark;
using Catch::Approx;
using testutil::TempDir;

namespace {

std::vector<Sentence> toy_corpus() {
  return testutil::corpus({"a/D dog/N", "a/D cat/N", "dog/N cat/N"});
}

/// Exhaustive decoder: scores every tag sequence with the same accumulation
/// order as Viterbi and keeps the first strict maximum while enumerating in
/// ascending order of the reversed index tuple. That enumeration order makes
/// the kept sequence the one Viterbi's lowest-index tie-breaking must select.
std::vector<int> brute_force_decode(const HmmModel& m, const std::vector<std::string>& forms) {
  const int T = m.tagset().size();
  const std::size_t n = forms.size();
  if (n == 0) return {};
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(T);

  std::vector<int> best_seq;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> seq(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      seq[i] = static_cast<int>(c % static_cast<std::size_t>(T));
      c /= static_cast<std::size_t>(T);
    }
    double s = m.initial_log(seq[0]) + m.emission_log(seq[0], forms[0]);
    for (std::size_t i = 1; i < n; ++i) {
      s = s + m.transition_log(seq[i - 1], seq[i]);
      s = s + m.emission_log(seq[i], forms[i]);
    }
    if (s > best) {
      best = s;
      best_seq = seq;
    }
  }
  return best_seq;
}

}  // namespace

TEST_CASE("unsmoothed counts reproduce maximum-likelihood estimates") {
  HmmOptions opt;
  opt.alpha = 0.0;
  auto m = HmmModel::train(toy_corpus(), "en", opt);
  REQUIRE(m.tagset().size() == 2);
  int D = m.tagset().require("D");
  int N = m.tagset().require("N");

  CHECK(m.initial_prob(D) == Approx(2.0 / 3.0));
  CHECK(m.initial_prob(N) == Approx(1.0 / 3.0));
  CHECK(m.transition_prob(D, N) == Approx(1.0));
  CHECK(m.transition_prob(D, D) == Approx(0.0));
  CHECK(m.transition_prob(N, N) == Approx(1.0));
  CHECK(m.emission_prob(D, "a") == Approx(1.0));
  CHECK(m.emission_prob(N, "dog") == Approx(0.5));
  CHECK(m.emission_prob(N, "cat") == Approx(0.5));
  CHECK(m.emission_prob(N, "a") == Approx(0.0));
  // No hapax legomena in this corpus, so unknown mass is empty without
  // smoothing.
  CHECK(m.emission_prob(D, "unseen") == Approx(0.0));
  CHECK(m.initial_log(D) == Approx(std::log(2.0 / 3.0)));
  CHECK(m.transition_log(N, D) == kFloorLogProb);
}

TEST_CASE("add-alpha smoothing matches the closed form and normalizes") {
  HmmOptions opt;
  opt.alpha = 0.1;
  auto m = HmmModel::train(toy_corpus(), "en", opt);
  int D = m.tagset().require("D");
  int N = m.tagset().require("N");
  // Vocabulary {a, cat, dog} plus the unknown symbol: 4 emission outcomes.
  CHECK(m.emission_prob(D, "a") == Approx((2.0 + 0.1) / (2.0 + 0.1 * 4)));
  CHECK(m.emission_prob(D, "unseen") == Approx(0.1 / (2.0 + 0.1 * 4)));
  CHECK(m.initial_prob(D) == Approx(2.1 / 3.2));

  double pi_sum = m.initial_prob(D) + m.initial_prob(N);
  CHECK(pi_sum == Approx(1.0));
  for (int a = 0; a < 2; ++a) {
    double row = m.transition_prob(a, 0) + m.transition_prob(a, 1);
    CHECK(row == Approx(1.0));
  }
  for (int t = 0; t < 2; ++t) {
    double total = m.emission_prob(t, "unknown-form");
    for (const auto& w : m.vocab()) total += m.emission_prob(t, w);
    CHECK(total == Approx(1.0));
  }
}

TEST_CASE("hapax legomena feed the unknown-word distribution") {
  // "ran" and "stone" occur once (VERB and NOUN); "the" and "dog" repeat.
  auto train = testutil::corpus({
      "the/DET dog/NOUN ran/VERB",
      "the/DET dog/NOUN stone/NOUN",
      "the/DET dog/NOUN the/DET dog/NOUN",
  });
  HmmOptions opt;
  opt.alpha = 0.0;
  auto m = HmmModel::train(train, "en", opt);
  int DET = m.tagset().require("DET");
  int NOUN = m.tagset().require("NOUN");
  int VERB = m.tagset().require("VERB");
  // Hapax counts: VERB 1, NOUN 1, DET 0.
  CHECK(m.emission_prob(DET, "wug") == Approx(0.0));
  CHECK(m.emission_prob(NOUN, "wug") == Approx(1.0 / 6.0));  // 1 of 5+1 NOUN emissions
  CHECK(m.emission_prob(VERB, "wug") == Approx(1.0 / 2.0));  // 1 of 1+1 VERB emissions
}

TEST_CASE("viterbi disambiguates by context") {
  // "saw" is NOUN or VERB; after a pronoun the verb reading should win, after
  // a determiner the noun reading.
  auto train = testutil::corpus({
      "I/PRON saw/VERB it/PRON",
      "I/PRON saw/VERB the/DET saw/NOUN",
      "the/DET saw/NOUN fell/VERB",
      "I/PRON fell/VERB",
  });
  auto m = HmmModel::train(train, "en");
  auto tags = m.tag({"I", "saw", "the", "saw"});
  REQUIRE(tags.size() == 4);
  CHECK(tags[0] == "PRON");
  CHECK(tags[1] == "VERB");
  CHECK(tags[2] == "DET");
  CHECK(tags[3] == "NOUN");
}

TEST_CASE("viterbi breaks exact score ties toward the lower tag index") {
  // Fully symmetric model: both tag paths for "x y" score identically, so the
  // backpointer and final-state rules decide.
  auto train = testutil::corpus({"x/A y/B", "x/B y/A"});
  HmmOptions opt;
  opt.alpha = 0.0;
  auto m = HmmModel::train(train, "en", opt);
  auto path = m.viterbi({"x", "y"});
  auto oracle = brute_force_decode(m, {"x", "y"});
  CHECK(path == oracle);
  // Final position prefers index 0 (tag A), forcing B at position 0.
  REQUIRE(path.size() == 2);
  CHECK(path[1] == m.tagset().require("A"));
  CHECK(path[0] == m.tagset().require("B"));
}

TEST_CASE("viterbi equals exhaustive search on random small models") {
  static const char* kForms[] = {"u", "v", "w", "x", "y", "z", "q", "r"};
  static const char* kTags[] = {"T0", "T1", "T2", "T3"};
  std::mt19937 rng(20260816);

  for (int round = 0; round < 6; ++round) {
    std::vector<Sentence> train;
    std::size_t nsent = 4 + rng() % 8;
    for (std::size_t i = 0; i < nsent; ++i) {
      Sentence s;
      std::size_t len = 1 + rng() % 6;
      for (std::size_t j = 0; j < len; ++j)
        s.tokens.push_back({kForms[rng() % 8], kTags[rng() % 4]});
      train.push_back(std::move(s));
    }
    HmmOptions opt;
    opt.alpha = (round % 2 == 0) ? 0.001 : 0.0;
    auto m = HmmModel::train(train, "xx", opt);

    for (int c = 0; c < 25; ++c) {
      std::vector<std::string> forms;
      std::size_t len = 1 + rng() % 5;
      for (std::size_t j = 0; j < len; ++j)
        forms.push_back(rng() % 5 == 0 ? "oov-form" : kForms[rng() % 8]);
      INFO("round " << round << " case " << c);
      CHECK(m.viterbi(forms) == brute_force_decode(m, forms));
    }
  }
}

TEST_CASE("empty input yields an empty path") {
  auto m = HmmModel::train(toy_corpus(), "en");
  CHECK(m.viterbi({}).empty());
  CHECK(m.tag({}).empty());
}

TEST_CASE("hmm model round-trips and serializes deterministically") {
  auto train = testutil::synthetic_corpus(40, 99);
  auto m = HmmModel::train(train, "tr");
  TempDir tmp;
  auto files = m.save(tmp.path() / "one");
  REQUIRE(files.size() == 1);
  auto bytes1 = testutil::read_file(files[0]);
  CHECK(bytes1.starts_with("TAGMARK hmm 1 tr\n"));
  CHECK(bytes1 == testutil::read_file(m.save(tmp.path() / "two")[0]));

  auto loaded = HmmModel::load(files[0]);
  CHECK(loaded.language() == "tr");
  CHECK(loaded.alpha() == m.alpha());
  CHECK(loaded.tagset() == m.tagset());
  // Identical counts mean identical probabilities, bit for bit.
  for (int t = 0; t < m.tagset().size(); ++t) {
    CHECK(loaded.initial_prob(t) == m.initial_prob(t));
    for (int b = 0; b < m.tagset().size(); ++b)
      CHECK(loaded.transition_prob(t, b) == m.transition_prob(t, b));
    CHECK(loaded.emission_prob(t, "the") == m.emission_prob(t, "the"));
    CHECK(loaded.emission_prob(t, "never-seen") == m.emission_prob(t, "never-seen"));
  }
  std::vector<std::string> probe = {"the", "dog", "runs", "oov"};
  CHECK(loaded.viterbi(probe) == m.viterbi(probe));
  CHECK(testutil::read_file(loaded.save(tmp.path() / "three")[0]) == bytes1);
}

TEST_CASE("hmm load rejects damaged files") {
  TempDir tmp;
  auto p = tmp.path() / "hmm.model.txt";
  testutil::write_file(p, "TAGMARK unigram 1 en\n");
  CHECK_THROWS_AS(HmmModel::load(p), SerializationError);
  testutil::write_file(p, "TAGMARK hmm 1 en\nalpha 0.001\nsentences 3\ntags 2\nD\nN\n");
  CHECK_THROWS_AS(HmmModel::load(p), SerializationError);
  CHECK_THROWS_AS(HmmModel::load(tmp.path() / "missing.txt"), SerializationError);
}

TEST_CASE("empty hmm training corpus is rejected") {
  std::vector<Sentence> empty;
  CHECK_THROWS_AS(HmmModel::train(empty, "en"), TrainError);
}
