#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tagmark/corpus.hpp"
#include "tagmark/error.hpp"
#include "tagmark/skyline.hpp"
#include "tagmark/taggers/brill.hpp"
#include "tagmark/taggers/hmm.hpp"
#include "tagmark/taggers/tnt.hpp"
#include "tagmark/util.hpp"

namespace tagmark {

inline constexpr std::string_view kVersion = "0.1.0";

inline const std::vector<std::string>& tagger_kinds() {
  static const std::vector<std::string> kinds = {"brill", "external", "hmm",
                                                 "tnt", "unigram"};
  return kinds;
}

struct LanguageSpec {
  std::string code;                 // ISO 639-1 code, doubles as the row label
  std::filesystem::path treebank;   // directory holding *-ud-{train,dev,test}.conllu
};

struct TaggerSpec {
  std::string kind;
  std::string name;                 // column label; defaults to kind
  HmmOptions hmm;
  TnTOptions tnt;
  BrillOptions brill;
  std::vector<std::string> command;                // external only
  std::vector<std::filesystem::path> artifacts;    // external only
};

struct MetricSelection {
  std::vector<std::string> size = {"memory", "model", "compressed"};
  std::vector<std::string> accuracy = {"token", "sentence"};
};

struct ExperimentConfig {
  std::vector<LanguageSpec> languages;
  std::vector<TaggerSpec> taggers;
  MetricSelection metrics;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  std::uint32_t compression_preset = 6;
  double poll_hz = 2.0;
};

namespace detail {

class IssueList {
 public:
  void add(const std::string& pointer, const std::string& message) {
    issues_.push_back(pointer + ": " + message);
  }
  void raise_if_any() const {
    if (!issues_.empty()) throw ConfigError(issues_);
  }
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

inline std::string joined(std::span<const std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

inline void check_keys(const nlohmann::json& obj, const std::string& pointer,
                       std::initializer_list<std::string_view> known, IssueList& issues) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (auto k : known)
      if (key == k) ok = true;
    if (!ok) issues.add(pointer + "/" + key, "unknown key");
  }
}

inline bool read_string(const nlohmann::json& obj, const std::string& pointer,
                        const char* key, std::string& out, IssueList& issues) {
  if (!obj.contains(key)) return false;
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    issues.add(pointer + "/" + key, "expected a string");
    return false;
  }
  out = v.get<std::string>();
  return true;
}

inline bool read_number(const nlohmann::json& obj, const std::string& pointer,
                        const char* key, double& out, IssueList& issues) {
  if (!obj.contains(key)) return false;
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    issues.add(pointer + "/" + key, "expected a number");
    return false;
  }
  out = v.get<double>();
  return true;
}

inline bool read_integer(const nlohmann::json& obj, const std::string& pointer,
                         const char* key, long long& out, IssueList& issues) {
  if (!obj.contains(key)) return false;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    issues.add(pointer + "/" + key, "expected an integer");
    return false;
  }
  out = v.get<long long>();
  return true;
}

inline bool read_string_list(const nlohmann::json& obj, const std::string& pointer,
                             const char* key, std::vector<std::string>& out,
                             IssueList& issues) {
  if (!obj.contains(key)) return false;
  const auto& v = obj.at(key);
  if (!v.is_array()) {
    issues.add(pointer + "/" + key, "expected an array of strings");
    return false;
  }
  std::vector<std::string> parsed;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      issues.add(pointer + "/" + key + "/" + std::to_string(i), "expected a string");
      return false;
    }
    parsed.push_back(v[i].get<std::string>());
  }
  out = std::move(parsed);
  return true;
}

inline void check_metric_names(std::span<const std::string> names,
                               std::span<const std::string_view> valid,
                               const std::string& pointer, IssueList& issues) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string where = pointer + "/" + std::to_string(i);
    bool known = false;
    for (auto v : valid)
      if (names[i] == v) known = true;
    if (!known) {
      std::string list;
      for (auto v : valid) {
        if (!list.empty()) list += ", ";
        list += v;
      }
      issues.add(where, "unknown metric '" + names[i] + "' (valid: " + list + ")");
    } else if (!seen.insert(names[i]).second) {
      issues.add(where, "duplicate metric '" + names[i] + "'");
    }
  }
  if (names.empty()) issues.add(pointer, "must select at least one metric");
}

inline TaggerSpec parse_tagger(const nlohmann::json& obj, const std::string& pointer,
                               IssueList& issues) {
  TaggerSpec spec;
  check_keys(obj, pointer,
             {"kind", "name", "alpha", "suffix_length", "suffix_cutoff", "beam_width",
              "threshold", "max_rules", "command", "artifacts"},
             issues);
  if (!read_string(obj, pointer, "kind", spec.kind, issues) || spec.kind.empty()) {
    issues.add(pointer + "/kind", "required");
    return spec;
  }
  const auto& kinds = tagger_kinds();
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end()) {
    issues.add(pointer + "/kind", "unknown tagger kind '" + spec.kind +
                                      "' (valid: " + joined(kinds) + ")");
    return spec;
  }
  spec.name = spec.kind;
  read_string(obj, pointer, "name", spec.name, issues);
  if (spec.name.empty()) issues.add(pointer + "/name", "must not be empty");
  if (spec.name.find('/') != std::string::npos)
    issues.add(pointer + "/name", "must not contain '/'");

  auto reject = [&](const char* key, std::string_view need) {
    if (obj.contains(key))
      issues.add(pointer + "/" + key,
                 std::string("only valid for kind '") + std::string(need) + "'");
  };

  if (spec.kind == "hmm") {
    read_number(obj, pointer, "alpha", spec.hmm.alpha, issues);
    if (spec.hmm.alpha <= 0.0) issues.add(pointer + "/alpha", "must be positive");
  } else {
    reject("alpha", "hmm");
  }

  if (spec.kind == "tnt") {
    long long v = 0;
    if (read_integer(obj, pointer, "suffix_length", v, issues)) {
      if (v < 1) issues.add(pointer + "/suffix_length", "must be at least 1");
      else spec.tnt.suffix_length = static_cast<int>(v);
    }
    if (read_integer(obj, pointer, "suffix_cutoff", v, issues)) {
      if (v < 0) issues.add(pointer + "/suffix_cutoff", "must not be negative");
      else spec.tnt.suffix_cutoff = v;
    }
    if (read_integer(obj, pointer, "beam_width", v, issues)) {
      if (v < 0) issues.add(pointer + "/beam_width", "must not be negative (0 = unbounded)");
      else spec.tnt.beam_width = static_cast<std::size_t>(v);
    }
  } else {
    reject("suffix_length", "tnt");
    reject("suffix_cutoff", "tnt");
    reject("beam_width", "tnt");
  }

  if (spec.kind == "brill") {
    long long v = 0;
    if (read_integer(obj, pointer, "threshold", v, issues)) {
      if (v < 1) issues.add(pointer + "/threshold", "must be at least 1");
      else spec.brill.threshold = v;
    }
    if (read_integer(obj, pointer, "max_rules", v, issues)) {
      if (v < 1) issues.add(pointer + "/max_rules", "must be at least 1");
      else spec.brill.max_rules = static_cast<std::size_t>(v);
    }
  } else {
    reject("threshold", "brill");
    reject("max_rules", "brill");
  }

  if (spec.kind == "external") {
    if (!read_string_list(obj, pointer, "command", spec.command, issues) ||
        spec.command.empty())
      issues.add(pointer + "/command", "required and must not be empty");
    std::vector<std::string> artifacts;
    read_string_list(obj, pointer, "artifacts", artifacts, issues);
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
      std::filesystem::path p = artifacts[i];
      if (!std::filesystem::is_regular_file(p))
        issues.add(pointer + "/artifacts/" + std::to_string(i),
                   "no such file: " + p.string());
      spec.artifacts.push_back(std::move(p));
    }
  } else {
    reject("command", "external");
    reject("artifacts", "external");
  }
  return spec;
}

}  // namespace detail

/// Parses and validates a config document. Violations are aggregated into a
/// single ConfigError; every issue names the offending field by JSON pointer.
inline ExperimentConfig validate_config(const nlohmann::json& doc) {
  detail::IssueList issues;
  ExperimentConfig config;

  if (!doc.is_object()) {
    issues.add("", "config root must be an object");
    issues.raise_if_any();
  }
  detail::check_keys(doc, "",
                     {"languages", "taggers", "metrics", "out_dir", "seed",
                      "compression_preset", "poll_hz"},
                     issues);

  if (!doc.contains("languages") || !doc.at("languages").is_array() ||
      doc.at("languages").empty()) {
    issues.add("/languages", "required non-empty array");
  } else {
    std::set<std::string> codes;
    const auto& arr = doc.at("languages");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string pointer = "/languages/" + std::to_string(i);
      if (!arr[i].is_object()) {
        issues.add(pointer, "expected an object");
        continue;
      }
      detail::check_keys(arr[i], pointer, {"code", "treebank"}, issues);
      LanguageSpec lang;
      if (!detail::read_string(arr[i], pointer, "code", lang.code, issues) ||
          lang.code.empty())
        issues.add(pointer + "/code", "required");
      std::string treebank;
      if (!detail::read_string(arr[i], pointer, "treebank", treebank, issues) ||
          treebank.empty())
        issues.add(pointer + "/treebank", "required");
      lang.treebank = treebank;
      if (!lang.code.empty() && !codes.insert(lang.code).second)
        issues.add(pointer + "/code", "duplicate language code '" + lang.code + "'");
      if (!treebank.empty() && !std::filesystem::is_directory(lang.treebank))
        issues.add(pointer + "/treebank", "no such directory: " + treebank);
      config.languages.push_back(std::move(lang));
    }
  }

  if (!doc.contains("taggers") || !doc.at("taggers").is_array() ||
      doc.at("taggers").empty()) {
    issues.add("/taggers", "required non-empty array");
  } else {
    std::set<std::string> names;
    const auto& arr = doc.at("taggers");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string pointer = "/taggers/" + std::to_string(i);
      if (!arr[i].is_object()) {
        issues.add(pointer, "expected an object");
        continue;
      }
      TaggerSpec spec = detail::parse_tagger(arr[i], pointer, issues);
      if (!spec.name.empty() && !names.insert(spec.name).second)
        issues.add(pointer + "/name", "duplicate tagger name '" + spec.name + "'");
      config.taggers.push_back(std::move(spec));
    }
  }

  if (doc.contains("metrics")) {
    const auto& m = doc.at("metrics");
    if (!m.is_object()) {
      issues.add("/metrics", "expected an object");
    } else {
      detail::check_keys(m, "/metrics", {"size", "accuracy"}, issues);
      detail::read_string_list(m, "/metrics", "size", config.metrics.size, issues);
      detail::read_string_list(m, "/metrics", "accuracy", config.metrics.accuracy,
                               issues);
      detail::check_metric_names(config.metrics.size, kSizeMetrics, "/metrics/size",
                                 issues);
      detail::check_metric_names(config.metrics.accuracy, kAccuracyMetrics,
                                 "/metrics/accuracy", issues);
    }
  }

  std::string out_dir;
  if (detail::read_string(doc, "", "out_dir", out_dir, issues)) {
    if (out_dir.empty())
      issues.add("/out_dir", "must not be empty");
    else
      config.out_dir = out_dir;
  }

  long long seed = 0;
  if (detail::read_integer(doc, "", "seed", seed, issues)) {
    if (seed < 0)
      issues.add("/seed", "must not be negative");
    else
      config.seed = static_cast<std::uint64_t>(seed);
  }

  long long preset = 0;
  if (detail::read_integer(doc, "", "compression_preset", preset, issues)) {
    if (preset < 0 || preset > 9)
      issues.add("/compression_preset", "must be between 0 and 9");
    else
      config.compression_preset = static_cast<std::uint32_t>(preset);
  }

  detail::read_number(doc, "", "poll_hz", config.poll_hz, issues);
  if (config.poll_hz <= 0.0) issues.add("/poll_hz", "must be positive");

  issues.raise_if_any();
  return config;
}

inline ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError({file.string() + ": cannot open"});
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({file.string() + ": " + e.what()});
  }
  return validate_config(doc);
}

/// Canonical JSON rendering of a validated config: defaults materialized,
/// keys sorted. Two configs hash alike iff this string matches.
inline nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["languages"] = nlohmann::json::array();
  for (const auto& lang : config.languages)
    doc["languages"].push_back(
        {{"code", lang.code}, {"treebank", lang.treebank.string()}});
  doc["taggers"] = nlohmann::json::array();
  for (const auto& spec : config.taggers) {
    nlohmann::json t = {{"kind", spec.kind}, {"name", spec.name}};
    if (spec.kind == "hmm") t["alpha"] = spec.hmm.alpha;
    if (spec.kind == "tnt") {
      t["suffix_length"] = spec.tnt.suffix_length;
      t["suffix_cutoff"] = spec.tnt.suffix_cutoff;
      t["beam_width"] = spec.tnt.beam_width;
    }
    if (spec.kind == "brill") {
      t["threshold"] = spec.brill.threshold;
      t["max_rules"] = spec.brill.max_rules;
    }
    if (spec.kind == "external") {
      t["command"] = spec.command;
      t["artifacts"] = nlohmann::json::array();
      for (const auto& a : spec.artifacts) t["artifacts"].push_back(a.string());
    }
    doc["taggers"].push_back(std::move(t));
  }
  doc["metrics"] = {{"size", config.metrics.size},
                    {"accuracy", config.metrics.accuracy}};
  doc["out_dir"] = config.out_dir.string();
  doc["seed"] = config.seed;
  doc["compression_preset"] = config.compression_preset;
  doc["poll_hz"] = config.poll_hz;
  return doc;
}

/// Content digest of curated sentences; order-sensitive.
inline std::string digest_sentences(std::span<const Sentence> sentences) {
  std::uint64_t h = fnv1a("");
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      h = fnv1a(t.form, h);
      h = fnv1a("\x1f", h);
      h = fnv1a(t.tag, h);
      h = fnv1a("\x1e", h);
    }
    h = fnv1a("\x1d", h);
  }
  return hex64(h);
}

/// Pins settings and the exact curated data: the canonical config rendering
/// folded with each language's split digests.
inline std::string config_hash(const ExperimentConfig& config,
                               const std::map<std::string, std::string>& data_digests) {
  std::uint64_t h = fnv1a(config_to_json(config).dump());
  for (const auto& [code, digest] : data_digests) {
    h = fnv1a(code, h);
    h = fnv1a("=", h);
    h = fnv1a(digest, h);
    h = fnv1a("\n", h);
  }
  return hex64(h);
}

}  // namespace tagmark
