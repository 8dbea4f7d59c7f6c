#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tagmark/config.hpp"
#include "tagmark/corpus.hpp"
#include "tagmark/error.hpp"
#include "tagmark/manifest.hpp"
#include "tagmark/metrics.hpp"
#include "tagmark/taggers/registry.hpp"
#include "tagmark/wire.hpp"

namespace tagmark {

struct RunOptions {
  /// Command prefix that tags wire-format input from stdin for a saved model,
  /// invoked as: <tag_command...> --model <cell dir>. Used to measure built-in
  /// inference in an isolated process.
  std::vector<std::string> tag_command;
  /// Restrict to these language codes / tagger names; empty means all.
  std::vector<std::string> languages;
  std::vector<std::string> taggers;
  /// Stop each cell after training and serialization.
  bool train_only = false;
};

struct RunResult {
  RunManifest manifest;
  std::vector<std::string> ran;  // cells touched by this invocation
  long failed = 0;               // failures among them
};

namespace detail {

/// Exclusive advisory lock; serializes memory measurements machine-wide.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& file) {
    fd_ = ::open(file.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

inline std::filesystem::path memory_lock_file() {
  return std::filesystem::temp_directory_path() / "tagmark-memory.lock";
}

template <typename Predicate>
bool selected(const std::vector<std::string>& filter, Predicate matches) {
  if (filter.empty()) return true;
  for (const auto& want : filter)
    if (matches(want)) return true;
  return false;
}

inline void check_filter(const std::vector<std::string>& filter,
                         const std::vector<std::string>& available, const char* what) {
  for (const auto& want : filter)
    if (std::find(available.begin(), available.end(), want) == available.end())
      throw Error("unknown " + std::string(what) + " '" + want + "'");
}

inline std::vector<std::vector<std::string>> forms_of(std::span<const Sentence> split) {
  std::vector<std::vector<std::string>> out;
  out.reserve(split.size());
  for (const auto& s : split) {
    std::vector<std::string> forms;
    forms.reserve(s.tokens.size());
    for (const auto& t : s.tokens) forms.push_back(t.form);
    out.push_back(std::move(forms));
  }
  return out;
}

inline std::vector<std::vector<std::string>> tags_of(std::span<const Sentence> split) {
  std::vector<std::vector<std::string>> out;
  out.reserve(split.size());
  for (const auto& s : split) {
    std::vector<std::string> tags;
    tags.reserve(s.tokens.size());
    for (const auto& t : s.tokens) tags.push_back(t.tag);
    out.push_back(std::move(tags));
  }
  return out;
}

inline void append_log(const std::filesystem::path& file, const std::string& line) {
  std::ofstream out(file, std::ios::binary | std::ios::app);
  out << utc_timestamp() << ' ' << line << '\n';
}

}  // namespace detail

/// Loads and curates every language named by the config, keyed by code.
inline std::map<std::string, Treebank> load_treebanks(const ExperimentConfig& config) {
  std::map<std::string, Treebank> out;
  for (const auto& lang : config.languages)
    out[lang.code] = load_treebank(lang.treebank, lang.code);
  return out;
}

/// Digest over a treebank's curated splits, used to pin data in the run hash.
inline std::string treebank_digest(const Treebank& tb) {
  std::uint64_t h = fnv1a(digest_sentences(tb.train));
  h = fnv1a("|", h);
  h = fnv1a(digest_sentences(tb.dev), h);
  h = fnv1a("|", h);
  h = fnv1a(digest_sentences(tb.test), h);
  return hex64(h);
}

inline std::string run_hash(const ExperimentConfig& config,
                            const std::map<std::string, Treebank>& treebanks) {
  std::map<std::string, std::string> digests;
  for (const auto& [code, tb] : treebanks) digests[code] = treebank_digest(tb);
  return config_hash(config, digests);
}

/// Runs the benchmark grid: one cell per (tagger, language) pair. Each cell
/// trains, serializes, evaluates on the test split, and appends a metrics
/// record; failures are confined to their cell. Completed cells are skipped on
/// re-runs with the same config and data.
inline RunResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options = {}) {
  std::vector<std::string> codes, names;
  for (const auto& lang : config.languages) codes.push_back(lang.code);
  for (const auto& spec : config.taggers) names.push_back(spec.name);
  detail::check_filter(options.languages, codes, "language");
  detail::check_filter(options.taggers, names, "tagger");

  auto treebanks = load_treebanks(config);
  const std::string hash = run_hash(config, treebanks);

  std::filesystem::create_directories(config.out_dir);
  auto manifest_file = config.out_dir / "manifest.json";
  RunResult result;
  if (std::filesystem::exists(manifest_file)) {
    result.manifest = load_manifest(manifest_file);
    if (result.manifest.config_hash != hash)
      throw Error("output directory " + config.out_dir.string() +
                  " holds a run with a different config hash (" +
                  result.manifest.config_hash + " vs " + hash +
                  "); use a fresh directory");
  } else {
    result.manifest.config_hash = hash;
    save_manifest(result.manifest, manifest_file);
  }

  // Test-split forms in wire format, one file per language, shared by every
  // isolated inference measurement.
  std::map<std::string, std::filesystem::path> wire_files;
  for (const auto& lang : config.languages) {
    if (!detail::selected(options.languages, [&](const std::string& w) {
          return w == lang.code;
        }))
      continue;
    auto dir = config.out_dir / "data" / lang.code;
    std::filesystem::create_directories(dir);
    auto file = dir / "test.wire";
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + file.string());
    wire_write(out, detail::forms_of(treebanks.at(lang.code).test));
    wire_files[lang.code] = file;
  }

  for (const auto& spec : config.taggers) {
    if (!detail::selected(options.taggers,
                          [&](const std::string& w) { return w == spec.name; }))
      continue;
    for (const auto& lang : config.languages) {
      if (!detail::selected(options.languages, [&](const std::string& w) {
            return w == lang.code;
          }))
        continue;

      const std::string key = RunManifest::cell_key(spec.name, lang.code);
      CellState& cell = result.manifest.cells[key];
      const bool done = options.train_only ? cell.status == CellStatus::trained ||
                                                 cell.status == CellStatus::evaluated
                                           : cell.status == CellStatus::evaluated;
      if (done) continue;

      result.ran.push_back(key);
      auto cell_dir = config.out_dir / spec.name / lang.code;
      std::filesystem::create_directories(cell_dir);
      auto log_file = cell_dir / "log.txt";
      const Treebank& tb = treebanks.at(lang.code);

      try {
        const std::string started_at = utc_timestamp();

        std::unique_ptr<Tagger> tagger;
        if (cell.status == CellStatus::trained && spec.kind != "external") {
          tagger = load_model_dir(cell_dir);
          detail::append_log(log_file, "reusing trained model");
        } else {
          tagger = train_tagger(spec, tb.train, lang.code);
          detail::append_log(log_file, "trained on " + std::to_string(tb.train.size()) +
                                           " sentences");
        }

        std::vector<std::filesystem::path> artifacts = tagger->save(cell_dir);
        cell.artifacts.clear();
        for (const auto& p : artifacts) {
          auto rel = p.lexically_relative(cell_dir);
          // External artifacts live wherever the config points, not in the cell.
          bool inside = !rel.empty() && rel.native().rfind("..", 0) != 0;
          cell.artifacts.push_back(inside ? rel.string() : p.string());
        }
        cell.status = CellStatus::trained;
        cell.cause.clear();
        save_manifest(result.manifest, manifest_file);

        if (options.train_only) continue;

        MeasurementRecord record;
        record.tagger = spec.name;
        record.language = lang.code;
        record.config_hash = hash;
        record.compression_preset = config.compression_preset;
        record.poll_hz = config.poll_hz;
        record.started_at = started_at;

        record.accuracy = accuracy(detail::tags_of(tb.test), tagger->tag_corpus(tb.test));
        detail::append_log(
            log_file, "token accuracy " + format_fixed(record.accuracy.token_accuracy, 6));

        record.size.model_kb = artifacts.empty() ? 0.0 : model_size_kb(artifacts);
        record.size.model_compressed_kb =
            artifacts.empty() ? 0.0
                              : compressed_size_kb(artifacts, config.compression_preset);

        std::vector<std::string> command;
        if (spec.kind == "external") {
          command = spec.command;
        } else {
          if (options.tag_command.empty())
            throw MeasurementError("isolated inference command not configured");
          command = options.tag_command;
          command.push_back("--model");
          command.push_back(cell_dir.string());
        }
        MemoryOptions memopts;
        memopts.poll_hz = config.poll_hz;
        memopts.stdin_file = wire_files.at(lang.code);
        memopts.stderr_file = cell_dir / "memory.stderr.log";
        MemoryUsage usage;
        {
          detail::FileLock lock(detail::memory_lock_file());
          usage = measure_memory(command, memopts);
        }
        record.size.memory_avg_kb = usage.avg_kb;
        record.size.memory_peak_kb = usage.peak_kb;
        record.size.sample_count = usage.sample_count;
        record.finished_at = utc_timestamp();

        {
          auto file = cell_dir / "metrics.jsonl";
          std::ofstream out(file, std::ios::binary | std::ios::trunc);
          if (!out) throw Error("cannot write " + file.string());
          out << to_json(record).dump() << '\n';
        }
        cell.status = CellStatus::evaluated;
        save_manifest(result.manifest, manifest_file);
        detail::append_log(log_file, "evaluated");
      } catch (const std::exception& e) {
        cell.status = CellStatus::failed;
        cell.cause = e.what();
        ++result.failed;
        save_manifest(result.manifest, manifest_file);
        detail::append_log(log_file, std::string("failed: ") + e.what());
      }
    }
  }
  return result;
}

/// Reads every evaluated cell's record from an output directory, checking each
/// against the manifest's config hash.
inline std::vector<MeasurementRecord> load_records(const std::filesystem::path& out_dir) {
  auto manifest = load_manifest(out_dir / "manifest.json");
  std::vector<MeasurementRecord> records;
  for (const auto& [key, cell] : manifest.cells) {
    if (cell.status != CellStatus::evaluated) continue;
    auto file = out_dir / key / "metrics.jsonl";
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("manifest marks " + key + " evaluated but " + file.string() +
                         " is missing");
    std::string line;
    if (!std::getline(in, line) || line.empty())
      throw Error(file.string() + ": empty record");
    MeasurementRecord record;
    try {
      record = record_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(file.string() + ": " + e.what());
    }
    if (record.config_hash != manifest.config_hash)
      throw Error(file.string() + ": config hash " + record.config_hash +
                  " does not match manifest " + manifest.config_hash);
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace tagmark
