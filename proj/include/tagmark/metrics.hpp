#pragma once

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tagmark/error.hpp"
#include "tagmark/process.hpp"
#include "tagmark/util.hpp"
#include "tagmark/xz.hpp"

namespace tagmark {

struct AccuracyResult {
  double token_accuracy = 0.0;
  double sentence_accuracy = 0.0;
  long token_count = 0;
  long sentence_count = 0;
};

namespace detail {

/// Shared alignment walk for both accuracy metrics.
template <typename PerToken, typename PerSentence>
void walk_aligned(std::span<const std::vector<std::string>> gold,
                  std::span<const std::vector<std::string>> pred, PerToken per_token,
                  PerSentence per_sentence) {
  if (gold.size() != pred.size())
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " sentences, prediction " +
                             std::to_string(pred.size()),
                         std::min(gold.size(), pred.size()));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size())
      throw AlignmentError("gold has " + std::to_string(gold[i].size()) + " tokens, prediction " +
                               std::to_string(pred[i].size()),
                           i);
    bool all = true;
    for (std::size_t j = 0; j < gold[i].size(); ++j) {
      bool match = gold[i][j] == pred[i][j];
      all &= match;
      per_token(match);
    }
    per_sentence(all);
  }
}

}  // namespace detail

inline AccuracyResult accuracy(std::span<const std::vector<std::string>> gold,
                               std::span<const std::vector<std::string>> pred) {
  AccuracyResult r;
  long token_hits = 0, sentence_hits = 0;
  detail::walk_aligned(
      gold, pred,
      [&](bool match) {
        ++r.token_count;
        token_hits += match;
      },
      [&](bool all) {
        ++r.sentence_count;
        sentence_hits += all;
      });
  r.token_accuracy = r.token_count == 0 ? 0.0 : static_cast<double>(token_hits) / r.token_count;
  r.sentence_accuracy =
      r.sentence_count == 0 ? 0.0 : static_cast<double>(sentence_hits) / r.sentence_count;
  return r;
}

inline double token_accuracy(std::span<const std::vector<std::string>> gold,
                             std::span<const std::vector<std::string>> pred) {
  return accuracy(gold, pred).token_accuracy;
}

inline double sentence_accuracy(std::span<const std::vector<std::string>> gold,
                                std::span<const std::vector<std::string>> pred) {
  return accuracy(gold, pred).sentence_accuracy;
}

/// Sum of artifact byte lengths in decimal kilobytes (1 kB = 1000 bytes).
inline double model_size_kb(const std::vector<std::filesystem::path>& artifacts) {
  std::uintmax_t total = 0;
  for (const auto& p : artifacts) {
    std::error_code ec;
    auto size = std::filesystem::file_size(p, ec);
    if (ec) throw MeasurementError("missing artifact: " + p.string());
    total += size;
  }
  return static_cast<double>(total) / 1000.0;
}

/// Archives the artifacts, compresses to a temporary .xz, measures, deletes.
inline double compressed_size_kb(const std::vector<std::filesystem::path>& artifacts,
                                 std::uint32_t preset = LZMA_PRESET_DEFAULT) {
  auto compressed = xz_compress(tar_archive(artifacts), preset);

  static std::atomic<unsigned> counter{0};
  auto temp = std::filesystem::temp_directory_path() /
              ("tagmark-" + std::to_string(getpid()) + "-" +
               std::to_string(counter.fetch_add(1)) + ".tar.xz");
  {
    std::ofstream out(temp, std::ios::binary);
    out.write(reinterpret_cast<const char*>(compressed.data()),
              static_cast<std::streamsize>(compressed.size()));
    if (!out) throw MeasurementError("cannot write " + temp.string());
  }
  std::error_code ec;
  auto size = std::filesystem::file_size(temp, ec);
  std::filesystem::remove(temp, ec);
  if (ec) throw MeasurementError("cannot remove " + temp.string());
  return static_cast<double>(size) / 1000.0;
}

struct MemoryUsage {
  double avg_kb = 0.0;
  double peak_kb = 0.0;
  long sample_count = 0;
};

struct MemoryOptions {
  double poll_hz = 2.0;
  std::filesystem::path stdin_file;
  std::filesystem::path stdout_file;
  std::filesystem::path stderr_file;
};

/// Runs the command to completion while polling its resident set on a fixed
/// wall-clock grid, plus one forced sample right after spawn. The average is
/// the headline number; the kernel's peak is kept as a supplementary figure.
inline MemoryUsage measure_memory(const std::vector<std::string>& argv,
                                  const MemoryOptions& options = {}) {
  if (options.poll_hz <= 0.0) throw MeasurementError("poll rate must be positive");

  ChildProcess child(argv,
                     {.in = options.stdin_file, .out = options.stdout_file,
                      .err = options.stderr_file});
  const auto start = std::chrono::steady_clock::now();
  std::vector<long> samples;
  if (auto rss = child.rss_bytes(); rss && *rss > 0) samples.push_back(*rss);

  const auto period = std::chrono::duration<double>(1.0 / options.poll_hz);
  for (long k = 1; child.running(); ++k) {
    std::this_thread::sleep_until(
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(period * k));
    if (!child.running()) break;
    if (auto rss = child.rss_bytes(); rss && *rss > 0) samples.push_back(*rss);
  }

  int code = child.wait();
  if (code != 0) {
    std::string tail =
        options.stderr_file.empty() ? "" : read_file_tail(options.stderr_file);
    throw MeasurementError("measured process exited with status " + std::to_string(code) +
                           (tail.empty() ? "" : "; stderr: " + tail));
  }

  // A process can finish before its statm is readable even once; the kernel's
  // peak accounting then stands in as the forced sample.
  if (samples.empty()) samples.push_back(child.peak_rss_bytes());

  MemoryUsage usage;
  usage.sample_count = static_cast<long>(samples.size());
  double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
  usage.avg_kb = sum / static_cast<double>(samples.size()) / 1000.0;
  usage.peak_kb = static_cast<double>(child.peak_rss_bytes()) / 1000.0;
  return usage;
}

struct SizeResult {
  double memory_avg_kb = 0.0;
  double memory_peak_kb = 0.0;
  double model_kb = 0.0;
  double model_compressed_kb = 0.0;
  long sample_count = 0;
};

/// One evaluation of one tagger on one language, as persisted to the cell's
/// metrics JSON-lines file.
struct MeasurementRecord {
  std::string tagger;
  std::string language;
  AccuracyResult accuracy;
  SizeResult size;
  std::uint32_t compression_preset = LZMA_PRESET_DEFAULT;
  double poll_hz = 2.0;
  std::string started_at;
  std::string finished_at;
  std::string config_hash;
};

inline std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json to_json(const MeasurementRecord& r) {
  return nlohmann::json{
      {"tagger", r.tagger},
      {"language", r.language},
      {"token_accuracy", r.accuracy.token_accuracy},
      {"sentence_accuracy", r.accuracy.sentence_accuracy},
      {"token_count", r.accuracy.token_count},
      {"sentence_count", r.accuracy.sentence_count},
      {"memory_avg_kb", r.size.memory_avg_kb},
      {"memory_peak_kb", r.size.memory_peak_kb},
      {"model_kb", r.size.model_kb},
      {"model_compressed_kb", r.size.model_compressed_kb},
      {"memory_sample_count", r.size.sample_count},
      {"compression_preset", r.compression_preset},
      {"poll_hz", r.poll_hz},
      {"started_at", r.started_at},
      {"finished_at", r.finished_at},
      {"config_hash", r.config_hash},
  };
}

inline MeasurementRecord record_from_json(const nlohmann::json& j) {
  MeasurementRecord r;
  r.tagger = j.at("tagger").get<std::string>();
  r.language = j.at("language").get<std::string>();
  r.accuracy.token_accuracy = j.at("token_accuracy").get<double>();
  r.accuracy.sentence_accuracy = j.at("sentence_accuracy").get<double>();
  r.accuracy.token_count = j.at("token_count").get<long>();
  r.accuracy.sentence_count = j.at("sentence_count").get<long>();
  r.size.memory_avg_kb = j.at("memory_avg_kb").get<double>();
  r.size.memory_peak_kb = j.at("memory_peak_kb").get<double>();
  r.size.model_kb = j.at("model_kb").get<double>();
  r.size.model_compressed_kb = j.at("model_compressed_kb").get<double>();
  r.size.sample_count = j.at("memory_sample_count").get<long>();
  r.compression_preset = j.at("compression_preset").get<std::uint32_t>();
  r.poll_hz = j.at("poll_hz").get<double>();
  r.started_at = j.at("started_at").get<std::string>();
  r.finished_at = j.at("finished_at").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  return r;
}

}  // namespace tagmark
