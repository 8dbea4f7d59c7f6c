#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tagmark/error.hpp"
#include "tagmark/metrics.hpp"

namespace tagmark {

/// One tagger's position in a (size, accuracy) trade-off for one language.
/// Size is minimized, accuracy maximized.
struct MetricPoint {
  std::string tagger;
  std::string language;
  double size_value = 0.0;
  double accuracy_value = 0.0;
  std::string size_metric;
  std::string accuracy_metric;

  bool operator==(const MetricPoint&) const = default;
};

inline constexpr std::array<std::string_view, 3> kSizeMetrics = {"memory", "model",
                                                                 "compressed"};
inline constexpr std::array<std::string_view, 2> kAccuracyMetrics = {"token", "sentence"};

/// Projects a record onto one size metric and one accuracy metric.
inline MetricPoint metric_point(const MeasurementRecord& r, std::string_view size_metric,
                                std::string_view accuracy_metric) {
  MetricPoint p;
  p.tagger = r.tagger;
  p.language = r.language;
  p.size_metric = size_metric;
  p.accuracy_metric = accuracy_metric;
  if (size_metric == "memory") p.size_value = r.size.memory_avg_kb;
  else if (size_metric == "model") p.size_value = r.size.model_kb;
  else if (size_metric == "compressed") p.size_value = r.size.model_compressed_kb;
  else throw ComparisonError("unknown size metric '" + std::string(size_metric) + "'");
  if (accuracy_metric == "token") p.accuracy_value = r.accuracy.token_accuracy;
  else if (accuracy_metric == "sentence") p.accuracy_value = r.accuracy.sentence_accuracy;
  else throw ComparisonError("unknown accuracy metric '" + std::string(accuracy_metric) + "'");
  return p;
}

/// True iff p is at least as small and at least as accurate, and strictly
/// better on one of the two.
inline bool dominates(const MetricPoint& p, const MetricPoint& q) {
  if (p.size_metric != q.size_metric || p.accuracy_metric != q.accuracy_metric)
    throw ComparisonError("metric kind mismatch: (" + p.size_metric + ", " + p.accuracy_metric +
                          ") vs (" + q.size_metric + ", " + q.accuracy_metric + ")");
  if (p.language != q.language)
    throw ComparisonError("language mismatch: " + p.language + " vs " + q.language);
  return p.size_value <= q.size_value && p.accuracy_value >= q.accuracy_value &&
         (p.size_value < q.size_value || p.accuracy_value > q.accuracy_value);
}

/// Maximal points, ascending in size and strictly increasing in accuracy.
/// Equal-coordinate co-optima are all retained.
struct Skyline {
  std::vector<MetricPoint> points;
};

inline Skyline compute_skyline(std::vector<MetricPoint> points) {
  if (points.empty()) throw ComparisonError("skyline of an empty point set");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size_metric != points[0].size_metric ||
        points[i].accuracy_metric != points[0].accuracy_metric)
      throw ComparisonError("metric kind mismatch within one skyline input");
    if (points[i].language != points[0].language)
      throw ComparisonError("language mismatch within one skyline input");
  }
  std::sort(points.begin(), points.end(), [](const MetricPoint& a, const MetricPoint& b) {
    if (a.size_value != b.size_value) return a.size_value < b.size_value;
    if (a.accuracy_value != b.accuracy_value) return a.accuracy_value > b.accuracy_value;
    return a.tagger < b.tagger;
  });

  Skyline sky;
  double best_accuracy = 0.0;
  bool have_best = false;
  for (std::size_t i = 0; i < points.size();) {
    std::size_t j = i;
    while (j < points.size() && points[j].size_value == points[i].size_value) ++j;
    double group_max = points[i].accuracy_value;
    if (!have_best || group_max > best_accuracy) {
      for (std::size_t k = i; k < j && points[k].accuracy_value == group_max; ++k)
        sky.points.push_back(points[k]);
      best_accuracy = group_max;
      have_best = true;
    }
    i = j;
  }
  return sky;
}

/// Per-tagger count of languages where the tagger sits on that language's
/// skyline for the given metric pair. Taggers absent from a language simply
/// do not compete there.
inline std::map<std::string, int> skyline_counts(std::span<const MeasurementRecord> records,
                                                 std::string_view size_metric,
                                                 std::string_view accuracy_metric) {
  std::map<std::string, std::vector<MetricPoint>> by_language;
  std::map<std::string, int> counts;
  for (const auto& r : records) {
    by_language[r.language].push_back(metric_point(r, size_metric, accuracy_metric));
    counts.emplace(r.tagger, 0);
  }
  for (const auto& [language, points] : by_language) {
    std::set<std::string> members;
    for (const auto& p : compute_skyline(points).points) members.insert(p.tagger);
    for (const auto& tagger : members) ++counts[tagger];
  }
  return counts;
}

}  // namespace tagmark
