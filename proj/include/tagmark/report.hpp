#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tagmark/config.hpp"
#include "tagmark/error.hpp"
#include "tagmark/metrics.hpp"
#include "tagmark/skyline.hpp"
#include "tagmark/util.hpp"

namespace tagmark {

struct ReportOptions {
  /// Render per-language skyline plots for every selected metric pair instead
  /// of only memory vs token accuracy.
  bool all_pairs = false;
  std::vector<std::string> size_metrics = {"memory", "model", "compressed"};
  std::vector<std::string> accuracy_metrics = {"token", "sentence"};
};

struct ReportBundle {
  std::vector<std::filesystem::path> files;
};

namespace detail {

inline std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

inline std::string csv_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

inline std::string md_row(std::span<const std::string> fields) {
  std::string out = "|";
  for (const auto& f : fields) {
    out += ' ';
    out += f;
    out += " |";
  }
  out += '\n';
  return out;
}

inline std::string md_rule(std::size_t columns) {
  std::string out = "|";
  for (std::size_t i = 0; i < columns; ++i) out += " --- |";
  out += '\n';
  return out;
}

/// Records arranged for table rendering: sorted axes plus cell lookup.
struct Grid {
  std::vector<std::string> languages;
  std::vector<std::string> taggers;
  std::map<std::string, std::map<std::string, const MeasurementRecord*>> cells;

  explicit Grid(std::span<const MeasurementRecord> records) {
    std::set<std::string> langs, tags;
    for (const auto& r : records) {
      langs.insert(r.language);
      tags.insert(r.tagger);
      auto& slot = cells[r.language][r.tagger];
      if (slot)
        throw Error("duplicate record for cell " + r.tagger + "/" + r.language);
      slot = &r;
    }
    languages.assign(langs.begin(), langs.end());
    taggers.assign(tags.begin(), tags.end());
  }

  const MeasurementRecord* at(const std::string& language, const std::string& tagger) const {
    auto row = cells.find(language);
    if (row == cells.end()) return nullptr;
    auto cell = row->second.find(tagger);
    return cell == row->second.end() ? nullptr : cell->second;
  }
};

inline double accuracy_value(const MeasurementRecord& r, const std::string& metric) {
  return metric == "sentence" ? r.accuracy.sentence_accuracy : r.accuracy.token_accuracy;
}

struct TableCells {
  // Values per [language][tagger]; NaN marks an absent cell.
  std::vector<std::vector<double>> values;
  const Grid& grid;
};

inline TableCells accuracy_cells(const Grid& grid, const std::string& metric) {
  TableCells t{{}, grid};
  for (const auto& lang : grid.languages) {
    std::vector<double> row;
    for (const auto& tagger : grid.taggers) {
      const auto* r = grid.at(lang, tagger);
      row.push_back(r ? accuracy_value(*r, metric) * 100.0 : std::nan(""));
    }
    t.values.push_back(std::move(row));
  }
  return t;
}

inline std::string mean_or_dash(std::span<const double> values,
                                const std::string& (*fmt)(std::string&, double)) {
  double sum = 0.0;
  int n = 0;
  for (double v : values)
    if (!std::isnan(v)) {
      sum += v;
      ++n;
    }
  if (n == 0) return "-";
  std::string out;
  return fmt(out, sum / n);
}

inline const std::string& fmt_pct(std::string& out, double v) {
  out = format_fixed(v, 2);
  return out;
}

/// Languages-by-taggers accuracy table with averages over available cells.
inline std::vector<std::vector<std::string>> accuracy_table(const TableCells& t) {
  const auto& grid = t.grid;
  std::vector<std::vector<std::string>> rows;

  std::vector<std::string> header = {"language"};
  header.insert(header.end(), grid.taggers.begin(), grid.taggers.end());
  header.push_back("avg");
  rows.push_back(std::move(header));

  for (std::size_t i = 0; i < grid.languages.size(); ++i) {
    std::vector<std::string> row = {grid.languages[i]};
    for (double v : t.values[i]) {
      std::string s;
      row.push_back(std::isnan(v) ? "-" : fmt_pct(s, v));
    }
    row.push_back(mean_or_dash(t.values[i], fmt_pct));
    rows.push_back(std::move(row));
  }

  std::vector<std::string> avg_row = {"avg"};
  for (std::size_t j = 0; j < grid.taggers.size(); ++j) {
    std::vector<double> column;
    for (std::size_t i = 0; i < grid.languages.size(); ++i)
      column.push_back(t.values[i][j]);
    avg_row.push_back(mean_or_dash(column, fmt_pct));
  }
  avg_row.push_back("-");
  rows.push_back(std::move(avg_row));
  return rows;
}

/// Markdown footnote naming the taggers whose averages skip absent cells.
inline std::string incomplete_note(const TableCells& t) {
  std::vector<std::string> partial;
  for (std::size_t j = 0; j < t.grid.taggers.size(); ++j) {
    std::size_t missing = 0;
    for (std::size_t i = 0; i < t.grid.languages.size(); ++i)
      if (std::isnan(t.values[i][j])) ++missing;
    if (missing > 0)
      partial.push_back(t.grid.taggers[j] + " (missing " + std::to_string(missing) +
                        " of " + std::to_string(t.grid.languages.size()) +
                        " languages)");
  }
  if (partial.empty()) return "";
  std::string note = "\n_Averages cover available cells only. Incomplete: ";
  for (std::size_t i = 0; i < partial.size(); ++i) {
    if (i) note += ", ";
    note += partial[i];
  }
  note += "._\n";
  return note;
}

inline std::string table_to_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) out += csv_row(row);
  return out;
}

inline std::string table_to_markdown(const std::vector<std::vector<std::string>>& rows) {
  std::string out = md_row(rows.front());
  out += md_rule(rows.front().size());
  for (std::size_t i = 1; i < rows.size(); ++i) out += md_row(rows[i]);
  return out;
}

inline void write_text(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  out << content;
  if (!out.flush()) throw Error("cannot write " + file.string());
}

}  // namespace detail

/// Token or sentence accuracy as a languages-by-taggers percentage table.
inline std::string render_accuracy_csv(std::span<const MeasurementRecord> records,
                                       const std::string& metric) {
  detail::Grid grid(records);
  return detail::table_to_csv(detail::accuracy_table(detail::accuracy_cells(grid, metric)));
}

inline std::string render_accuracy_markdown(std::span<const MeasurementRecord> records,
                                            const std::string& metric) {
  detail::Grid grid(records);
  auto cells = detail::accuracy_cells(grid, metric);
  return detail::table_to_markdown(detail::accuracy_table(cells)) +
         detail::incomplete_note(cells);
}

namespace detail {

/// Per-tagger size columns averaged across the languages the tagger covers.
inline std::vector<std::vector<std::string>> size_table(const Grid& grid) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"tagger", "memory_kb", "model_kb", "model_compressed_kb"});
  for (const auto& tagger : grid.taggers) {
    double mem = 0, model = 0, compressed = 0;
    int n = 0;
    for (const auto& lang : grid.languages) {
      const auto* r = grid.at(lang, tagger);
      if (!r) continue;
      mem += r->size.memory_avg_kb;
      model += r->size.model_kb;
      compressed += r->size.model_compressed_kb;
      ++n;
    }
    std::vector<std::string> row = {tagger};
    if (n == 0) {
      row.insert(row.end(), {"-", "-", "-"});
    } else {
      row.push_back(format_sci(mem / n));
      row.push_back(format_sci(model / n));
      row.push_back(format_sci(compressed / n));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Size table: one row per tagger, averaged across its available languages.
inline std::string render_size_csv(std::span<const MeasurementRecord> records) {
  detail::Grid grid(records);
  return detail::table_to_csv(detail::size_table(grid));
}

inline std::string render_size_markdown(std::span<const MeasurementRecord> records) {
  detail::Grid grid(records);
  auto rows = detail::size_table(grid);
  rows.front() = {"Tagger", "Memory", "Model", "Model compr."};
  std::string out = detail::table_to_markdown(rows);
  out += "\n_Averages across available languages; sizes in kilobytes._\n";
  return out;
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kSvgWidth = 640;
inline constexpr double kSvgHeight = 480;
inline constexpr double kMarginLeft = 70;
inline constexpr double kMarginRight = 30;
inline constexpr double kMarginTop = 40;
inline constexpr double kMarginBottom = 55;

inline const char* kSvgStyle =
    "text{font-family:sans-serif;font-size:12px;fill:#111}"
    ".title{font-size:14px;font-weight:bold}"
    ".grid{stroke:#ccc;stroke-width:1}"
    ".frame{fill:none;stroke:#444;stroke-width:1}"
    ".point{fill:#2563eb}"
    ".skyline-point{fill:#c0392b}"
    ".skyline-line{fill:none;stroke:#c0392b;stroke-width:1.5;stroke-dasharray:6 3}"
    ".bar-label{font-size:11px}";

inline std::string svg_open(const std::string& title) {
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
      "viewBox=\"0 0 640 480\">\n";
  out += "<style>" + std::string(kSvgStyle) + "</style>\n";
  out += "<text class=\"title\" x=\"" + format_fixed(kSvgWidth / 2, 2) +
         "\" y=\"22\" text-anchor=\"middle\">" + title + "</text>\n";
  return out;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Scatter of every point with the skyline drawn as a dashed step line.
/// Log-scaled size axis, linear accuracy axis; byte-deterministic.
inline std::string render_skyline_svg(std::vector<MetricPoint> points,
                                      const Skyline& skyline, const std::string& title) {
  using namespace detail;
  if (points.empty()) throw Error("cannot plot an empty point set");
  std::sort(points.begin(), points.end(),
            [](const MetricPoint& a, const MetricPoint& b) { return a.tagger < b.tagger; });

  const double plot_w = kSvgWidth - kMarginLeft - kMarginRight;
  const double plot_h = kSvgHeight - kMarginTop - kMarginBottom;

  // Decade-aligned log domain; degenerate ranges get a decade of headroom.
  auto clamped = [](double v) { return v < 0.001 ? 0.001 : v; };
  double lo = std::floor(std::log10(clamped(points.front().size_value)));
  double hi = lo;
  for (const auto& p : points) {
    lo = std::min(lo, std::floor(std::log10(clamped(p.size_value))));
    hi = std::max(hi, std::ceil(std::log10(clamped(p.size_value))));
  }
  if (hi <= lo) {
    lo -= 1;
    hi += 1;
  }
  auto sx = [&](double size) {
    return kMarginLeft + (std::log10(clamped(size)) - lo) / (hi - lo) * plot_w;
  };
  auto sy = [&](double acc) { return kMarginTop + (1.0 - acc) * plot_h; };

  std::string out = svg_open(xml_escape(title));

  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); ++d) {
    double x = sx(std::pow(10.0, d));
    out += "<line class=\"grid\" x1=\"" + format_fixed(x, 2) + "\" y1=\"" +
           format_fixed(kMarginTop, 2) + "\" x2=\"" + format_fixed(x, 2) + "\" y2=\"" +
           format_fixed(kMarginTop + plot_h, 2) + "\"/>\n";
    out += "<text x=\"" + format_fixed(x, 2) + "\" y=\"" +
           format_fixed(kMarginTop + plot_h + 18, 2) +
           "\" text-anchor=\"middle\">1e" + std::to_string(d) + "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    double acc = t / 5.0;
    double y = sy(acc);
    out += "<line class=\"grid\" x1=\"" + format_fixed(kMarginLeft, 2) + "\" y1=\"" +
           format_fixed(y, 2) + "\" x2=\"" + format_fixed(kMarginLeft + plot_w, 2) +
           "\" y2=\"" + format_fixed(y, 2) + "\"/>\n";
    out += "<text x=\"" + format_fixed(kMarginLeft - 8, 2) + "\" y=\"" +
           format_fixed(y + 4, 2) + "\" text-anchor=\"end\">" +
           format_fixed(acc * 100, 0) + "</text>\n";
  }
  out += "<rect class=\"frame\" x=\"" + format_fixed(kMarginLeft, 2) + "\" y=\"" +
         format_fixed(kMarginTop, 2) + "\" width=\"" + format_fixed(plot_w, 2) +
         "\" height=\"" + format_fixed(plot_h, 2) + "\"/>\n";

  // Step line: horizontal to the next member's size, then up to its accuracy.
  if (!skyline.points.empty()) {
    std::string pts;
    double px = sx(skyline.points.front().size_value);
    double py = sy(skyline.points.front().accuracy_value);
    pts += format_fixed(px, 2) + "," + format_fixed(py, 2);
    for (std::size_t i = 1; i < skyline.points.size(); ++i) {
      double x = sx(skyline.points[i].size_value);
      double y = sy(skyline.points[i].accuracy_value);
      if (x == px && y == py) continue;
      pts += " " + format_fixed(x, 2) + "," + format_fixed(py, 2);
      pts += " " + format_fixed(x, 2) + "," + format_fixed(y, 2);
      px = x;
      py = y;
    }
    out += "<polyline class=\"skyline-line\" points=\"" + pts + "\"/>\n";
  }

  for (const auto& p : points) {
    bool optimal = std::find(skyline.points.begin(), skyline.points.end(), p) !=
                   skyline.points.end();
    double x = sx(p.size_value);
    double y = sy(p.accuracy_value);
    out += std::string("<circle class=\"") + (optimal ? "point skyline-point" : "point") +
           "\" cx=\"" + format_fixed(x, 2) + "\" cy=\"" + format_fixed(y, 2) +
           "\" r=\"4\"/>\n";
    out += "<text x=\"" + format_fixed(x + 6, 2) + "\" y=\"" + format_fixed(y - 6, 2) +
           "\">" + xml_escape(p.tagger) + "</text>\n";
  }

  out += "<text x=\"" + format_fixed(kMarginLeft + plot_w / 2, 2) + "\" y=\"" +
         format_fixed(kSvgHeight - 12, 2) + "\" text-anchor=\"middle\">" +
         xml_escape(points.front().size_metric) + " (kB, log scale)</text>\n";
  out += "<text x=\"16\" y=\"" + format_fixed(kMarginTop + plot_h / 2, 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         format_fixed(kMarginTop + plot_h / 2, 2) + ")\">" +
         xml_escape(points.front().accuracy_metric) + " accuracy (%)</text>\n";
  out += "</svg>\n";
  return out;
}

/// How many languages put each tagger on the skyline, per size metric.
inline std::string render_counts_csv(
    const std::vector<std::pair<std::string, std::map<std::string, int>>>& counts) {
  std::string out = detail::csv_row(std::vector<std::string>{
      "size_metric", "tagger", "languages_on_skyline"});
  for (const auto& [metric, per_tagger] : counts)
    for (const auto& [tagger, n] : per_tagger)
      out += detail::csv_row(std::vector<std::string>{metric, tagger, std::to_string(n)});
  return out;
}

inline std::string render_counts_svg(
    const std::vector<std::pair<std::string, std::map<std::string, int>>>& counts,
    int language_total, const std::string& title) {
  using namespace detail;
  if (counts.empty()) throw Error("cannot plot empty counts");
  std::set<std::string> tagger_set;
  for (const auto& [metric, per_tagger] : counts)
    for (const auto& [tagger, n] : per_tagger) tagger_set.insert(tagger);
  std::vector<std::string> taggers(tagger_set.begin(), tagger_set.end());

  static const char* palette[] = {"#2563eb", "#c0392b", "#16a34a", "#d97706",
                                  "#7c3aed", "#0891b2", "#be185d", "#4d7c0f"};
  const std::size_t palette_n = sizeof palette / sizeof palette[0];

  const double plot_w = kSvgWidth - kMarginLeft - kMarginRight - 110;  // legend gutter
  const double plot_h = kSvgHeight - kMarginTop - kMarginBottom;
  const int max_count = std::max(language_total, 1);
  auto sy = [&](double v) { return kMarginTop + (1.0 - v / max_count) * plot_h; };

  std::string out = svg_open(xml_escape(title));
  for (int t = 0; t <= max_count; ++t) {
    double y = sy(t);
    out += "<line class=\"grid\" x1=\"" + format_fixed(kMarginLeft, 2) + "\" y1=\"" +
           format_fixed(y, 2) + "\" x2=\"" + format_fixed(kMarginLeft + plot_w, 2) +
           "\" y2=\"" + format_fixed(y, 2) + "\"/>\n";
    out += "<text x=\"" + format_fixed(kMarginLeft - 8, 2) + "\" y=\"" +
           format_fixed(y + 4, 2) + "\" text-anchor=\"end\">" + std::to_string(t) +
           "</text>\n";
  }

  const double group_w = plot_w / static_cast<double>(counts.size());
  const double bar_w = group_w / static_cast<double>(taggers.size() + 1);
  for (std::size_t g = 0; g < counts.size(); ++g) {
    const auto& [metric, per_tagger] = counts[g];
    double gx = kMarginLeft + group_w * static_cast<double>(g);
    for (std::size_t i = 0; i < taggers.size(); ++i) {
      auto it = per_tagger.find(taggers[i]);
      int n = it == per_tagger.end() ? 0 : it->second;
      double x = gx + bar_w * (0.5 + static_cast<double>(i));
      double y = sy(n);
      out += "<rect fill=\"" + std::string(palette[i % palette_n]) + "\" x=\"" +
             format_fixed(x, 2) + "\" y=\"" + format_fixed(y, 2) + "\" width=\"" +
             format_fixed(bar_w * 0.9, 2) + "\" height=\"" +
             format_fixed(kMarginTop + plot_h - y, 2) + "\"/>\n";
      out += "<text class=\"bar-label\" x=\"" + format_fixed(x + bar_w * 0.45, 2) +
             "\" y=\"" + format_fixed(y - 4, 2) + "\" text-anchor=\"middle\">" +
             std::to_string(n) + "</text>\n";
    }
    out += "<text x=\"" + format_fixed(gx + group_w / 2, 2) + "\" y=\"" +
           format_fixed(kMarginTop + plot_h + 18, 2) + "\" text-anchor=\"middle\">" +
           xml_escape(metric) + "</text>\n";
  }

  out += "<rect class=\"frame\" x=\"" + format_fixed(kMarginLeft, 2) + "\" y=\"" +
         format_fixed(kMarginTop, 2) + "\" width=\"" + format_fixed(plot_w, 2) +
         "\" height=\"" + format_fixed(plot_h, 2) + "\"/>\n";

  double lx = kMarginLeft + plot_w + 16;
  for (std::size_t i = 0; i < taggers.size(); ++i) {
    double ly = kMarginTop + 16 * static_cast<double>(i);
    out += "<rect fill=\"" + std::string(palette[i % palette_n]) + "\" x=\"" +
           format_fixed(lx, 2) + "\" y=\"" + format_fixed(ly, 2) +
           "\" width=\"10\" height=\"10\"/>\n";
    out += "<text x=\"" + format_fixed(lx + 14, 2) + "\" y=\"" + format_fixed(ly + 9, 2) +
           "\">" + xml_escape(taggers[i]) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

/// Writes the full report bundle: accuracy and size tables, per-language
/// skyline plots, optimality-count charts, and a provenance block.
inline ReportBundle emit_reports(std::span<const MeasurementRecord> records,
                                 const std::filesystem::path& report_dir,
                                 const ReportOptions& options = {}) {
  if (records.empty()) throw Error("no records to report");
  detail::Grid grid(records);
  std::filesystem::create_directories(report_dir);
  ReportBundle bundle;
  auto emit = [&](const std::filesystem::path& name, const std::string& content) {
    auto file = report_dir / name;
    detail::write_text(file, content);
    bundle.files.push_back(file);
  };

  for (const auto& metric : options.accuracy_metrics) {
    emit(metric + "_accuracy.csv", render_accuracy_csv(records, metric));
    emit(metric + "_accuracy.md", render_accuracy_markdown(records, metric));
  }
  emit("sizes.csv", render_size_csv(records));
  emit("sizes.md", render_size_markdown(records));

  // Default keeps one plot per language; every selected pair is opt-in.
  std::vector<std::pair<std::string, std::string>> pairs;
  if (options.all_pairs) {
    for (const auto& s : options.size_metrics)
      for (const auto& a : options.accuracy_metrics) pairs.emplace_back(s, a);
  } else {
    std::string s = options.size_metrics.empty() ? "memory" : options.size_metrics.front();
    std::string a =
        options.accuracy_metrics.empty() ? "token" : options.accuracy_metrics.front();
    for (const auto& m : options.size_metrics)
      if (m == "memory") s = m;
    for (const auto& m : options.accuracy_metrics)
      if (m == "token") a = m;
    pairs.emplace_back(s, a);
  }

  for (const auto& lang : grid.languages) {
    std::vector<MeasurementRecord> subset;
    for (const auto& r : records)
      if (r.language == lang) subset.push_back(r);
    for (const auto& [size_metric, accuracy_metric] : pairs) {
      std::vector<MetricPoint> points;
      for (const auto& r : subset)
        points.push_back(metric_point(r, size_metric, accuracy_metric));
      auto skyline = compute_skyline(points);
      auto svg = render_skyline_svg(points, skyline,
                                    lang + ": " + size_metric + " vs " +
                                        accuracy_metric + " accuracy");
      emit("skyline_" + lang + "_" + size_metric + "_" + accuracy_metric + ".svg", svg);
    }
  }

  for (const auto& accuracy_metric : options.accuracy_metrics) {
    std::vector<std::pair<std::string, std::map<std::string, int>>> counts;
    for (const auto& size_metric : options.size_metrics)
      counts.emplace_back(size_metric,
                          skyline_counts(records, size_metric, accuracy_metric));
    emit("skyline_counts_" + accuracy_metric + ".csv", render_counts_csv(counts));
    emit("skyline_counts_" + accuracy_metric + ".svg",
         render_counts_svg(counts, static_cast<int>(grid.languages.size()),
                           "languages with " + accuracy_metric +
                               "-accuracy skyline membership"));
  }

  std::set<std::string> hashes;
  for (const auto& r : records) hashes.insert(r.config_hash);
  nlohmann::json provenance = {
      {"generator", "tagmark"},
      {"version", std::string(kVersion)},
      {"config_hashes", std::vector<std::string>(hashes.begin(), hashes.end())},
      {"records", records.size()},
      {"languages", grid.languages},
      {"taggers", grid.taggers},
  };
  emit("provenance.json", provenance.dump(2) + "\n");
  return bundle;
}

}  // namespace tagmark
