#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tagmark/error.hpp"

namespace tagmark {

enum class CellStatus { pending, trained, evaluated, failed };

inline std::string_view cell_status_name(CellStatus status) {
  switch (status) {
    case CellStatus::pending: return "pending";
    case CellStatus::trained: return "trained";
    case CellStatus::evaluated: return "evaluated";
    case CellStatus::failed: return "failed";
  }
  return "pending";
}

inline CellStatus cell_status_from_name(std::string_view name) {
  if (name == "pending") return CellStatus::pending;
  if (name == "trained") return CellStatus::trained;
  if (name == "evaluated") return CellStatus::evaluated;
  if (name == "failed") return CellStatus::failed;
  throw Error("unknown cell status '" + std::string(name) + "'");
}

struct CellState {
  CellStatus status = CellStatus::pending;
  std::string cause;                    // set when failed
  std::vector<std::string> artifacts;   // paths relative to the cell directory

  bool operator==(const CellState&) const = default;
};

/// Progress ledger of one experiment run. A cell is keyed "tagger/language";
/// its metrics record exists on disk iff the status here says evaluated.
struct RunManifest {
  std::string config_hash;
  std::map<std::string, CellState> cells;

  static std::string cell_key(const std::string& tagger, const std::string& language) {
    return tagger + "/" + language;
  }

  bool all_evaluated() const {
    for (const auto& [key, cell] : cells)
      if (cell.status != CellStatus::evaluated) return false;
    return !cells.empty();
  }

  long failed_count() const {
    long n = 0;
    for (const auto& [key, cell] : cells)
      if (cell.status == CellStatus::failed) ++n;
    return n;
  }

  bool operator==(const RunManifest&) const = default;
};

inline nlohmann::json to_json(const RunManifest& manifest) {
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [key, cell] : manifest.cells) {
    nlohmann::json c = {{"status", std::string(cell_status_name(cell.status))},
                        {"artifacts", cell.artifacts}};
    if (!cell.cause.empty()) c["cause"] = cell.cause;
    cells[key] = std::move(c);
  }
  return {{"config_hash", manifest.config_hash}, {"cells", std::move(cells)}};
}

inline RunManifest manifest_from_json(const nlohmann::json& doc) {
  try {
    RunManifest manifest;
    manifest.config_hash = doc.at("config_hash").get<std::string>();
    for (const auto& [key, c] : doc.at("cells").items()) {
      CellState cell;
      cell.status = cell_status_from_name(c.at("status").get<std::string>());
      if (c.contains("cause")) cell.cause = c.at("cause").get<std::string>();
      for (const auto& a : c.at("artifacts"))
        cell.artifacts.push_back(a.get<std::string>());
      manifest.cells[key] = std::move(cell);
    }
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
}

/// Writes the manifest atomically: full temp file first, then rename.
inline void save_manifest(const RunManifest& manifest, const std::filesystem::path& file) {
  auto temp = file;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + temp.string());
    out << to_json(manifest).dump(2) << '\n';
    if (!out.flush()) throw Error("cannot write " + temp.string());
  }
  std::filesystem::rename(temp, file);
}

inline RunManifest load_manifest(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open " + file.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(file.string() + ": " + e.what());
  }
  return manifest_from_json(doc);
}

}  // namespace tagmark
