#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tagmark/config.hpp"
#include "tagmark/corpus.hpp"
#include "tagmark/error.hpp"
#include "tagmark/tagger.hpp"
#include "tagmark/taggers/brill.hpp"
#include "tagmark/taggers/external.hpp"
#include "tagmark/taggers/hmm.hpp"
#include "tagmark/taggers/tnt.hpp"
#include "tagmark/taggers/unigram.hpp"

namespace tagmark {

/// Instantiates a tagger from its config entry. Built-ins train on the given
/// corpus; external taggers only wrap their command.
inline std::unique_ptr<Tagger> train_tagger(const TaggerSpec& spec,
                                            std::span<const Sentence> train,
                                            const std::string& language) {
  if (spec.kind == "unigram")
    return std::make_unique<UnigramModel>(UnigramModel::train(train, language));
  if (spec.kind == "hmm")
    return std::make_unique<HmmModel>(HmmModel::train(train, language, spec.hmm));
  if (spec.kind == "tnt")
    return std::make_unique<TnTModel>(TnTModel::train(train, language, spec.tnt));
  if (spec.kind == "brill")
    return std::make_unique<BrillModel>(BrillModel::train(train, language, spec.brill));
  if (spec.kind == "external")
    return std::make_unique<ExternalTagger>(spec.name, spec.command, language,
                                            spec.artifacts);
  throw TrainError("unknown tagger kind '" + spec.kind + "'");
}

/// Artifact files a built-in model directory may hold, in load priority order.
inline const std::vector<std::string>& known_model_files() {
  static const std::vector<std::string> files = {
      "unigram.model.txt", "hmm.model.txt",      "tnt.ngrams.txt",
      "tnt.lexicon.txt",   "tnt.suffixes.txt",   "brill.rules.txt",
      "brill.lexicon.txt"};
  return files;
}

inline std::vector<std::filesystem::path> model_artifacts(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& name : known_model_files()) {
    auto p = dir / name;
    if (std::filesystem::is_regular_file(p)) out.push_back(p);
  }
  return out;
}

/// Reconstructs a built-in tagger from its serialized artifacts, dispatching
/// on the file names found in the directory.
inline std::unique_ptr<Tagger> load_model_dir(const std::filesystem::path& dir) {
  if (std::filesystem::is_regular_file(dir / "unigram.model.txt"))
    return std::make_unique<UnigramModel>(UnigramModel::load(dir / "unigram.model.txt"));
  if (std::filesystem::is_regular_file(dir / "hmm.model.txt"))
    return std::make_unique<HmmModel>(HmmModel::load(dir / "hmm.model.txt"));
  if (std::filesystem::is_regular_file(dir / "tnt.ngrams.txt"))
    return std::make_unique<TnTModel>(TnTModel::load(dir));
  if (std::filesystem::is_regular_file(dir / "brill.rules.txt"))
    return std::make_unique<BrillModel>(BrillModel::load(dir));
  throw LoadError("no recognizable model artifacts in " + dir.string());
}

}  // namespace tagmark
