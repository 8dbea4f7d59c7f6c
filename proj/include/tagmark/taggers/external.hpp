#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "tagmark/error.hpp"
#include "tagmark/process.hpp"
#include "tagmark/tagger.hpp"
#include "tagmark/wire.hpp"

namespace tagmark {

/// Adapter around any executable honoring the wire protocol. Each call
/// spawns one child, streams the whole batch through temp files, and checks
/// the reply shape sentence by sentence.
class ExternalTagger final : public Tagger {
public:
  ExternalTagger(std::string name, std::vector<std::string> command, std::string language,
                 std::vector<std::filesystem::path> artifacts = {})
      : name_(std::move(name)),
        command_(std::move(command)),
        language_(std::move(language)),
        artifacts_(std::move(artifacts)) {
    if (command_.empty()) throw Error("external tagger '" + name_ + "': empty command");
  }

  std::string_view kind() const override { return name_; }
  const std::string& language() const override { return language_; }
  const std::vector<std::string>& command() const { return command_; }

  std::vector<std::string> tag(const std::vector<std::string>& forms) const override {
    return run_wire({&forms, 1}).front();
  }

  std::vector<std::vector<std::string>> tag_corpus(
      const std::vector<Sentence>& sentences) const override {
    std::vector<std::vector<std::string>> forms;
    forms.reserve(sentences.size());
    for (const auto& s : sentences) {
      std::vector<std::string> f;
      f.reserve(s.tokens.size());
      for (const auto& t : s.tokens) f.push_back(t.form);
      forms.push_back(std::move(f));
    }
    return run_wire(forms);
  }

  /// Externally managed artifacts; nothing is written.
  std::vector<std::filesystem::path> save(const std::filesystem::path&) const override {
    return artifacts_;
  }

private:
  std::vector<std::vector<std::string>> run_wire(
      std::span<const std::vector<std::string>> sentences) const {
    auto dir = make_temp_dir();
    auto input = dir / "input.txt";
    auto output = dir / "output.txt";
    auto errlog = dir / "stderr.txt";
    {
      std::ofstream out(input, std::ios::binary);
      wire_write(out, sentences);
      if (!out) throw Error("cannot write " + input.string());
    }

    std::vector<std::vector<std::string>> replies;
    int exit_code = 0;
    {
      ChildProcess child(command_, {.in = input, .out = output, .err = errlog});
      exit_code = child.wait();
    }
    try {
      if (exit_code != 0) {
        std::string stderr_tail = read_file_tail(errlog);
        throw ProtocolError("tagger '" + name_ + "' exited with status " +
                                std::to_string(exit_code) +
                                (stderr_tail.empty() ? "" : "; stderr: " + stderr_tail),
                            sentences.size());
      }
      std::ifstream in(output, std::ios::binary);
      replies = wire_read(in);
    } catch (...) {
      cleanup(dir);
      throw;
    }
    cleanup(dir);

    if (replies.size() != sentences.size())
      throw ProtocolError("expected " + std::to_string(sentences.size()) +
                              " sentences, received " + std::to_string(replies.size()),
                          replies.size());
    for (std::size_t i = 0; i < replies.size(); ++i)
      if (replies[i].size() != sentences[i].size())
        throw ProtocolError("expected " + std::to_string(sentences[i].size()) +
                                " tags, received " + std::to_string(replies[i].size()),
                            i);
    return replies;
  }

  static std::filesystem::path make_temp_dir() {
    static std::atomic<unsigned> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("tagmark-wire-" + std::to_string(getpid()) + "-" +
                std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir);
    return dir;
  }

  static void cleanup(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }

  std::string name_;
  std::vector<std::string> command_;
  std::string language_;
  std::vector<std::filesystem::path> artifacts_;
};

}  // namespace tagmark
