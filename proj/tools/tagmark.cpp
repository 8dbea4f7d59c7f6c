// Command-line front end: train, evaluate, measure, and report on POS tagger
// size-accuracy benchmarks driven by a JSON config.

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tagmark/config.hpp"
#include "tagmark/harness.hpp"
#include "tagmark/manifest.hpp"
#include "tagmark/metrics.hpp"
#include "tagmark/report.hpp"
#include "tagmark/skyline.hpp"
#include "tagmark/taggers/registry.hpp"
#include "tagmark/wire.hpp"

namespace {

std::string self_exe(const char* argv0) {
  char buf[4096];
  ssize_t n = ::readlink("/proc/self/exe", buf, sizeof buf - 1);
  if (n > 0) {
    buf[n] = '\0';
    return buf;
  }
  return argv0;
}

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> languages;
  std::vector<std::string> taggers;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_file, "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--language", args.languages, "restrict to these language codes");
  cmd->add_option("--tagger", args.taggers, "restrict to these tagger names");
  cmd->add_option("--out", args.out_dir, "override the config's output directory");
}

tagmark::ExperimentConfig load(const CommonArgs& args) {
  auto config = tagmark::load_config(args.config_file);
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  return config;
}

bool selected(const std::vector<std::string>& filter, const std::string& value) {
  if (filter.empty()) return true;
  return std::find(filter.begin(), filter.end(), value) != filter.end();
}

int report_cells(const tagmark::RunResult& result) {
  for (const auto& key : result.ran) {
    const auto& cell = result.manifest.cells.at(key);
    std::cout << key << ": " << tagmark::cell_status_name(cell.status);
    if (!cell.cause.empty()) std::cout << " (" << cell.cause << ")";
    std::cout << '\n';
  }
  std::cout << result.ran.size() << " cell(s) run, " << result.failed << " failed\n";
  return result.failed > 0 ? 2 : 0;
}

int run_pipeline(const CommonArgs& args, const char* argv0, bool train_only) {
  auto config = load(args);
  tagmark::RunOptions options;
  options.tag_command = {self_exe(argv0), "tag"};
  options.languages = args.languages;
  options.taggers = args.taggers;
  options.train_only = train_only;
  return report_cells(tagmark::run_experiment(config, options));
}

int evaluate_cells(const CommonArgs& args) {
  auto config = load(args);
  auto treebanks = tagmark::load_treebanks(config);
  long failed = 0;
  for (const auto& spec : config.taggers) {
    if (!selected(args.taggers, spec.name)) continue;
    for (const auto& lang : config.languages) {
      if (!selected(args.languages, lang.code)) continue;
      const auto& tb = treebanks.at(lang.code);
      try {
        std::unique_ptr<tagmark::Tagger> tagger;
        if (spec.kind == "external")
          tagger = tagmark::train_tagger(spec, tb.train, lang.code);
        else
          tagger = tagmark::load_model_dir(config.out_dir / spec.name / lang.code);
        auto result = tagmark::accuracy(tagmark::detail::tags_of(tb.test),
                                        tagger->tag_corpus(tb.test));
        nlohmann::json line = {{"tagger", spec.name},
                               {"language", lang.code},
                               {"token_accuracy", result.token_accuracy},
                               {"sentence_accuracy", result.sentence_accuracy},
                               {"token_count", result.token_count},
                               {"sentence_count", result.sentence_count}};
        std::cout << line.dump() << '\n';
      } catch (const std::exception& e) {
        std::cerr << spec.name << "/" << lang.code << ": " << e.what() << '\n';
        ++failed;
      }
    }
  }
  return failed > 0 ? 2 : 0;
}

int measure_cells(const CommonArgs& args, const char* argv0) {
  auto config = load(args);
  std::map<std::string, tagmark::Treebank> loaded;
  auto wire_file = [&](const std::string& code) {
    auto dir = config.out_dir / "data" / code;
    auto file = dir / "test.wire";
    if (!std::filesystem::is_regular_file(file)) {
      for (const auto& lang : config.languages)
        if (lang.code == code && !loaded.count(code))
          loaded[code] = tagmark::load_treebank(lang.treebank, code);
      std::filesystem::create_directories(dir);
      std::ofstream out(file, std::ios::binary | std::ios::trunc);
      if (!out) throw tagmark::Error("cannot write " + file.string());
      tagmark::wire_write(out, tagmark::detail::forms_of(loaded.at(code).test));
    }
    return file;
  };

  long failed = 0;
  for (const auto& spec : config.taggers) {
    if (!selected(args.taggers, spec.name)) continue;
    for (const auto& lang : config.languages) {
      if (!selected(args.languages, lang.code)) continue;
      auto cell_dir = config.out_dir / spec.name / lang.code;
      try {
        std::vector<std::filesystem::path> artifacts;
        std::vector<std::string> command;
        if (spec.kind == "external") {
          artifacts = spec.artifacts;
          command = spec.command;
        } else {
          artifacts = tagmark::model_artifacts(cell_dir);
          if (artifacts.empty())
            throw tagmark::Error("no trained model in " + cell_dir.string() +
                                 "; run train first");
          command = {self_exe(argv0), "tag", "--model", cell_dir.string()};
        }
        tagmark::MemoryOptions memopts;
        memopts.poll_hz = config.poll_hz;
        memopts.stdin_file = wire_file(lang.code);
        tagmark::MemoryUsage usage;
        {
          tagmark::detail::FileLock lock(tagmark::detail::memory_lock_file());
          usage = tagmark::measure_memory(command, memopts);
        }
        nlohmann::json line = {
            {"tagger", spec.name},
            {"language", lang.code},
            {"memory_avg_kb", usage.avg_kb},
            {"memory_peak_kb", usage.peak_kb},
            {"memory_sample_count", usage.sample_count},
            {"model_kb", artifacts.empty() ? 0.0 : tagmark::model_size_kb(artifacts)},
            {"model_compressed_kb",
             artifacts.empty()
                 ? 0.0
                 : tagmark::compressed_size_kb(artifacts, config.compression_preset)}};
        std::cout << line.dump() << '\n';
      } catch (const std::exception& e) {
        std::cerr << spec.name << "/" << lang.code << ": " << e.what() << '\n';
        ++failed;
      }
    }
  }
  return failed > 0 ? 2 : 0;
}

std::filesystem::path records_dir(const CommonArgs& args) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (!args.config_file.empty()) return tagmark::load_config(args.config_file).out_dir;
  throw tagmark::Error("pass --out or --config to locate the records");
}

int print_skyline(const CommonArgs& args, const std::string& size_metric,
                  const std::string& accuracy_metric) {
  auto records = tagmark::load_records(records_dir(args));
  std::set<std::string> languages;
  for (const auto& r : records) languages.insert(r.language);

  std::cout << "language,tagger,size_metric,accuracy_metric,size_kb,accuracy,on_skyline\r\n";
  for (const auto& lang : languages) {
    std::vector<tagmark::MetricPoint> points;
    for (const auto& r : records)
      if (r.language == lang)
        points.push_back(tagmark::metric_point(r, size_metric, accuracy_metric));
    auto skyline = tagmark::compute_skyline(points);
    std::sort(points.begin(), points.end(),
              [](const tagmark::MetricPoint& a, const tagmark::MetricPoint& b) {
                return a.tagger < b.tagger;
              });
    for (const auto& p : points) {
      bool optimal = std::find(skyline.points.begin(), skyline.points.end(), p) !=
                     skyline.points.end();
      std::cout << lang << ',' << p.tagger << ',' << size_metric << ','
                << accuracy_metric << ',' << tagmark::format_exact(p.size_value) << ','
                << tagmark::format_exact(p.accuracy_value) << ','
                << (optimal ? "true" : "false") << "\r\n";
    }
  }
  return 0;
}

int emit_report(const CommonArgs& args, bool all_pairs) {
  auto dir = records_dir(args);
  auto records = tagmark::load_records(dir);
  tagmark::ReportOptions options;
  options.all_pairs = all_pairs;
  if (!args.config_file.empty()) {
    auto config = tagmark::load_config(args.config_file);
    options.size_metrics = config.metrics.size;
    options.accuracy_metrics = config.metrics.accuracy;
  }
  auto bundle = tagmark::emit_reports(records, dir / "report", options);
  for (const auto& file : bundle.files) std::cout << file.string() << '\n';
  return 0;
}

int tag_stream(const std::string& model_dir, const std::string& input_file,
               const std::string& output_file) {
  auto tagger = tagmark::load_model_dir(model_dir);

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (!input_file.empty()) {
    file_in.open(input_file, std::ios::binary);
    if (!file_in) throw tagmark::Error("cannot open " + input_file);
    in = &file_in;
  }
  auto sentences = tagmark::wire_read(*in);

  std::vector<std::vector<std::string>> tags;
  tags.reserve(sentences.size());
  for (const auto& forms : sentences) tags.push_back(tagger->tag(forms));

  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!output_file.empty()) {
    file_out.open(output_file, std::ios::binary | std::ios::trunc);
    if (!file_out) throw tagmark::Error("cannot write " + output_file);
    out = &file_out;
  }
  tagmark::wire_write(*out, tags);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"size-accuracy benchmarking for part-of-speech taggers"};
  app.require_subcommand(1);

  CommonArgs run_args, train_args, eval_args, measure_args, skyline_args, report_args;

  auto* run = app.add_subcommand("run", "train, evaluate, and measure every cell");
  add_common(run, run_args);

  auto* train = app.add_subcommand("train", "train and serialize models only");
  add_common(train, train_args);

  auto* evaluate =
      app.add_subcommand("evaluate", "print test-split accuracy of trained models");
  add_common(evaluate, eval_args);

  auto* measure = app.add_subcommand("measure", "print size metrics of trained models");
  add_common(measure, measure_args);

  std::string size_metric = "memory", accuracy_metric = "token";
  auto* skyline = app.add_subcommand("skyline", "print skyline membership per language");
  add_common(skyline, skyline_args, false);
  skyline->add_option("--size-metric", size_metric, "memory, model, or compressed");
  skyline->add_option("--accuracy-metric", accuracy_metric, "token or sentence");

  bool all_pairs = false;
  auto* report = app.add_subcommand("report", "emit tables, plots, and provenance");
  add_common(report, report_args, false);
  report->add_flag("--all-pairs", all_pairs, "plot every selected metric pair");

  std::string model_dir, input_file, output_file;
  auto* tag = app.add_subcommand("tag", "tag wire-format sentences with a saved model");
  tag->add_option("--model", model_dir, "model directory")->required();
  tag->add_option("--input", input_file, "wire-format input (default stdin)");
  tag->add_option("--out", output_file, "wire-format output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return run_pipeline(run_args, argv[0], false);
    if (train->parsed()) return run_pipeline(train_args, argv[0], true);
    if (evaluate->parsed()) return evaluate_cells(eval_args);
    if (measure->parsed()) return measure_cells(measure_args, argv[0]);
    if (skyline->parsed()) return print_skyline(skyline_args, size_metric, accuracy_metric);
    if (report->parsed()) return emit_report(report_args, all_pairs);
    if (tag->parsed()) return tag_stream(model_dir, input_file, output_file);
  } catch (const tagmark::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
