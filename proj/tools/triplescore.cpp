// Copyright 2026 The triplescore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: extract, train, predict, evaluate, cv.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "triplescore/triplescore.hpp"

namespace {

// Flag name, config key, help text.
struct FlagSpec {
  const char *flag;
  const char *key;
  const char *help;
};

constexpr FlagSpec kFlags[] = {
    {"--embeddings", "embeddings", "Embedding file (textual word-vector format)"},
    {"--corpus", "corpus", "Corpus file (one JSON record per line)"},
    {"--universe", "universe", "Object universe file (one object per line)"},
    {"--train", "train", "Training triples (entity<TAB>object<TAB>score)"},
    {"--test", "test", "Test triples (score column optional)"},
    {"--artifact", "artifact", "Model artifact JSON path"},
    {"--output,-o", "output", "Output path (defaults to stdout)"},
    {"--predictions", "predictions", "Scored prediction file for evaluate"},
    {"--truth", "truth", "Ground-truth file for evaluate"},
    {"--relation", "relation", "profession | nationality"},
    {"--model", "model", "ordinal | multinomial"},
    {"--lambda", "lambda", "L2 penalty on feature weights"},
    {"--max-iters", "max_iters", "Optimizer iteration cap"},
    {"--tolerance", "tolerance", "Gradient infinity-norm tolerance"},
    {"--prediction-rule", "prediction_rule", "argmax | expected-rounded"},
    {"--standardize", "standardize", "Z-score features before fitting (true|false)"},
    {"--timestamp", "timestamp", "Write created_at into artifacts (true|false)"},
    {"--ops-denominator", "ops_denominator", "embedded | all"},
    {"--workers", "workers", "Worker threads for extraction and folds"},
    {"--delta", "delta", "Accuracy tolerance"},
    {"--tau", "tau", "tau-b | tau-a"},
    {"--singletons", "singletons", "Single-triple entity groups: one | skip"},
    {"--folds", "folds", "Cross-validation folds"},
    {"--seed", "seed", "Cross-validation shuffle seed"},
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Relevance scores for knowledge-base triples"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print version and artifact format");

  std::string config_path;
  std::vector<std::string> values(std::size(kFlags));
  std::vector<std::pair<CLI::App *, std::vector<CLI::Option *>>> commands;
  const std::pair<const char *, const char *> kCommands[] = {
      {"extract", "Write the feature matrix as TSV"},
      {"train", "Fit a relation-specific model and write the artifact"},
      {"predict", "Score test triples with a trained artifact"},
      {"evaluate", "Compare a prediction file with a truth file"},
      {"cv", "Cross-validated comparison of First, multinomial and ordinal"},
  };
  for (const auto &[name, help] : kCommands) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("--config,-c", config_path, "Config file (key = value)");
    std::vector<CLI::Option *> opts;
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      opts.push_back(sub->add_option(kFlags[i].flag, values[i], kFlags[i].help));
    }
    commands.emplace_back(sub, std::move(opts));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : triplescore::kExitInputError;
  }

  if (show_version) {
    std::cout << "triplescore 1.0.0 (artifact format "
              << triplescore::kArtifactVersion << ")\n";
    return 0;
  }

  for (const auto &[sub, opts] : commands) {
    if (!sub->parsed()) continue;
    triplescore::RunConfig cfg;
    try {
      if (!config_path.empty()) triplescore::load_config(config_path, cfg);
      for (std::size_t i = 0; i < opts.size(); ++i) {
        if (opts[i]->count() > 0) cfg.set(kFlags[i].key, values[i]);
      }
    } catch (const triplescore::InputError &e) {
      std::cerr << "error: " << e.what() << '\n';
      return triplescore::kExitInputError;
    }
    return triplescore::run_command(sub->get_name(), cfg, std::cout,
                                    std::cerr);
  }
  std::cerr << app.help();
  return triplescore::kExitInputError;
}
