/**
 * Copyright (c) 2026 the epint authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "epint/pipeline.hpp"

namespace {

int run_stage(const std::string& stage_name, const std::string& config_path,
              const std::string& seed_override, const std::string& out_override) {
  epint::PipelineConfig cfg = epint::load_pipeline_config(config_path);
  if (!seed_override.empty()) cfg.seed = std::stoull(seed_override);
  if (!out_override.empty()) cfg.out_dir = out_override;
  epint::run_pipeline(cfg, epint::parse_stage(stage_name));
  std::cout << "stage '" << stage_name << "' complete; artifacts in " << cfg.out_dir
            << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epint: outbreak signal detection and personalized message ranking "
               "over microblog corpora"};
  app.require_subcommand(1);

  std::string config_path, seed_override, out_override;

  const char* stage_help[][2] = {
      {"detect", "aggregate daily counts and run the aberration detectors"},
      {"expand", "fit topics, mine co-occurring hashtags, build expanded queries"},
      {"rank", "extract features, join judgments, train the ranking models"},
      {"eval", "cross-validated ranking metrics for all feature masks"},
      {"all", "run every stage in order"},
  };
  for (const auto& [name, help] : stage_help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "pipeline configuration file")->required();
    sub->add_option("--seed", seed_override, "override the configured seed");
    sub->add_option("--out", out_override, "override the configured output directory");
  }

  auto* fixture = app.add_subcommand("gen-fixture",
                                     "write a synthetic outbreak fixture and matching config");
  std::string fixture_dir = "fixture";
  epint::SyntheticSpec spec;
  fixture->add_option("--out", fixture_dir, "output directory")->required();
  fixture->add_option("--seed", spec.seed, "generator seed");
  fixture->add_option("--days", spec.days, "corpus length in days");
  fixture->add_option("--baseline-rate", spec.baseline_rate,
                      "mean condition-mentioning tweets per background day");
  fixture->add_option("--spike-day", spec.spike_day, "1-based outbreak start day");
  fixture->add_option("--spike-height", spec.spike_height, "tweets on the spike day");
  fixture->add_option("--plant-rate", spec.relevance_plant_rate,
                      "fraction of outbreak tweets made relevant");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fixture->parsed()) {
      epint::write_fixture(fixture_dir, spec);
      std::cout << "fixture written to " << fixture_dir << std::endl;
      return 0;
    }
    for (const auto& [name, help] : stage_help)
      if (app.get_subcommand(name)->parsed())
        return run_stage(name, config_path, seed_override, out_override);
  } catch (const epint::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
