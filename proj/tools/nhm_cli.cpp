// Copyright 2026 The nhm Authors
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

// nhm: command-line front end. One scenario per invocation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "nhm/errors.hpp"
#include "nhm/io/config.hpp"
#include "nhm/io/runner.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

int execute(const std::string& command, const Options& o) {
  std::ifstream in(o.config);
  if (!in) {
    std::cerr << "nhm " << command << ": cannot open config '" << o.config << "'\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    const std::string text = o.seed ? nhm::io::with_seed(ss.str(), *o.seed) : ss.str();
    const nhm::io::ScenarioConfig config = nhm::io::parse_config(text);
    if (nhm::io::to_string(config.kind) != command) {
      std::cerr << "nhm " << command << ": config '" << o.config << "' has kind '"
                << nhm::io::to_string(config.kind) << "'\n";
      return 2;
    }
    const auto report = nhm::io::run(config, o.out, o.verbose ? &std::cerr : nullptr);
    std::cout << report.summary << '\n';
    return 0;
  } catch (const nhm::io::ConfigError& e) {
    std::cerr << "nhm " << command << ": " << o.config << ": " << e.what() << '\n';
    return 2;
  } catch (const nhm::Error& e) {
    std::cerr << "nhm " << command << ": " << o.config << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian measurement simulator"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  for (const char* name : {"evolve", "collapse", "degeneracy", "cases", "lindblad", "ensemble", "fixed-points"}) {
    auto* sub = app.add_subcommand(name, std::string("run a '") + name + "' scenario");
    sub->add_option("--config", o.config, "scenario YAML file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_flag("--verbose", o.verbose, "log written files and warnings to stderr");
  }
  CLI11_PARSE(app, argc, argv);
  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed") > 0) o.seed = seed;
  return execute(sub->get_name(), o);
}
