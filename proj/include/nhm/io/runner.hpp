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

// runner.hpp: executes one validated scenario and writes its artifacts.

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "nhm/io/config.hpp"

namespace nhm::io {

struct RunReport {
  std::string summary;  // one line, no trailing newline
  std::vector<std::filesystem::path> files;
};

// Creates out_dir if needed. Every file name starts with the output stem
// (config output.stem, else name, else kind). With `log` set, progress and
// diagnostics go there.
RunReport run(const ScenarioConfig& config, const std::filesystem::path& out_dir,
              std::ostream* log = nullptr);

}  // namespace nhm::io
