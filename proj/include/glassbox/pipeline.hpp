// Copyright 2026 The Glassbox Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GLASSBOX_PIPELINE_HPP
#define GLASSBOX_PIPELINE_HPP

#include <string>

#include <json.hpp>

namespace glassbox {

// Pipeline commands. Each resolves its defaults, writes its artifacts plus a
// run_config.json snapshot into out_dir, and throws Validation/Data/Internal
// errors on failure. Outputs are a pure function of the resolved snapshot.
void cmd_synth(const nlohmann::json& config);
void cmd_ingest(const nlohmann::json& config);
void cmd_stats(const nlohmann::json& config);
void cmd_cluster(const nlohmann::json& config);
void cmd_train(const nlohmann::json& config);
void cmd_bench(const nlohmann::json& config);
void cmd_explain(const nlohmann::json& config);
void cmd_plot(const nlohmann::json& config);

// Dispatch by subcommand name; unknown names raise ValidationError.
void run_command(const std::string& command, const nlohmann::json& config);

}  // namespace glassbox

#endif  // GLASSBOX_PIPELINE_HPP
