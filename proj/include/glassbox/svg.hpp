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

#ifndef GLASSBOX_SVG_HPP
#define GLASSBOX_SVG_HPP

#include <string>

#include <json.hpp>

#include "glassbox/csv.hpp"

namespace glassbox {

// Renders a plot product (its data CSV plus JSON metadata carrying
// "plot_kind") to a static SVG. A pure function of the two inputs, so
// renders are reproducible and golden-testable.
std::string render_svg(const CsvTable& data, const nlohmann::json& meta);

std::string render_svg_files(const std::string& csv_path, const std::string& json_path);

}  // namespace glassbox

#endif  // GLASSBOX_SVG_HPP
