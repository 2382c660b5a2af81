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

#ifndef GLASSBOX_METRICS_HPP
#define GLASSBOX_METRICS_HPP

#include <span>
#include <vector>

#include "glassbox/common.hpp"

namespace glassbox {

double rmse(std::span<const double> pred, std::span<const double> actual);

enum class Averaging { kMacro, kMicro };

// Class precision averaged over classes (macro default). A class absent from
// the predictions contributes 0 and is flagged.
struct PrecisionResult {
  double value = 0.0;
  std::vector<int> classes_never_predicted;
};

PrecisionResult precision(std::span<const double> pred, std::span<const double> actual,
                          int num_classes, Averaging averaging = Averaging::kMacro);

}  // namespace glassbox

#endif  // GLASSBOX_METRICS_HPP
