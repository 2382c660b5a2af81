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

#include "glassbox/metrics.hpp"

#include <cmath>

namespace glassbox {

double rmse(std::span<const double> pred, std::span<const double> actual) {
  if (pred.empty() || pred.size() != actual.size()) {
    throw ValidationError("rmse: inputs must be nonempty and equal-length");
  }
  double acc = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    double e = pred[i] - actual[i];
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

PrecisionResult precision(std::span<const double> pred, std::span<const double> actual,
                          int num_classes, Averaging averaging) {
  if (pred.empty() || pred.size() != actual.size()) {
    throw ValidationError("precision: inputs must be nonempty and equal-length");
  }
  if (num_classes < 2) throw ValidationError("precision: need at least 2 classes");

  std::vector<int64_t> tp(num_classes, 0), fp(num_classes, 0);
  for (size_t i = 0; i < pred.size(); ++i) {
    int p = static_cast<int>(pred[i]);
    int a = static_cast<int>(actual[i]);
    if (p < 0 || p >= num_classes || a < 0 || a >= num_classes) {
      throw ValidationError("precision: class index out of range");
    }
    if (p == a) {
      ++tp[p];
    } else {
      ++fp[p];
    }
  }

  PrecisionResult out;
  if (averaging == Averaging::kMicro) {
    int64_t t = 0;
    for (int k = 0; k < num_classes; ++k) t += tp[k];
    out.value = static_cast<double>(t) / static_cast<double>(pred.size());
    for (int k = 0; k < num_classes; ++k) {
      if (tp[k] + fp[k] == 0) out.classes_never_predicted.push_back(k);
    }
    return out;
  }

  double acc = 0.0;
  for (int k = 0; k < num_classes; ++k) {
    int64_t denom = tp[k] + fp[k];
    if (denom == 0) {
      out.classes_never_predicted.push_back(k);
      continue;  // contributes 0
    }
    acc += static_cast<double>(tp[k]) / static_cast<double>(denom);
  }
  out.value = acc / static_cast<double>(num_classes);
  return out;
}

}  // namespace glassbox
