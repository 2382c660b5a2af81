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

#ifndef GLASSBOX_KNN_HPP
#define GLASSBOX_KNN_HPP

#include <cstdint>
#include <vector>

#include "glassbox/design.hpp"
#include "glassbox/frame.hpp"

namespace glassbox {

enum class KnnTask { kRegression, kClassification };
enum class KnnWeighting { kUniform, kInverseDistance };

// Brute-force K nearest neighbors over one-hot expanded, z-scaled features.
// Distance ties at the k boundary resolve by stable row order. A zero
// distance under inverse weighting returns the exact matches' target.
class KnnModel {
 public:
  KnnModel(const Frame& train, int k, KnnTask task,
           KnnWeighting weighting = KnnWeighting::kUniform);

  double predict(std::span<const double> raw_row) const;
  std::vector<double> predict_frame(const Frame& frame) const;

  int k() const { return k_; }
  KnnTask task() const { return task_; }
  KnnWeighting weighting() const { return weighting_; }
  int64_t train_rows() const { return targets_.size(); }
  uint64_t schema_hash() const { return schema_hash_; }

  // Neighbor row indexes in ranked order; exposed for the sort-oracle tests.
  std::vector<int64_t> neighbors(std::span<const double> raw_row) const;

 private:
  std::vector<double> scaled_row(std::span<const double> raw_row) const;

  Design design_;
  std::vector<double> matrix_;  // scaled train matrix
  std::vector<double> targets_;
  std::vector<double> mean_, inv_scale_;
  int k_;
  KnnTask task_;
  KnnWeighting weighting_;
  int num_classes_ = 0;
  uint64_t schema_hash_ = 0;
};

}  // namespace glassbox

#endif  // GLASSBOX_KNN_HPP
