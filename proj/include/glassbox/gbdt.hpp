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

#ifndef GLASSBOX_GBDT_HPP
#define GLASSBOX_GBDT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"

namespace glassbox {

enum class Objective { kSquaredError, kSoftmax };

struct TrainParams {
  int num_rounds = 200;
  double learning_rate = 0.1;
  int max_leaves = 31;
  double min_child_weight = 1.0;
  int max_bins = 255;
  double feature_fraction = 1.0;
  double bagging_fraction = 1.0;
  uint64_t seed = 0;
  double l2 = 1.0;

  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  bool categorical = false;
  double threshold = 0.0;        // numeric: x <= threshold goes left
  std::vector<int> left_levels;  // categorical: sorted level codes going left
  bool default_left = false;     // routing for the missing code
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output before the learning rate
  double cover = 0.0;  // sum of training hessians routed through the node

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  int route(std::span<const double> row, std::span<const double> missing_codes) const;
  double predict(std::span<const double> row, std::span<const double> missing_codes) const;
  int max_depth() const;
};

// Per-feature binning derived from training quantiles. Numeric bin b >= 1
// covers (edge[b-2], edge[b-1]]; bin 0 is the missing code. Categorical bins
// are level + 1.
struct FeatureBins {
  bool categorical = false;
  std::vector<double> upper_edges;
  int num_levels = 0;

  int bin_count() const {
    return 1 + (categorical ? num_levels : static_cast<int>(upper_edges.size()));
  }
  int bin_for(double value, double missing_code) const;
};

struct BinnedFrame {
  int64_t rows = 0;
  std::vector<FeatureBins> features;
  std::vector<uint16_t> codes;  // feature-major: codes[f * rows + r]

  uint16_t code(int f, int64_t r) const { return codes[static_cast<size_t>(f) * rows + r]; }
};

BinnedFrame bin_features(const Frame& frame, int max_bins);

// Boosted tree ensemble in the LightGBM style: histogram bins, leaf-wise
// growth, second-order gains, learned default directions, gradient-sorted
// categorical subset splits. Softmax models hold K trees per round
// (round-major) and explain/predict in margin (log-odds) space.
class Ensemble {
 public:
  Objective objective = Objective::kSquaredError;
  int num_class = 1;
  std::vector<double> base_score;
  double learning_rate = 0.1;
  std::vector<Tree> trees;
  TrainParams params;
  uint64_t schema_hash = 0;
  std::vector<FeatureDesc> schema;
  std::vector<double> missing_codes;
  std::vector<FeatureBins> bins;
  std::vector<double> train_loss;  // per-round loss on the training set
  std::string target_name = "target";
  std::string target_transform = "identity";  // margin space: identity|log1p|log-odds

  int num_features() const { return static_cast<int>(schema.size()); }
  int num_outputs() const { return num_class; }

  double margin(std::span<const double> row, int k = 0) const;
  std::vector<double> margins(std::span<const double> row) const;
  double predict_value(std::span<const double> row) const;        // regression
  std::vector<double> predict_proba(std::span<const double> row) const;  // softmax

  // Throws ValidationError naming the first offending feature (and both
  // hashes) when the frame does not match the training schema.
  void check_frame(const Frame& frame) const;

  std::string to_json() const;
  static Ensemble from_json(const std::string& text);
  void save(const std::string& path) const;
  static Ensemble load(const std::string& path);
};

Ensemble fit_gbdt(const Frame& frame, const TrainParams& params);

}  // namespace glassbox

#endif  // GLASSBOX_GBDT_HPP
