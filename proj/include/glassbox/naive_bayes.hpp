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

#ifndef GLASSBOX_NAIVE_BAYES_HPP
#define GLASSBOX_NAIVE_BAYES_HPP

#include <vector>

#include "glassbox/frame.hpp"

namespace glassbox {

// Mixed naive Bayes: Laplace-smoothed level frequencies for categorical
// features, Gaussian per-class likelihoods for numeric ones. An unseen level
// at prediction falls back to the smoothing floor instead of failing.
struct NBModel {
  struct CatFeature {
    std::vector<std::vector<double>> log_prob;  // class x (levels + 1), last is unseen/missing
  };
  struct NumFeature {
    std::vector<double> mean;
    std::vector<double> var;  // floored away from zero
  };

  std::vector<double> log_priors;
  std::vector<int> feature_cols;  // frame column per model feature
  std::vector<int> cat_slot;      // index into cats, -1 for numeric
  std::vector<int> num_slot;      // index into nums, -1 for categorical
  std::vector<CatFeature> cats;
  std::vector<NumFeature> nums;
  double alpha = 1.0;
  int num_classes = 0;
  uint64_t schema_hash = 0;

  std::vector<double> predict_proba(std::span<const double> raw_row) const;
  double predict(std::span<const double> raw_row) const;  // argmax class
  std::vector<double> predict_frame(const Frame& frame) const;
};

NBModel fit_nb(const Frame& frame, double alpha = 1.0);

}  // namespace glassbox

#endif  // GLASSBOX_NAIVE_BAYES_HPP
