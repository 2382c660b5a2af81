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

#ifndef GLASSBOX_DESIGN_HPP
#define GLASSBOX_DESIGN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"

namespace glassbox {

// One-hot expansion used by the linear and KNN model families (tree models
// keep integer codes). Numeric columns pass through; each categorical level
// becomes an indicator; a -1 cell leaves all of its indicators at zero.
class Design {
 public:
  static Design build(const Frame& frame);

  // Expands a single raw frame row into the design space.
  void expand_row(std::span<const double> row, double* out) const;

  int cols() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& matrix() const { return matrix_; }
  int64_t rows() const { return rows_; }
  double at(int64_t r, int c) const { return matrix_[r * cols() + c]; }

 private:
  struct Source {
    int feature;  // frame column
    int level;    // -1 for numeric passthrough
  };
  std::vector<Source> sources_;
  std::vector<std::string> names_;
  std::vector<double> matrix_;
  int64_t rows_ = 0;
  int frame_cols_ = 0;
};

// Seeded shuffling split; returns row indexes.
struct Split {
  std::vector<int64_t> train;
  std::vector<int64_t> test;
};

Split train_test_split(int64_t rows, double test_fraction, uint64_t seed);

std::vector<std::vector<int64_t>> kfold_indices(int64_t rows, int folds, uint64_t seed);

Frame subset_frame(const Frame& frame, const std::vector<int64_t>& idx);

}  // namespace glassbox

#endif  // GLASSBOX_DESIGN_HPP
