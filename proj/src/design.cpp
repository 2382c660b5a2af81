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

#include "glassbox/design.hpp"

#include <numeric>

#include "glassbox/rng.hpp"

namespace glassbox {

Design Design::build(const Frame& frame) {
  Design d;
  d.frame_cols_ = frame.cols();
  for (int c = 0; c < frame.cols(); ++c) {
    const auto& f = frame.schema[c];
    if (f.kind == FeatureKind::kNumeric) {
      d.sources_.push_back({c, -1});
      d.names_.push_back(f.name);
    } else {
      for (size_t l = 0; l < f.levels.size(); ++l) {
        d.sources_.push_back({c, static_cast<int>(l)});
        d.names_.push_back(f.name + "=" + f.levels[l]);
      }
    }
  }
  d.rows_ = frame.rows();
  d.matrix_.resize(static_cast<size_t>(d.rows_) * d.cols());
  for (int64_t r = 0; r < d.rows_; ++r) {
    d.expand_row(frame.row(r), d.matrix_.data() + r * d.cols());
  }
  return d;
}

void Design::expand_row(std::span<const double> row, double* out) const {
  for (size_t j = 0; j < sources_.size(); ++j) {
    const auto& s = sources_[j];
    if (s.level < 0) {
      out[j] = row[s.feature];
    } else {
      out[j] = row[s.feature] == static_cast<double>(s.level) ? 1.0 : 0.0;
    }
  }
}

Split train_test_split(int64_t rows, double test_fraction, uint64_t seed) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0) {
    throw ValidationError("test fraction must lie in (0, 1)");
  }
  std::vector<int64_t> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed ^ 0x5e37a5u);
  rng.shuffle(idx);
  int64_t ntest = std::max<int64_t>(1, static_cast<int64_t>(rows * test_fraction));
  if (ntest >= rows) ntest = rows - 1;
  Split s;
  s.test.assign(idx.begin(), idx.begin() + ntest);
  s.train.assign(idx.begin() + ntest, idx.end());
  std::sort(s.test.begin(), s.test.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

std::vector<std::vector<int64_t>> kfold_indices(int64_t rows, int folds, uint64_t seed) {
  if (folds < 2 || folds > rows) throw ValidationError("bad fold count");
  std::vector<int64_t> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed ^ 0xf01d5u);
  rng.shuffle(idx);
  std::vector<std::vector<int64_t>> out(folds);
  for (int64_t i = 0; i < rows; ++i) out[i % folds].push_back(idx[i]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

Frame subset_frame(const Frame& frame, const std::vector<int64_t>& idx) {
  Frame out;
  out.schema = frame.schema;
  out.target_name = frame.target_name;
  out.classification = frame.classification;
  out.num_classes = frame.num_classes;
  out.row_ids.reserve(idx.size());
  out.data.reserve(idx.size() * frame.cols());
  out.target.reserve(idx.size());
  for (int64_t r : idx) {
    out.row_ids.push_back(frame.row_ids[r]);
    auto row = frame.row(r);
    out.data.insert(out.data.end(), row.begin(), row.end());
    out.target.push_back(frame.target[r]);
  }
  return out;
}

}  // namespace glassbox
