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

#include "glassbox/knn.hpp"

#include <algorithm>
#include <cmath>

#include "glassbox/common.hpp"

namespace glassbox {

KnnModel::KnnModel(const Frame& train, int k, KnnTask task, KnnWeighting weighting)
    : design_(Design::build(train)), k_(k), task_(task), weighting_(weighting) {
  if (k < 1 || k > train.rows()) {
    throw ValidationError("knn: k must lie in [1, train rows]");
  }
  if (task == KnnTask::kClassification && !train.classification) {
    throw ValidationError("knn: classification task needs a classification frame");
  }
  schema_hash_ = train.schema_hash();
  num_classes_ = train.num_classes;
  targets_ = train.target;

  const int p = design_.cols();
  const int64_t n = design_.rows();
  mean_.assign(p, 0.0);
  inv_scale_.assign(p, 1.0);
  for (int j = 0; j < p; ++j) {
    double mu = 0.0;
    for (int64_t i = 0; i < n; ++i) mu += design_.at(i, j);
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      double v = design_.at(i, j) - mu;
      var += v * v;
    }
    var /= static_cast<double>(n);
    mean_[j] = mu;
    inv_scale_[j] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
  }
  matrix_.resize(static_cast<size_t>(n) * p);
  for (int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      matrix_[i * p + j] = (design_.at(i, j) - mean_[j]) * inv_scale_[j];
    }
  }
}

std::vector<double> KnnModel::scaled_row(std::span<const double> raw_row) const {
  std::vector<double> expanded(design_.cols());
  design_.expand_row(raw_row, expanded.data());
  for (int j = 0; j < design_.cols(); ++j) {
    expanded[j] = (expanded[j] - mean_[j]) * inv_scale_[j];
  }
  return expanded;
}

std::vector<int64_t> KnnModel::neighbors(std::span<const double> raw_row) const {
  const auto q = scaled_row(raw_row);
  const int p = design_.cols();
  const int64_t n = train_rows();
  std::vector<std::pair<double, int64_t>> dist(n);
  for (int64_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    const double* row = matrix_.data() + i * p;
    for (int j = 0; j < p; ++j) {
      double diff = row[j] - q[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  // (distance, row index) ordering keeps boundary ties stable by input order
  std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());
  std::vector<int64_t> out(k_);
  for (int i = 0; i < k_; ++i) out[i] = dist[i].second;
  return out;
}

double KnnModel::predict(std::span<const double> raw_row) const {
  const auto q = scaled_row(raw_row);
  const int p = design_.cols();
  const int64_t n = train_rows();
  std::vector<std::pair<double, int64_t>> dist(n);
  for (int64_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    const double* row = matrix_.data() + i * p;
    for (int j = 0; j < p; ++j) {
      double diff = row[j] - q[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());

  if (weighting_ == KnnWeighting::kInverseDistance && dist[0].first == 0.0) {
    // Exact matches dominate: restrict to them.
    if (task_ == KnnTask::kRegression) {
      double acc = 0.0;
      int cnt = 0;
      for (int i = 0; i < k_ && dist[i].first == 0.0; ++i) {
        acc += targets_[dist[i].second];
        ++cnt;
      }
      return acc / cnt;
    }
    std::vector<double> votes(num_classes_, 0.0);
    for (int i = 0; i < k_ && dist[i].first == 0.0; ++i) {
      votes[static_cast<int>(targets_[dist[i].second])] += 1.0;
    }
    return static_cast<double>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }

  if (task_ == KnnTask::kRegression) {
    double acc = 0.0, wsum = 0.0;
    for (int i = 0; i < k_; ++i) {
      double w = weighting_ == KnnWeighting::kUniform
                     ? 1.0
                     : 1.0 / std::sqrt(dist[i].first);
      acc += w * targets_[dist[i].second];
      wsum += w;
    }
    return acc / wsum;
  }

  std::vector<double> votes(num_classes_, 0.0);
  for (int i = 0; i < k_; ++i) {
    double w = weighting_ == KnnWeighting::kUniform ? 1.0 : 1.0 / std::sqrt(dist[i].first);
    votes[static_cast<int>(targets_[dist[i].second])] += w;
  }
  return static_cast<double>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<double> KnnModel::predict_frame(const Frame& frame) const {
  if (frame.schema_hash() != schema_hash_) {
    throw ValidationError("knn model schema hash mismatch");
  }
  std::vector<double> out(frame.rows());
  parallel_for(frame.rows(), [&](int64_t lo, int64_t hi) {
    for (int64_t r = lo; r < hi; ++r) out[r] = predict(frame.row(r));
  });
  return out;
}

}  // namespace glassbox
