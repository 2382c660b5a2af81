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

#include "glassbox/model_select.hpp"

#include <cmath>

#include "glassbox/linear.hpp"
#include "glassbox/metrics.hpp"

namespace glassbox {

namespace {

struct FoldPair {
  Frame train;
  Frame valid;
};

std::vector<FoldPair> make_folds(const Frame& frame, int folds, uint64_t seed) {
  auto fold_idx = kfold_indices(frame.rows(), folds, seed);
  std::vector<FoldPair> out;
  out.reserve(folds);
  for (int f = 0; f < folds; ++f) {
    std::vector<int64_t> train_idx;
    for (int g = 0; g < folds; ++g) {
      if (g == f) continue;
      train_idx.insert(train_idx.end(), fold_idx[g].begin(), fold_idx[g].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    out.push_back({subset_frame(frame, train_idx), subset_frame(frame, fold_idx[f])});
  }
  return out;
}

}  // namespace

double cv_select_lambda(const Frame& train, char regularization,
                        std::span<const double> grid, int folds, uint64_t seed) {
  if (grid.empty()) throw ValidationError("empty lambda grid");
  auto pairs = make_folds(train, folds, seed);
  double best_lambda = grid[0];
  double best_score = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    double total = 0.0;
    for (const auto& p : pairs) {
      LinearModel m = regularization == '1' ? fit_lasso(p.train, lambda)
                                            : fit_ridge(p.train, lambda);
      auto pred = m.predict_frame(p.valid);
      total += rmse(pred, p.valid.target);
    }
    double score = total / static_cast<double>(pairs.size());
    if (score < best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

int cv_select_knn_k(const Frame& train, KnnTask task, std::span<const int> grid, int folds,
                    uint64_t seed) {
  if (grid.empty()) throw ValidationError("empty k grid");
  auto pairs = make_folds(train, folds, seed);
  int best_k = grid[0];
  double best_score = task == KnnTask::kRegression
                          ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
  for (int k : grid) {
    double total = 0.0;
    bool usable = true;
    for (const auto& p : pairs) {
      if (k > p.train.rows()) {
        usable = false;
        break;
      }
      KnnModel m(p.train, k, task);
      auto pred = m.predict_frame(p.valid);
      if (task == KnnTask::kRegression) {
        total += rmse(pred, p.valid.target);
      } else {
        total += precision(pred, p.valid.target, p.train.num_classes).value;
      }
    }
    if (!usable) continue;
    double score = total / static_cast<double>(pairs.size());
    bool better = task == KnnTask::kRegression ? score < best_score : score > best_score;
    if (better) {
      best_score = score;
      best_k = k;
    }
  }
  return best_k;
}

const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> kGrid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
  return kGrid;
}

const std::vector<int>& default_k_grid() {
  static const std::vector<int> kGrid = {1, 5, 10, 25};
  return kGrid;
}

}  // namespace glassbox
