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

#ifndef GLASSBOX_MODEL_SELECT_HPP
#define GLASSBOX_MODEL_SELECT_HPP

#include <span>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/knn.hpp"

namespace glassbox {

// 5-fold seeded cross-validation used where the source protocol leaves the
// hyperparameter open. Lower RMSE wins for regression; higher macro
// precision wins for classification; ties keep the earlier grid value.

double cv_select_lambda(const Frame& train, char regularization,
                        std::span<const double> grid, int folds, uint64_t seed);

int cv_select_knn_k(const Frame& train, KnnTask task, std::span<const int> grid, int folds,
                    uint64_t seed);

const std::vector<double>& default_lambda_grid();  // 1e-3 .. 1e1
const std::vector<int>& default_k_grid();          // {1, 5, 10, 25}

}  // namespace glassbox

#endif  // GLASSBOX_MODEL_SELECT_HPP
