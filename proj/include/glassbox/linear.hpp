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

#ifndef GLASSBOX_LINEAR_HPP
#define GLASSBOX_LINEAR_HPP

#include <string>
#include <vector>

#include "glassbox/design.hpp"
#include "glassbox/frame.hpp"

namespace glassbox {

struct LinearModel {
  char regularization = 'n';  // 'l1', 'l2' -> '1'/'2', none -> 'n'
  double lambda = 0.0;
  double intercept = 0.0;
  std::vector<double> coefficients;  // one per design column
  std::vector<std::string> column_names;
  uint64_t schema_hash = 0;
  bool converged = true;

  double predict(std::span<const double> raw_row, const Design& design) const;
  std::vector<double> predict_frame(const Frame& frame) const;
};

// Penalized normal equations with an unpenalized intercept; lambda = 0 with a
// singular system falls back to the minimum-norm solution and reports a
// diagnostic.
LinearModel fit_ridge(const Frame& frame, double lambda, Diagnostics* diags = nullptr);

// Cyclic coordinate descent with soft thresholding on internally standardized
// features (undone on output). Objective: (1/2n)*RSS + lambda*|beta|_1.
LinearModel fit_lasso(const Frame& frame, double lambda, double tol = 1e-7,
                      int max_iter = 1000);

// Objective value under the model's own regularization; used by descent tests.
double linear_objective(const LinearModel& model, const Frame& frame);

}  // namespace glassbox

#endif  // GLASSBOX_LINEAR_HPP
