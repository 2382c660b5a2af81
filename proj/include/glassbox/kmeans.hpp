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

#ifndef GLASSBOX_KMEANS_HPP
#define GLASSBOX_KMEANS_HPP

#include <cstdint>
#include <vector>

#include "glassbox/common.hpp"

namespace glassbox {

struct KmeansOptions {
  int max_iter = 100;
  double tol = 1e-7;          // relative inertia improvement stop
  bool standardize = true;    // z-scale dimensions before clustering
  uint64_t seed = 0;
};

// Lloyd's algorithm with k-means++ seeding. Labels are canonicalized by
// ascending centroid coordinates (original space) so runs are comparable.
struct ClusterModel {
  int k = 0;
  int dims = 0;
  std::vector<double> centroids;       // k x dims, original space
  std::vector<double> centroids_std;   // k x dims, clustering space
  std::vector<int> assignments;
  double inertia = 0.0;                // within-cluster SSE in clustering space
  std::vector<double> inertia_trace;   // per Lloyd iteration
  int iterations = 0;
  uint64_t seed = 0;
  bool standardized = true;
  std::vector<double> mean, scale;     // standardization parameters

  std::vector<int64_t> sizes() const;
  int assign(const double* point) const;  // original-space point -> label
};

ClusterModel kmeans(const std::vector<double>& points, int64_t rows, int dims, int k,
                    const KmeansOptions& opts);

struct ElbowResult {
  int chosen_k = 0;
  std::vector<int> k_values;
  std::vector<double> inertias;
  bool degenerate = false;  // no usable knee; chosen_k falls back to the smallest k
};

// Knee of the inertia curve: the k maximizing perpendicular distance to the
// chord joining the curve's endpoints. A knee that fails to at least halve
// the previous inertia is flagged degenerate.
ElbowResult elbow_select(const std::vector<double>& points, int64_t rows, int dims,
                         const std::vector<int>& k_range, const KmeansOptions& opts);

}  // namespace glassbox

#endif  // GLASSBOX_KMEANS_HPP
