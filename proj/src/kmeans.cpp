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

#include "glassbox/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "glassbox/rng.hpp"

namespace glassbox {

namespace {

double sq_dist(const double* a, const double* b, int dims) {
  double d = 0.0;
  for (int i = 0; i < dims; ++i) {
    double x = a[i] - b[i];
    d += x * x;
  }
  return d;
}

int nearest(const double* p, const std::vector<double>& centroids, int k, int dims,
            double* dist_out = nullptr) {
  int best = 0;
  double best_d = sq_dist(p, centroids.data(), dims);
  for (int c = 1; c < k; ++c) {
    double d = sq_dist(p, centroids.data() + static_cast<size_t>(c) * dims, dims);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist_out != nullptr) *dist_out = best_d;
  return best;
}

}  // namespace

std::vector<int64_t> ClusterModel::sizes() const {
  std::vector<int64_t> out(k, 0);
  for (int a : assignments) ++out[a];
  return out;
}

int ClusterModel::assign(const double* point) const {
  std::vector<double> p(point, point + dims);
  if (standardized) {
    for (int d = 0; d < dims; ++d) p[d] = (p[d] - mean[d]) / scale[d];
  }
  return nearest(p.data(), centroids_std, k, dims);
}

ClusterModel kmeans(const std::vector<double>& points, int64_t rows, int dims, int k,
                    const KmeansOptions& opts) {
  if (rows < 1 || dims < 1) throw ValidationError("kmeans needs a nonempty point set");
  if (points.size() != static_cast<size_t>(rows) * dims) {
    throw ValidationError("kmeans point buffer size mismatch");
  }
  // distinct point count bound
  std::set<std::vector<double>> distinct;
  for (int64_t r = 0; r < rows && static_cast<int>(distinct.size()) < k; ++r) {
    distinct.emplace(points.begin() + r * dims, points.begin() + (r + 1) * dims);
  }
  if (static_cast<int>(distinct.size()) < k) {
    throw ValidationError("kmeans: k exceeds the number of distinct points");
  }

  ClusterModel m;
  m.k = k;
  m.dims = dims;
  m.seed = opts.seed;
  m.standardized = opts.standardize;
  m.mean.assign(dims, 0.0);
  m.scale.assign(dims, 1.0);

  std::vector<double> x = points;
  if (opts.standardize) {
    for (int d = 0; d < dims; ++d) {
      double mu = 0.0;
      for (int64_t r = 0; r < rows; ++r) mu += points[r * dims + d];
      mu /= static_cast<double>(rows);
      double var = 0.0;
      for (int64_t r = 0; r < rows; ++r) {
        double v = points[r * dims + d] - mu;
        var += v * v;
      }
      var /= static_cast<double>(rows);
      m.mean[d] = mu;
      m.scale[d] = var > 0.0 ? std::sqrt(var) : 1.0;
      for (int64_t r = 0; r < rows; ++r) {
        x[r * dims + d] = (points[r * dims + d] - mu) / m.scale[d];
      }
    }
  }

  // k-means++ seeding
  Rng rng(opts.seed ^ 0x5eedu);
  std::vector<double> centroids(static_cast<size_t>(k) * dims);
  {
    int64_t first = static_cast<int64_t>(rng.uniform_index(rows));
    std::copy_n(x.data() + first * dims, dims, centroids.data());
    std::vector<double> d2(rows);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int64_t r = 0; r < rows; ++r) {
        double best = sq_dist(x.data() + r * dims, centroids.data(), dims);
        for (int cc = 1; cc < c; ++cc) {
          best = std::min(best, sq_dist(x.data() + r * dims,
                                        centroids.data() + static_cast<size_t>(cc) * dims, dims));
        }
        d2[r] = best;
        total += best;
      }
      int64_t pick = 0;
      if (total > 0.0) {
        double u = rng.uniform() * total;
        double acc = 0.0;
        for (int64_t r = 0; r < rows; ++r) {
          acc += d2[r];
          if (u < acc) {
            pick = r;
            break;
          }
        }
      } else {
        pick = static_cast<int64_t>(rng.uniform_index(rows));
      }
      std::copy_n(x.data() + pick * dims, dims, centroids.data() + static_cast<size_t>(c) * dims);
    }
  }

  std::vector<int> assign(rows, -1);
  std::vector<double> dist(rows, 0.0);
  double prev_inertia = std::numeric_limits<double>::infinity();

  for (int it = 0; it < opts.max_iter; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (int64_t r = 0; r < rows; ++r) {
      double d;
      int a = nearest(x.data() + r * dims, centroids, k, dims, &d);
      if (a != assign[r]) changed = true;
      assign[r] = a;
      dist[r] = d;
      inertia += d;
    }

    // Empty clusters grab the farthest point.
    std::vector<int64_t> counts(k, 0);
    for (int64_t r = 0; r < rows; ++r) ++counts[assign[r]];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int64_t far = 0;
      for (int64_t r = 1; r < rows; ++r) {
        if (dist[r] > dist[far]) far = r;
      }
      --counts[assign[far]];
      assign[far] = c;
      counts[c] = 1;
      dist[far] = 0.0;
      changed = true;
    }

    m.inertia_trace.push_back(inertia);
    m.iterations = it + 1;

    // centroid update
    std::fill(centroids.begin(), centroids.end(), 0.0);
    for (int64_t r = 0; r < rows; ++r) {
      double* c = centroids.data() + static_cast<size_t>(assign[r]) * dims;
      const double* p = x.data() + r * dims;
      for (int d = 0; d < dims; ++d) c[d] += p[d];
    }
    for (int c = 0; c < k; ++c) {
      for (int d = 0; d < dims; ++d) {
        centroids[static_cast<size_t>(c) * dims + d] /= static_cast<double>(counts[c]);
      }
    }

    if (!changed) break;
    if (prev_inertia - inertia < opts.tol * std::max(1.0, inertia)) break;
    prev_inertia = inertia;
  }

  // Final assignment against the last centroid update, and final inertia.
  double inertia = 0.0;
  for (int64_t r = 0; r < rows; ++r) {
    double d;
    assign[r] = nearest(x.data() + r * dims, centroids, k, dims, &d);
    inertia += d;
  }
  m.inertia = inertia;
  if (m.inertia_trace.empty() || inertia < m.inertia_trace.back()) {
    m.inertia_trace.push_back(inertia);
  }

  // Canonical label order by original-space centroid coordinates.
  std::vector<double> orig_centroids(static_cast<size_t>(k) * dims);
  for (int c = 0; c < k; ++c) {
    for (int d = 0; d < dims; ++d) {
      double v = centroids[static_cast<size_t>(c) * dims + d];
      orig_centroids[static_cast<size_t>(c) * dims + d] =
          opts.standardize ? v * m.scale[d] + m.mean[d] : v;
    }
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int d = 0; d < dims; ++d) {
      double va = orig_centroids[static_cast<size_t>(a) * dims + d];
      double vb = orig_centroids[static_cast<size_t>(b) * dims + d];
      if (va != vb) return va < vb;
    }
    return a < b;
  });
  std::vector<int> relabel(k);
  for (int newc = 0; newc < k; ++newc) relabel[order[newc]] = newc;

  m.centroids.resize(static_cast<size_t>(k) * dims);
  m.centroids_std.resize(static_cast<size_t>(k) * dims);
  for (int c = 0; c < k; ++c) {
    int nc = relabel[c];
    for (int d = 0; d < dims; ++d) {
      m.centroids[static_cast<size_t>(nc) * dims + d] =
          orig_centroids[static_cast<size_t>(c) * dims + d];
      m.centroids_std[static_cast<size_t>(nc) * dims + d] =
          centroids[static_cast<size_t>(c) * dims + d];
    }
  }
  m.assignments.resize(rows);
  for (int64_t r = 0; r < rows; ++r) m.assignments[r] = relabel[assign[r]];
  return m;
}

ElbowResult elbow_select(const std::vector<double>& points, int64_t rows, int dims,
                         const std::vector<int>& k_range, const KmeansOptions& opts) {
  if (k_range.size() < 3) throw ValidationError("elbow selection needs at least 3 k values");
  for (size_t i = 1; i < k_range.size(); ++i) {
    if (k_range[i] <= k_range[i - 1]) throw ValidationError("k range must ascend");
  }

  ElbowResult out;
  out.k_values = k_range;
  for (int k : k_range) {
    ClusterModel m = kmeans(points, rows, dims, k, opts);
    out.inertias.push_back(m.inertia);
  }

  const size_t n = k_range.size();
  const double i_first = out.inertias.front();
  const double i_last = out.inertias.back();
  const double drop = i_first - i_last;
  if (!(drop > 1e-12 * std::max(1.0, i_first))) {
    out.degenerate = true;
    out.chosen_k = k_range.front();
    return out;
  }

  // Max perpendicular distance to the chord on the normalized curve.
  const double k_span = static_cast<double>(k_range.back() - k_range.front());
  size_t best = 0;
  double best_dist = -1.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    double xn = (k_range[i] - k_range.front()) / k_span;
    double yn = (out.inertias[i] - i_last) / drop;
    double dist = std::fabs(xn + yn - 1.0) / std::sqrt(2.0);
    if (dist > best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  out.chosen_k = k_range[best];

  // A real knee at least halves the inertia of the preceding k.
  double sharpness = out.inertias[best] / std::max(out.inertias[best - 1], 1e-300);
  if (best_dist <= 1e-9 || sharpness > 0.5) {
    out.degenerate = true;
    out.chosen_k = k_range.front();
  }
  return out;
}

}  // namespace glassbox
