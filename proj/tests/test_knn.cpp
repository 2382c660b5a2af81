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

#include <doctest.h>

#include "test_util.hpp"

using namespace glassbox;

namespace {

// Independent oracle: one-hot + z-scale exactly as documented, then a full
// stable sort on (distance, row index).
std::vector<int64_t> brute_neighbors(const Frame& train, std::span<const double> raw_query,
                                     int k) {
  Design d = Design::build(train);
  const int p = d.cols();
  const int64_t n = d.rows();
  std::vector<double> mean(p, 0.0), scale(p, 0.0);
  for (int j = 0; j < p; ++j) {
    for (int64_t i = 0; i < n; ++i) mean[j] += d.at(i, j);
    mean[j] /= static_cast<double>(n);
    for (int64_t i = 0; i < n; ++i) {
      double v = d.at(i, j) - mean[j];
      scale[j] += v * v;
    }
    scale[j] = std::sqrt(scale[j] / static_cast<double>(n));
  }
  std::vector<double> q(p);
  d.expand_row(raw_query, q.data());
  for (int j = 0; j < p; ++j) q[j] = scale[j] > 0 ? (q[j] - mean[j]) / scale[j] : 0.0;

  std::vector<std::pair<double, int64_t>> dist(n);
  for (int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < p; ++j) {
      double vi = scale[j] > 0 ? (d.at(i, j) - mean[j]) / scale[j] : 0.0;
      double diff = vi - q[j];
      acc += diff * diff;
    }
    dist[i] = {acc, i};
  }
  std::sort(dist.begin(), dist.end());
  std::vector<int64_t> out(k);
  for (int i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

}  // namespace

TEST_CASE("knn: query equal to a training row with k=1 returns that row's target") {
  Frame f = testutil::numeric_frame({{0, 0}, {1, 1}, {5, 5}}, {10, 20, 30});
  KnnModel m(f, 1, KnnTask::kRegression);
  std::vector<double> q = {1, 1};
  CHECK(m.predict(q) == doctest::Approx(20.0));
}

TEST_CASE("knn: k = n with uniform weights returns the global mean") {
  Frame f = testutil::numeric_frame({{0, 0}, {1, 1}, {5, 5}}, {10, 20, 30});
  KnnModel m(f, 3, KnnTask::kRegression, KnnWeighting::kUniform);
  std::vector<double> q = {2, 2};
  CHECK(m.predict(q) == doctest::Approx(20.0));
}

TEST_CASE("knn: inverse-distance with an exact match returns the match target") {
  Frame f = testutil::numeric_frame({{0, 0}, {1, 1}, {5, 5}}, {10, 20, 30});
  KnnModel m(f, 3, KnnTask::kRegression, KnnWeighting::kInverseDistance);
  std::vector<double> q = {5, 5};
  CHECK(m.predict(q) == doctest::Approx(30.0));
}

TEST_CASE("knn: boundary distance ties resolve by stable row order") {
  // zero-mean column keeps the scaled distances of rows 1 and 2 exactly
  // equal; k=2 must include row 1 (stable input order)
  Frame f = testutil::numeric_frame({{0.0}, {2.0}, {-2.0}, {4.0}, {-4.0}}, {1, 2, 3, 4, 5});
  KnnModel m(f, 2, KnnTask::kRegression);
  std::vector<double> q = {0.0};
  auto nb = m.neighbors(q);
  REQUIRE(nb.size() == 2);
  CHECK(nb[0] == 0);
  CHECK(nb[1] == 1);
}

TEST_CASE("knn: classification majority vote") {
  Frame f;
  f.schema.push_back({"x", FeatureKind::kNumeric, {}, -1.0});
  f.classification = true;
  f.num_classes = 2;
  std::vector<double> xs = {0.0, 0.1, 0.2, 5.0, 5.1};
  std::vector<double> ys = {0, 0, 0, 1, 1};
  for (size_t i = 0; i < xs.size(); ++i) {
    f.row_ids.push_back("r" + std::to_string(i));
    f.data.push_back(xs[i]);
    f.target.push_back(ys[i]);
  }
  KnnModel m(f, 3, KnnTask::kClassification);
  std::vector<double> q = {0.05};
  CHECK(m.predict(q) == 0.0);
  q[0] = 5.05;
  CHECK(m.predict(q) == 1.0);
}

TEST_CASE("knn matches the brute-force sort oracle on mixed frames") {
  Rng rng(91);
  Frame train = testutil::random_mixed_frame(rng, 6, 200);
  KnnModel m(train, 7, KnnTask::kRegression);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> q(6);
    for (int c = 0; c < 6; ++c) {
      const auto& d = train.schema[c];
      q[c] = d.kind == FeatureKind::kCategorical
                 ? static_cast<double>(rng.uniform_index(d.levels.size()))
                 : rng.uniform(0.0, 5.0);
    }
    auto got = m.neighbors(q);
    auto want = brute_neighbors(train, q, 7);
    CHECK(got == want);
  }
}

TEST_CASE("knn: k outside [1, rows] is rejected") {
  Frame f = testutil::numeric_frame({{0.0}, {1.0}}, {1, 2});
  CHECK_THROWS_AS(KnnModel(f, 0, KnnTask::kRegression), ValidationError);
  CHECK_THROWS_AS(KnnModel(f, 3, KnnTask::kRegression), ValidationError);
}
