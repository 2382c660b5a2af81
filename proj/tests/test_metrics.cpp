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

#include "glassbox/metrics.hpp"

#include <cmath>

#include <doctest.h>

using namespace glassbox;

TEST_CASE("rmse: zero for identical vectors, arithmetic case") {
  std::vector<double> a = {1, 2, 3};
  CHECK(rmse(a, a) == 0.0);

  std::vector<double> pred = {0, 0};
  std::vector<double> actual = {3, 4};
  CHECK(rmse(pred, actual) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
}

TEST_CASE("rmse: rejects empty or mismatched inputs") {
  std::vector<double> empty;
  std::vector<double> one = {1};
  CHECK_THROWS_AS(rmse(empty, empty), ValidationError);
  CHECK_THROWS_AS(rmse(one, empty), ValidationError);
}

TEST_CASE("precision: perfect predictions give one") {
  std::vector<double> y = {0, 1, 2, 1, 0};
  auto res = precision(y, y, 3);
  CHECK(res.value == doctest::Approx(1.0));
  CHECK(res.classes_never_predicted.empty());
}

TEST_CASE("precision: two classes with TP=3 FP=1 each give macro 0.75") {
  // predictions: class 0 four times (3 right), class 1 four times (3 right)
  std::vector<double> pred = {0, 0, 0, 0, 1, 1, 1, 1};
  std::vector<double> act = {0, 0, 0, 1, 1, 1, 1, 0};
  auto res = precision(pred, act, 2);
  CHECK(res.value == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("precision: a class never predicted contributes zero and is flagged") {
  std::vector<double> pred = {0, 0, 0, 0};
  std::vector<double> act = {0, 0, 1, 1};
  auto res = precision(pred, act, 2);
  CHECK(res.value == doctest::Approx(0.25));  // (0.5 + 0) / 2
  REQUIRE(res.classes_never_predicted.size() == 1);
  CHECK(res.classes_never_predicted[0] == 1);
}

TEST_CASE("precision: micro averaging equals accuracy") {
  std::vector<double> pred = {0, 1, 1, 2};
  std::vector<double> act = {0, 1, 2, 2};
  auto res = precision(pred, act, 3, Averaging::kMicro);
  CHECK(res.value == doctest::Approx(0.75));
}
