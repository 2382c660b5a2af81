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

#include "glassbox/frame.hpp"

#include <doctest.h>

#include "glassbox/csv.hpp"

#include "test_util.hpp"

using namespace glassbox;

namespace {

RawTables tiny_tables() {
  RawTables t;
  UserRecord u;
  u.user_id = "u1";
  u.age_band = "26-35";
  u.gender = "F";
  u.education = 3;
  u.marital_status = "M";
  u.plus_status = 0;
  u.user_level = 3;
  u.city_level = 1;
  u.purchase_power = 2;
  t.users.push_back(u);
  t.skus.push_back({"A", 3.0, 80.0});
  t.skus.push_back({"B", std::nullopt, 60.0});

  OrderRecord o;
  o.order_id = "o1";
  o.user_id = "u1";
  o.sku_id = "A";
  o.timestamp = *parse_iso8601("2018-03-08T21:15:00");  // a Thursday, 9pm
  o.quantity = 3;
  o.original_unit_price = 191.0;
  o.final_unit_price = 186.0;
  o.direct_discount = 0.955;
  o.quantity_discount = 4.011;
  o.promise_days = -1;  // N/A
  o.product_type = 1;
  t.orders.push_back(o);
  return t;
}

}  // namespace

TEST_CASE("sales frame: one paid line, quantity target, twenty features") {
  RawTables t = tiny_tables();
  auto histories = dedup_clicks(t);
  Diagnostics diags;
  Frame f = build_sales_frame(t, histories, &diags);
  CHECK(f.rows() == 1);
  CHECK(f.cols() == 20);
  CHECK(f.target[0] == 3.0);
  CHECK_FALSE(f.classification);

  // Promise N/A encodes as -1
  int promise = f.feature_index("promise");
  REQUIRE(promise >= 0);
  CHECK(f.at(0, promise) == -1.0);

  // order-first buyer -> channel unknown
  int channel = f.feature_index("channel");
  const auto& levels = f.schema[channel].levels;
  CHECK(levels[static_cast<int>(f.at(0, channel))] == "unknown");

  // timestamp-derived categoricals
  int dow = f.feature_index("day_of_week");
  CHECK(f.schema[dow].levels[static_cast<int>(f.at(0, dow))] == "thu");
  int hod = f.feature_index("hour_of_day");
  CHECK(f.schema[hod].levels[static_cast<int>(f.at(0, hod))] == "21");

  CHECK(f.at(0, f.feature_index("attribute1")) == 3.0);
  CHECK(f.at(0, f.feature_index("original_price")) == 191.0);
  CHECK(f.at(0, f.feature_index("direct_discount_pct")) ==
        doctest::Approx(0.955 / 191.0).epsilon(1e-12));
}

TEST_CASE("sales frame: missing SKU attribute encodes as -1, row kept") {
  RawTables t = tiny_tables();
  t.orders[0].sku_id = "B";
  auto histories = dedup_clicks(t);
  Frame f = build_sales_frame(t, histories, nullptr);
  CHECK(f.rows() == 1);
  CHECK(f.at(0, f.feature_index("attribute1")) == -1.0);
  CHECK(f.at(0, f.feature_index("attribute2")) == 60.0);
}

TEST_CASE("choice frame: cluster label target, attributes excluded, incomplete SKU dropped") {
  RawTables t = tiny_tables();
  OrderRecord o2 = t.orders[0];
  o2.order_id = "o2";
  o2.sku_id = "B";  // attribute1 missing -> no label
  t.orders.push_back(o2);

  std::unordered_map<std::string, int> labels{{"A", 2}};
  auto histories = dedup_clicks(t);
  Diagnostics diags;
  Frame f = build_choice_frame(t, labels, 4, histories, &diags);
  CHECK(f.rows() == 1);
  CHECK(f.cols() == 18);
  CHECK(f.classification);
  CHECK(f.num_classes == 4);
  CHECK(f.target[0] == 2.0);
  CHECK(f.feature_index("attribute1") == -1);
  CHECK(f.feature_index("attribute2") == -1);
  bool dropped_logged = false;
  for (const auto& d : diags) {
    if (d.message.find("lacks attributes") != std::string::npos) dropped_logged = true;
  }
  CHECK(dropped_logged);
}

TEST_CASE("frame: zero-priced paid row is excluded with a diagnostic") {
  RawTables t = tiny_tables();
  t.orders[0].original_unit_price = 0.0;
  auto histories = dedup_clicks(t);
  Diagnostics diags;
  Frame f = build_sales_frame(t, histories, &diags);
  CHECK(f.rows() == 0);
  CHECK(!diags.empty());
}

TEST_CASE("frame: save and load round-trip preserves schema and cells") {
  RawTables t = tiny_tables();
  auto histories = dedup_clicks(t);
  Frame f = build_sales_frame(t, histories, nullptr);

  testutil::TempDir dir("frame_roundtrip");
  f.save(dir.file("f.csv"), dir.file("f.schema.json"));
  Frame g = Frame::load(dir.file("f.csv"), dir.file("f.schema.json"));
  CHECK(g.schema_hash() == f.schema_hash());
  REQUIRE(g.rows() == f.rows());
  for (int c = 0; c < f.cols(); ++c) CHECK(g.at(0, c) == f.at(0, c));
  CHECK(g.target[0] == f.target[0]);
  CHECK(g.row_ids[0] == f.row_ids[0]);
}

TEST_CASE("frame: validation rejects NaN cells and bad level indexes") {
  Frame f = testutil::numeric_frame({{1.0, 2.0}}, {1.0});
  f.data[0] = std::nan("");
  CHECK_THROWS_AS(f.validate(), InternalError);

  Frame g;
  g.schema.push_back({"c", FeatureKind::kCategorical, {"a", "b"}, -1.0});
  g.row_ids = {"r0"};
  g.data = {5.0};  // out of range
  g.target = {0.0};
  CHECK_THROWS_AS(g.validate(), InternalError);
}

TEST_CASE("frame: schema hash changes when a level dictionary changes") {
  Frame a;
  a.schema.push_back({"c", FeatureKind::kCategorical, {"x", "y"}, -1.0});
  Frame b;
  b.schema.push_back({"c", FeatureKind::kCategorical, {"x", "z"}, -1.0});
  CHECK(a.schema_hash() != b.schema_hash());
}
