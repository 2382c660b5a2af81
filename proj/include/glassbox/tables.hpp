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

#ifndef GLASSBOX_TABLES_HPP
#define GLASSBOX_TABLES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glassbox/common.hpp"

namespace glassbox {

// Raw transaction records mirroring the four input CSVs. Categorical codes
// use -1 for "no data" throughout, matching the source coding of city level
// and purchase power.

struct UserRecord {
  std::string user_id;
  std::string age_band;        // "<16", "16-25", ..., ">55", "U"
  std::string gender;          // "F", "M", "U"
  int education = -1;          // 1..4, -1 unknown
  std::string marital_status;  // "S", "M", "U"
  int plus_status = 0;         // 0 non-plus, 1 plus
  int user_level = -1;         // -1 new, 0..4, 10 enterprise
  int city_level = -1;         // -1, 1..5
  int purchase_power = -1;     // -1, 1..5
  std::string first_order_month;  // "YYYY-MM" or empty
};

struct ClickRecord {
  std::string user_id;
  std::string sku_id;
  int64_t timestamp = 0;
  std::string channel;
};

struct OrderRecord {
  std::string order_id;
  std::string user_id;
  std::string sku_id;
  int64_t timestamp = 0;
  int quantity = 0;
  double original_unit_price = 0.0;
  double final_unit_price = 0.0;
  double direct_discount = 0.0;    // per-unit discount values in currency
  double quantity_discount = 0.0;
  double bundle_discount = 0.0;
  double coupon_discount = 0.0;
  bool gift_flag = false;
  int promise_days = -1;  // -1 encodes "N/A"
  int product_type = 1;   // 1 first-party, 2 third-party
  int num_gifts = 0;      // filled by count_gifts
};

struct SkuRecord {
  std::string sku_id;
  std::optional<double> attribute1;  // 1..4
  std::optional<double> attribute2;  // 30..100
};

struct RawTables {
  std::vector<UserRecord> users;
  std::vector<ClickRecord> clicks;
  std::vector<OrderRecord> orders;
  std::vector<SkuRecord> skus;
};

struct TablePaths {
  std::string users;
  std::string clicks;
  std::string orders;
  std::string skus;
};

struct ParseOptions {
  bool lenient = false;
  std::string month = "2018-03";  // orders/clicks must fall inside this month
};

struct TableCounts {
  int64_t users = 0;
  int64_t clicks = 0;
  int64_t orders = 0;
  int64_t skus = 0;
};

struct ParseReport {
  TableCounts accepted;
  TableCounts rejected;
  Diagnostics diagnostics;
};

// Parses the four CSVs. Malformed rows are skipped with a line-numbered
// diagnostic in lenient mode and raise DataError otherwise. Order rows whose
// user id is absent from the users table are kept but flagged.
RawTables parse_tables(const TablePaths& paths, const ParseOptions& opts, ParseReport* report);

// One user's event timeline. Events are sorted by timestamp with ties broken
// by stable input order; is_order marks order events (the "successful
// clicks"), whose channel comes from the matched click or "unknown".
struct ClickEvent {
  int64_t timestamp = 0;
  std::string sku_id;
  std::string channel;
  bool is_order = false;
};

struct ClickHistory {
  std::string user_id;
  bool buyer = false;
  std::vector<ClickEvent> events;
};

// Full undeduplicated timelines (clicks plus orders), used by the
// descriptive statistics.
std::vector<ClickHistory> raw_histories(const RawTables& tables);

// Buyer click deduplication: per order, keep only the last click on the
// ordered SKU at or before the order; other clicks before the buyer's last
// order are dropped; an order with no matching click becomes an event with
// channel "unknown". Non-buyers are untouched. Idempotent.
std::vector<ClickHistory> dedup_clicks(const RawTables& tables);

struct GiftReport {
  int64_t gift_only_orders_removed = 0;
  int64_t gift_units_attached = 0;
  Diagnostics diagnostics;
};

// Collapses free-gift rows into the paid row's num_gifts; gift-only orders
// are removed. Orders with several paid rows attach gifts to the
// highest-priced one and emit a diagnostic.
RawTables count_gifts(const RawTables& tables, GiftReport* report);

struct DiscountRatios {
  double direct = 0.0;
  double quantity = 0.0;
  double bundle = 0.0;
  double coupon = 0.0;
};

// Per-unit discount values as fractions of the original unit price, each
// clamped to [0, 1]. Requires original_unit_price > 0.
DiscountRatios discount_ratios(const OrderRecord& row);

}  // namespace glassbox

#endif  // GLASSBOX_TABLES_HPP
