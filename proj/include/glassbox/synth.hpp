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

#ifndef GLASSBOX_SYNTH_HPP
#define GLASSBOX_SYNTH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "glassbox/tables.hpp"

namespace glassbox {

// Ground-truth order-quantity process: a buyer's order goes bulk with
// probability proportional to exp of this score; the interaction term is the
// planted signal the explanation pipeline is expected to recover.
struct ResponseSpec {
  double promise_weight = 1.2;
  double userlevel_weight = 0.8;
  double interaction_weight = 2.5;  // promise x user_level
  double discount_weight = 1.5;
  double bulk_cap = 0.85;
  double tail_mean = 3.0;  // extra units past 10 inside the 10+ bucket
};

struct SynthConfig {
  int64_t n_users = 100000;
  double buyer_fraction = 0.1778;
  double order_first_fraction = 0.1776;
  std::string month = "2018-03";

  // Per-buyer total-unit bucket mass, 1..9 then 10+.
  std::vector<double> order_count_mass = {0.9469, 0.0477, 0.0040, 0.0006,  0.0002,
                                          0.0001, 0.0001, 0.00005, 0.00005, 0.0003};
  double spend_median = 80.0;
  double spend_p90 = 210.0;
  std::array<double, 3> buyer_span_cdf = {0.40, 0.54, 0.78};      // at 1h, 1d, 1w
  std::array<double, 3> nonbuyer_span_cdf = {0.70, 0.77, 0.88};
  double single_event_rate = 0.25;  // sub-hour users emitting one record only
  double daily_period_amplitude = 0.5;

  std::vector<double> age_prior = {0.02, 0.18, 0.30, 0.22, 0.10, 0.06, 0.12};  // <16..>55, U
  std::vector<double> gender_prior = {0.42, 0.40, 0.18};                       // F, M, U
  std::vector<double> education_prior = {0.30, 0.10, 0.25, 0.25, 0.10};        // -1,1,2,3,4
  std::vector<double> marital_prior = {0.30, 0.35, 0.35};                      // S, M, U
  double plus_rate = 0.20;
  std::vector<double> user_level_prior = {0.0626, 0.05, 0.33, 0.25, 0.16, 0.11, 0.0374};
  std::vector<double> city_prior = {0.10, 0.14, 0.18, 0.24, 0.20, 0.14};       // -1,1..5
  std::vector<double> purchase_power_prior = {0.15, 0.10, 0.20, 0.30, 0.15, 0.10};

  int64_t n_skus = 2500;
  double attr1_missing_rate = 0.20;
  double attr2_missing_rate = 0.25;
  std::vector<double> cluster_weights = {0.27, 0.25, 0.34, 0.14};
  std::vector<double> attr1_centers = {1.4, 2.1, 3.0, 3.6};
  std::vector<double> attr2_centers = {42.0, 78.0, 50.0, 88.0};
  double attr1_std = 0.22;
  double attr2_std = 5.5;
  std::vector<double> price_base = {55.0, 75.0, 110.0, 260.0};
  std::vector<double> type2_price_factor = {2.2, 0.5, 0.45, 0.35};
  double price_sigma = 0.35;
  double type2_rate = 0.40;

  std::vector<double> promise_prior = {0.12, 0.22, 0.26, 0.16, 0.09,
                                       0.06, 0.04, 0.03, 0.02};  // N/A, 1..8
  double direct_rate = 0.55, direct_max = 0.30;
  double quantity_rate = 0.30, quantity_max = 0.25;
  double bundle_rate = 0.08, bundle_max = 0.20, bundle_rate_cluster2 = 0.45;
  double coupon_rate = 0.40, coupon_max = 0.15;

  double gift_order_rate = 0.010;
  double gift_only_order_rate = 0.003;
  double split_order_rate = 0.30;
  double order_extra_click_mean = 2.5;
  double nonbuyer_click_mean = 2.0;
  int price_search_jitter = 8;

  ResponseSpec response;
  uint64_t seed = 0;

  void validate() const;
  std::string to_json() const;
  static SynthConfig from_json(const std::string& text);  // requires "seed"
};

struct GroundTruth {
  TableCounts counts;
  int64_t buyers = 0;
  int64_t order_first_users = 0;
  int64_t paid_lines = 0;
  int64_t gift_units = 0;
  int64_t gift_only_orders = 0;
  std::vector<std::string> sku_ids;
  std::vector<int> sku_cluster;            // planted cluster per sku
  std::vector<bool> sku_attrs_complete;
  std::vector<int64_t> order_lines_per_cluster;  // complete-attr paid lines
  std::array<int64_t, 10> bucket_counts{};       // realized per-buyer unit totals
  double bulk_calibration = 0.0;
  ResponseSpec response;
  std::string interaction_a = "promise";
  std::string interaction_b = "user_level";

  // sku -> planted label, complete-attr SKUs only
  std::unordered_map<std::string, int> label_map() const;
  std::string to_json() const;
};

struct SynthResult {
  RawTables tables;
  GroundTruth truth;
};

SynthResult generate(const SynthConfig& config);

// Emits users/clicks/orders/skus CSVs plus ground_truth.json into dir.
void write_synth(const SynthResult& result, const std::string& dir);

}  // namespace glassbox

#endif  // GLASSBOX_SYNTH_HPP
