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

#ifndef GLASSBOX_STATS_HPP
#define GLASSBOX_STATS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "glassbox/tables.hpp"

namespace glassbox {

enum class Normalization { kCount, kProbability };

struct Histogram1D {
  std::vector<double> bin_edges;  // ascending, len(counts) + 1
  std::vector<double> counts;
  Normalization normalization = Normalization::kCount;
};

struct Cdf {
  std::vector<double> xs;
  std::vector<double> cum;  // non-decreasing, ends at 1
};

// Table-1 analogue: buyers bucketed by total ordered units, 1..9 and "10+".
struct OrderCountTable {
  std::array<int64_t, 10> counts{};
  std::array<double, 10> percentages{};
  int64_t total_buyers = 0;

  static const std::array<const char*, 10>& bucket_labels();
};

OrderCountTable order_count_table(const RawTables& tables);

struct SpendDistribution {
  Histogram1D hist;  // probability; last bin is the >clip overflow
  Cdf cdf;
  std::optional<double> median;
  std::optional<double> p90;
  int64_t buyers = 0;
};

SpendDistribution spend_distribution(const RawTables& tables, double bin_width = 10.0,
                                     double clip = 500.0);

// Interaction spans (last minus first event) per cohort. Bins are linear
// bin_minutes intervals; the export layer may draw them on a log axis.
struct SpanDistribution {
  Histogram1D pdf;  // probability
  Cdf cdf;
  double cdf_1h = 0.0;
  double cdf_1d = 0.0;
  double cdf_1w = 0.0;
  int64_t users = 0;
};

struct InteractionTime {
  SpanDistribution buyers;
  SpanDistribution non_buyers;
  int bin_minutes = 10;
};

InteractionTime interaction_time_distribution(const std::vector<ClickHistory>& histories,
                                              int bin_minutes = 10);

enum class GridMetric { kTotalSpend, kTotalDiscount, kUnitsPerOrder };

// Row-normalized 2-D histogram: one row per level of a user feature,
// columns binning the metric. Spend/discount bins are 0..clip in bin_width
// steps plus an overflow column; units bins are 1..9 plus "10+" aggregation.
struct HistogramGrid {
  std::string feature;
  std::string metric;
  std::vector<std::string> row_labels;
  std::vector<double> col_edges;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> values;  // each populated row sums to 1
  std::vector<bool> empty_rows;
};

HistogramGrid conditional_2d_histogram(const RawTables& tables, const std::string& feature,
                                       GridMetric metric, double bin_width = 10.0,
                                       double clip = 500.0);

// Feature names accepted by conditional_2d_histogram.
const std::vector<std::string>& grid_features();

}  // namespace glassbox

#endif  // GLASSBOX_STATS_HPP
