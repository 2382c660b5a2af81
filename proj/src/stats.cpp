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

#include "glassbox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "glassbox/csv.hpp"

namespace glassbox {

namespace {

// Per-buyer totals over non-gift order rows.
struct BuyerTotals {
  double spend = 0.0;
  double discount = 0.0;
  int64_t units = 0;
};

std::map<std::string, BuyerTotals> buyer_totals(const RawTables& tables) {
  std::map<std::string, BuyerTotals> out;
  for (const auto& o : tables.orders) {
    if (o.gift_flag) continue;
    auto& t = out[o.user_id];
    t.spend += o.final_unit_price * o.quantity;
    t.discount += (o.direct_discount + o.quantity_discount + o.bundle_discount +
                   o.coupon_discount) *
                  o.quantity;
    t.units += o.quantity;
  }
  return out;
}

double quantile(std::vector<double> sorted, double q) {
  // type-7 (linear interpolation between order statistics)
  const size_t n = sorted.size();
  if (n == 0) return 0.0;
  double pos = q * static_cast<double>(n - 1);
  size_t lo = static_cast<size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

void normalize(Histogram1D& h) {
  double total = 0.0;
  for (double c : h.counts) total += c;
  if (total > 0.0) {
    for (double& c : h.counts) c /= total;
  }
  h.normalization = Normalization::kProbability;
}

Cdf empirical_cdf(std::vector<double> sorted) {
  Cdf cdf;
  const size_t n = sorted.size();
  cdf.xs.reserve(n);
  cdf.cum.reserve(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    cdf.xs.push_back(sorted[i]);
    cdf.cum.push_back(static_cast<double>(j) / static_cast<double>(n));
    i = j;
  }
  return cdf;
}

}  // namespace

const std::array<const char*, 10>& OrderCountTable::bucket_labels() {
  static const std::array<const char*, 10> kLabels = {"1", "2", "3", "4",  "5",
                                                      "6", "7", "8", "9", "10+"};
  return kLabels;
}

OrderCountTable order_count_table(const RawTables& tables) {
  OrderCountTable t;
  for (const auto& [user, totals] : buyer_totals(tables)) {
    (void)user;
    int64_t units = totals.units;
    if (units < 1) continue;
    int bucket = units >= 10 ? 9 : static_cast<int>(units) - 1;
    ++t.counts[bucket];
    ++t.total_buyers;
  }
  if (t.total_buyers > 0) {
    for (int b = 0; b < 10; ++b) {
      t.percentages[b] = 100.0 * static_cast<double>(t.counts[b]) /
                         static_cast<double>(t.total_buyers);
    }
  }
  return t;
}

SpendDistribution spend_distribution(const RawTables& tables, double bin_width, double clip) {
  if (bin_width <= 0.0) throw ValidationError("spend bin width must be positive");
  SpendDistribution out;
  std::vector<double> spends;
  for (const auto& [user, totals] : buyer_totals(tables)) {
    (void)user;
    spends.push_back(totals.spend);
  }
  out.buyers = static_cast<int64_t>(spends.size());

  const int nbins = static_cast<int>(std::ceil(clip / bin_width));
  out.hist.bin_edges.resize(nbins + 2);
  for (int b = 0; b <= nbins; ++b) out.hist.bin_edges[b] = b * bin_width;
  // overflow bucket for spends beyond the clip
  double max_spend = clip;
  for (double s : spends) max_spend = std::max(max_spend, s);
  out.hist.bin_edges[nbins + 1] = std::max(max_spend, clip + bin_width);
  out.hist.counts.assign(nbins + 1, 0.0);

  if (spends.empty()) {
    out.hist.normalization = Normalization::kProbability;
    return out;  // quantiles stay null
  }

  for (double s : spends) {
    int b = s >= clip ? nbins : static_cast<int>(s / bin_width);
    b = std::clamp(b, 0, nbins);
    out.hist.counts[b] += 1.0;
  }
  normalize(out.hist);

  std::sort(spends.begin(), spends.end());
  out.cdf = empirical_cdf(spends);
  out.median = quantile(spends, 0.5);
  out.p90 = quantile(spends, 0.9);
  return out;
}

namespace {

SpanDistribution span_distribution(const std::vector<double>& spans_minutes, int bin_minutes) {
  SpanDistribution out;
  out.users = static_cast<int64_t>(spans_minutes.size());
  if (spans_minutes.empty()) return out;

  double max_span = 0.0;
  for (double s : spans_minutes) max_span = std::max(max_span, s);
  const int nbins = std::max(1, static_cast<int>(std::floor(max_span / bin_minutes)) + 1);
  out.pdf.bin_edges.resize(nbins + 1);
  for (int b = 0; b <= nbins; ++b) out.pdf.bin_edges[b] = static_cast<double>(b) * bin_minutes;
  out.pdf.counts.assign(nbins, 0.0);
  for (double s : spans_minutes) {
    int b = std::min(nbins - 1, static_cast<int>(s / bin_minutes));
    out.pdf.counts[b] += 1.0;
  }
  normalize(out.pdf);

  std::vector<double> sorted = spans_minutes;
  std::sort(sorted.begin(), sorted.end());
  out.cdf = empirical_cdf(sorted);
  auto frac_below = [&sorted](double x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
  };
  out.cdf_1h = frac_below(60.0);
  out.cdf_1d = frac_below(1440.0);
  out.cdf_1w = frac_below(10080.0);
  return out;
}

}  // namespace

InteractionTime interaction_time_distribution(const std::vector<ClickHistory>& histories,
                                              int bin_minutes) {
  if (bin_minutes <= 0) throw ValidationError("bin_minutes must be positive");
  std::vector<double> buyer_spans;
  std::vector<double> nonbuyer_spans;
  for (const auto& h : histories) {
    if (h.events.empty()) continue;
    double span =
        static_cast<double>(h.events.back().timestamp - h.events.front().timestamp) / 60.0;
    (h.buyer ? buyer_spans : nonbuyer_spans).push_back(span);
  }
  InteractionTime out;
  out.bin_minutes = bin_minutes;
  out.buyers = span_distribution(buyer_spans, bin_minutes);
  out.non_buyers = span_distribution(nonbuyer_spans, bin_minutes);
  return out;
}

const std::vector<std::string>& grid_features() {
  static const std::vector<std::string> kFeatures = {
      "age", "gender", "education", "marital_status", "plus_status", "user_level"};
  return kFeatures;
}

namespace {

const std::vector<std::string> kAgeOrder = {"<16", "16-25", "26-35", "36-45", "46-55", ">55"};

std::string grid_level(const UserRecord& u, const std::string& feature) {
  if (feature == "age") return u.age_band == "U" ? "Unknown" : u.age_band;
  if (feature == "gender") return u.gender == "U" ? "Unknown" : u.gender;
  if (feature == "education") return u.education == -1 ? "Unknown" : std::to_string(u.education);
  if (feature == "marital_status") {
    return u.marital_status == "U" ? "Unknown" : u.marital_status;
  }
  if (feature == "plus_status") return u.plus_status == 1 ? "Plus" : "Non-plus";
  if (feature == "user_level") return std::to_string(u.user_level);
  throw ValidationError("unknown grid feature '" + feature + "'");
}

std::vector<std::string> order_levels(const std::string& feature,
                                      const std::map<std::string, int64_t>& seen) {
  std::vector<std::string> out;
  if (feature == "age") {
    for (const auto& a : kAgeOrder) {
      if (seen.count(a)) out.push_back(a);
    }
  } else {
    // numeric-looking levels sort by value, everything else lexically
    std::vector<std::pair<double, std::string>> nums;
    std::vector<std::string> rest;
    for (const auto& [lev, cnt] : seen) {
      (void)cnt;
      if (lev == "Unknown") continue;
      bool ok = false;
      double v = parse_double(lev, &ok);
      if (ok) {
        nums.emplace_back(v, lev);
      } else {
        rest.push_back(lev);
      }
    }
    std::sort(nums.begin(), nums.end());
    std::sort(rest.begin(), rest.end());
    for (auto& [v, lev] : nums) {
      (void)v;
      out.push_back(lev);
    }
    out.insert(out.end(), rest.begin(), rest.end());
  }
  if (seen.count("Unknown")) out.push_back("Unknown");
  return out;
}

}  // namespace

HistogramGrid conditional_2d_histogram(const RawTables& tables, const std::string& feature,
                                       GridMetric metric, double bin_width, double clip) {
  if (bin_width <= 0.0 || clip <= 0.0) throw ValidationError("grid bins must be positive");
  if (std::find(grid_features().begin(), grid_features().end(), feature) ==
      grid_features().end()) {
    throw ValidationError("unknown grid feature '" + feature + "'");
  }
  std::unordered_map<std::string, const UserRecord*> user_of;
  for (const auto& u : tables.users) user_of[u.user_id] = &u;

  HistogramGrid grid;
  grid.feature = feature;

  const bool units = metric == GridMetric::kUnitsPerOrder;
  grid.metric = units ? "units_per_order"
                      : (metric == GridMetric::kTotalSpend ? "total_spend" : "total_discount");

  int ncols;
  if (units) {
    ncols = 10;  // 1..9 and 10+
    for (int u = 1; u <= 11; ++u) grid.col_edges.push_back(u);
    for (int u = 1; u <= 9; ++u) grid.col_labels.push_back(std::to_string(u));
    grid.col_labels.push_back("10+");
  } else {
    const int nb = static_cast<int>(std::ceil(clip / bin_width));
    ncols = nb + 1;
    for (int b = 0; b <= nb; ++b) grid.col_edges.push_back(b * bin_width);
    grid.col_edges.push_back(clip + bin_width);
    for (int b = 0; b < nb; ++b) {
      grid.col_labels.push_back(format_double(b * bin_width) + "-" +
                                format_double((b + 1) * bin_width));
    }
    grid.col_labels.push_back(">" + format_double(clip));
  }

  // Observations: (level, metric value). The spend/discount metrics are per
  // buyer; units_per_order is per order id.
  std::vector<std::pair<std::string, double>> obs;
  auto level_of_user = [&](const std::string& user_id) -> std::string {
    auto it = user_of.find(user_id);
    if (it == user_of.end()) return "Unknown";
    return grid_level(*it->second, feature);
  };

  if (units) {
    std::map<std::string, std::pair<std::string, int64_t>> per_order;  // order -> (user, units)
    for (const auto& o : tables.orders) {
      if (o.gift_flag) continue;
      auto& e = per_order[o.order_id];
      e.first = o.user_id;
      e.second += o.quantity;
    }
    for (const auto& [oid, e] : per_order) {
      (void)oid;
      obs.emplace_back(level_of_user(e.first), static_cast<double>(e.second));
    }
  } else {
    for (const auto& [user, totals] : buyer_totals(tables)) {
      obs.emplace_back(level_of_user(user),
                       metric == GridMetric::kTotalSpend ? totals.spend : totals.discount);
    }
  }

  std::map<std::string, int64_t> seen;
  for (const auto& [lev, v] : obs) {
    (void)v;
    ++seen[lev];
  }
  // An empty level can only arise when a caller asks for it explicitly; data
  // driven levels always have at least one observation, except "Unknown"
  // which we always include per the presentation convention.
  seen.try_emplace("Unknown", 0);
  grid.row_labels = order_levels(feature, seen);

  std::map<std::string, int> row_of;
  for (size_t i = 0; i < grid.row_labels.size(); ++i) {
    row_of[grid.row_labels[i]] = static_cast<int>(i);
  }

  grid.values.assign(grid.row_labels.size(), std::vector<double>(ncols, 0.0));
  for (const auto& [lev, v] : obs) {
    int r = row_of.at(lev);
    int b;
    if (units) {
      b = v >= 10 ? 9 : static_cast<int>(v) - 1;
      b = std::clamp(b, 0, 9);
    } else {
      b = v >= clip ? ncols - 1 : static_cast<int>(v / bin_width);
      b = std::clamp(b, 0, ncols - 1);
    }
    grid.values[r][b] += 1.0;
  }

  grid.empty_rows.assign(grid.row_labels.size(), false);
  for (size_t r = 0; r < grid.values.size(); ++r) {
    double total = 0.0;
    for (double v : grid.values[r]) total += v;
    if (total <= 0.0) {
      grid.empty_rows[r] = true;
      continue;
    }
    for (double& v : grid.values[r]) v /= total;
  }
  return grid;
}

}  // namespace glassbox
