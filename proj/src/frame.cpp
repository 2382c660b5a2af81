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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "glassbox/csv.hpp"

namespace glassbox {

using nlohmann::json;

int FeatureDesc::level_index(const std::string& value) const {
  for (size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == value) return static_cast<int>(i);
  }
  return -1;
}

int Frame::feature_index(const std::string& name) const {
  for (size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

uint64_t Frame::schema_hash() const {
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x1f;
    h *= 1099511628211ULL;
  };
  for (const auto& f : schema) {
    mix(f.name);
    mix(f.kind == FeatureKind::kCategorical ? "cat" : "num");
    for (const auto& l : f.levels) mix(l);
  }
  mix(target_name);
  mix(classification ? "class" + std::to_string(num_classes) : "reg");
  return h;
}

void Frame::validate() const {
  if (static_cast<int64_t>(row_ids.size()) != rows()) {
    throw InternalError("frame: row_ids/target size mismatch");
  }
  if (data.size() != static_cast<size_t>(rows()) * cols()) {
    throw InternalError("frame: matrix size does not match schema length");
  }
  for (int64_t r = 0; r < rows(); ++r) {
    for (int c = 0; c < cols(); ++c) {
      double v = at(r, c);
      if (!std::isfinite(v)) {
        throw InternalError("frame: non-finite value at row " + std::to_string(r) +
                            " feature " + schema[c].name);
      }
      if (schema[c].kind == FeatureKind::kCategorical) {
        double rounded = std::nearbyint(v);
        if (v != rounded || v < -1.0 || v >= static_cast<double>(schema[c].levels.size())) {
          throw InternalError("frame: invalid level index at row " + std::to_string(r) +
                              " feature " + schema[c].name);
        }
      }
    }
    if (!std::isfinite(target[r])) {
      throw InternalError("frame: non-finite target at row " + std::to_string(r));
    }
    if (classification) {
      double t = target[r];
      if (t != std::nearbyint(t) || t < 0 || t >= num_classes) {
        throw InternalError("frame: class index out of range at row " + std::to_string(r));
      }
    }
  }
}

void Frame::save(const std::string& csv_path, const std::string& schema_path) const {
  CsvWriter w(csv_path);
  std::vector<std::string> header;
  header.push_back("row_id");
  for (const auto& f : schema) header.push_back(f.name);
  header.push_back(target_name);
  w.write_row(header);
  std::vector<std::string> fields(header.size());
  for (int64_t r = 0; r < rows(); ++r) {
    fields[0] = row_ids[r];
    for (int c = 0; c < cols(); ++c) fields[1 + c] = format_double(at(r, c));
    fields[1 + cols()] = format_double(target[r]);
    w.write_row(fields);
  }

  json js;
  js["format_version"] = 1;
  js["target"] = {{"name", target_name},
                  {"classification", classification},
                  {"num_classes", num_classes}};
  json feats = json::array();
  for (const auto& f : schema) {
    json jf;
    jf["name"] = f.name;
    jf["kind"] = f.kind == FeatureKind::kCategorical ? "categorical" : "numeric";
    jf["missing_code"] = f.missing_code;
    if (f.kind == FeatureKind::kCategorical) jf["levels"] = f.levels;
    feats.push_back(jf);
  }
  js["features"] = feats;
  js["schema_hash"] = schema_hash();
  std::ofstream out(schema_path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + schema_path);
  out << js.dump(2) << "\n";
}

Frame Frame::load(const std::string& csv_path, const std::string& schema_path) {
  std::ifstream in(schema_path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + schema_path);
  json js = json::parse(in, nullptr, true);

  Frame f;
  f.target_name = js.at("target").at("name").get<std::string>();
  f.classification = js.at("target").at("classification").get<bool>();
  f.num_classes = js.at("target").at("num_classes").get<int>();
  for (const auto& jf : js.at("features")) {
    FeatureDesc d;
    d.name = jf.at("name").get<std::string>();
    d.kind = jf.at("kind").get<std::string>() == "categorical" ? FeatureKind::kCategorical
                                                               : FeatureKind::kNumeric;
    d.missing_code = jf.at("missing_code").get<double>();
    if (jf.contains("levels")) d.levels = jf.at("levels").get<std::vector<std::string>>();
    f.schema.push_back(std::move(d));
  }

  CsvTable t = read_csv(csv_path);
  const size_t expect = 2 + f.schema.size();
  if (t.header.size() != expect) {
    throw DataError("frame csv/schema mismatch: " + csv_path + " has " +
                    std::to_string(t.header.size()) + " columns, schema implies " +
                    std::to_string(expect));
  }
  f.row_ids.reserve(t.rows.size());
  f.data.reserve(t.rows.size() * f.schema.size());
  f.target.reserve(t.rows.size());
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != expect) {
      throw DataError("frame row " + std::to_string(r + 2) + ": wrong field count");
    }
    f.row_ids.push_back(row[0]);
    bool ok = false;
    for (size_t c = 0; c < f.schema.size(); ++c) {
      double v = parse_double(row[1 + c], &ok);
      if (!ok) throw DataError("frame row " + std::to_string(r + 2) + ": bad value");
      f.data.push_back(v);
    }
    f.target.push_back(parse_double(row[expect - 1], &ok));
    if (!ok) throw DataError("frame row " + std::to_string(r + 2) + ": bad target");
  }
  f.validate();
  return f;
}

namespace {

const std::vector<std::string> kDayLevels = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

std::vector<std::string> hour_levels() {
  std::vector<std::string> out;
  out.reserve(24);
  for (int h = 0; h < 24; ++h) out.push_back(std::to_string(h));
  return out;
}

// 1970-01-01 was a Thursday.
int day_of_week(int64_t ts) {
  int64_t days = ts / 86400;
  return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

int hour_of_day(int64_t ts) { return static_cast<int>((ts % 86400) / 3600); }

std::string event_key(const std::string& user, const std::string& sku, int64_t ts) {
  return user + "\x1f" + sku + "\x1f" + std::to_string(ts);
}

// Shared assembly for the sales and choice frames; include_attributes toggles
// the two SKU attribute columns (excluded when they were used for clustering).
Frame build_order_frame(const RawTables& tables, const std::vector<ClickHistory>& deduped,
                        bool include_attributes,
                        const std::unordered_map<std::string, int>* sku_labels, int num_classes,
                        Diagnostics* diags) {
  std::unordered_map<std::string, const UserRecord*> user_of;
  for (const auto& u : tables.users) user_of[u.user_id] = &u;
  std::unordered_map<std::string, const SkuRecord*> sku_of;
  for (const auto& s : tables.skus) sku_of[s.sku_id] = &s;

  // Channel of each order, from the deduplicated histories' order events.
  std::unordered_map<std::string, std::string> channel_of;
  std::set<std::string> channel_values = {"unknown"};
  for (const auto& h : deduped) {
    for (const auto& ev : h.events) {
      if (ev.is_order) {
        channel_of[event_key(h.user_id, ev.sku_id, ev.timestamp)] = ev.channel;
      }
      channel_values.insert(ev.channel);
    }
  }

  // Level dictionaries are data-driven for free-form categoricals and fixed
  // where the coding is fixed, then persisted with the frame.
  std::set<std::string> gender_values = {"U"};
  std::set<std::string> marital_values = {"U"};
  for (const auto& u : tables.users) {
    gender_values.insert(u.gender);
    marital_values.insert(u.marital_status);
  }

  Frame f;
  auto num = [&f](const std::string& name) {
    f.schema.push_back({name, FeatureKind::kNumeric, {}, -1.0});
  };
  auto cat = [&f](const std::string& name, std::vector<std::string> levels) {
    f.schema.push_back({name, FeatureKind::kCategorical, std::move(levels), -1.0});
  };
  cat("gender", {gender_values.begin(), gender_values.end()});
  cat("marital_status", {marital_values.begin(), marital_values.end()});
  num("education");
  num("user_level");
  cat("plus_status", {"0", "1"});
  num("city_level");
  num("purchase_power");
  if (include_attributes) {
    num("attribute1");
    num("attribute2");
  }
  cat("product_type", {"1", "2"});
  num("original_price");
  num("promise");
  num("num_gifts");
  num("direct_discount_pct");
  num("quantity_discount_pct");
  num("bundle_discount_pct");
  num("coupon_discount_pct");
  cat("channel", {channel_values.begin(), channel_values.end()});
  cat("day_of_week", kDayLevels);
  cat("hour_of_day", hour_levels());

  const int gender_c = f.feature_index("gender");
  const int marital_c = f.feature_index("marital_status");
  const int channel_c = f.feature_index("channel");

  f.target_name = sku_labels == nullptr ? "quantity" : "sku_cluster";
  f.classification = sku_labels != nullptr;
  f.num_classes = sku_labels != nullptr ? num_classes : 0;

  std::unordered_map<std::string, int> line_counter;
  const int ncols = f.cols();
  std::vector<double> row(ncols, 0.0);

  for (const auto& o : tables.orders) {
    if (o.gift_flag) {
      throw ValidationError("frame build requires count_gifts to run first (gift row " +
                            o.order_id + ")");
    }
    int line = line_counter[o.order_id]++;

    double label = 0.0;
    if (sku_labels != nullptr) {
      auto it = sku_labels->find(o.sku_id);
      if (it == sku_labels->end()) {
        if (diags != nullptr) {
          diags->push_back({"orders", 0,
                            "order " + o.order_id + ": SKU " + o.sku_id +
                                " lacks attributes; dropped from choice frame"});
        }
        continue;
      }
      label = it->second;
    }

    DiscountRatios ratios;
    try {
      ratios = discount_ratios(o);
    } catch (const DataError& e) {
      if (diags != nullptr) diags->push_back({"orders", 0, e.what()});
      continue;
    }
    if (o.final_unit_price <= 0.0 && diags != nullptr) {
      diags->push_back({"orders", 0, "order " + o.order_id + ": paid row with final price 0"});
    }

    const UserRecord* u = nullptr;
    if (auto it = user_of.find(o.user_id); it != user_of.end()) u = it->second;
    const SkuRecord* s = nullptr;
    if (auto it = sku_of.find(o.sku_id); it != sku_of.end()) s = it->second;

    int c = 0;
    row[c++] = f.schema[gender_c].level_index(u != nullptr ? u->gender : "U");
    row[c++] = f.schema[marital_c].level_index(u != nullptr ? u->marital_status : "U");
    row[c++] = u != nullptr ? u->education : -1;
    row[c++] = u != nullptr ? u->user_level : -1;
    row[c++] = u != nullptr ? u->plus_status : 0;
    row[c++] = u != nullptr ? u->city_level : -1;
    row[c++] = u != nullptr ? u->purchase_power : -1;
    if (include_attributes) {
      row[c++] = (s != nullptr && s->attribute1.has_value()) ? *s->attribute1 : -1;
      row[c++] = (s != nullptr && s->attribute2.has_value()) ? *s->attribute2 : -1;
    }
    row[c++] = o.product_type == 2 ? 1 : (o.product_type == 1 ? 0 : -1);
    row[c++] = o.original_unit_price;
    row[c++] = o.promise_days;
    row[c++] = o.num_gifts;
    row[c++] = ratios.direct;
    row[c++] = ratios.quantity;
    row[c++] = ratios.bundle;
    row[c++] = ratios.coupon;
    auto ch = channel_of.find(event_key(o.user_id, o.sku_id, o.timestamp));
    row[c++] =
        f.schema[channel_c].level_index(ch != channel_of.end() ? ch->second : "unknown");
    row[c++] = day_of_week(o.timestamp);
    row[c++] = hour_of_day(o.timestamp);

    f.data.insert(f.data.end(), row.begin(), row.end());
    f.target.push_back(sku_labels != nullptr ? label : static_cast<double>(o.quantity));
    f.row_ids.push_back(o.order_id + ":" + std::to_string(line));
  }

  f.validate();
  return f;
}

}  // namespace

Frame build_sales_frame(const RawTables& tables, const std::vector<ClickHistory>& deduped,
                        Diagnostics* diags) {
  return build_order_frame(tables, deduped, true, nullptr, 0, diags);
}

Frame build_choice_frame(const RawTables& tables,
                         const std::unordered_map<std::string, int>& sku_labels, int num_classes,
                         const std::vector<ClickHistory>& deduped, Diagnostics* diags) {
  if (num_classes < 2) throw ValidationError("choice frame needs at least 2 classes");
  return build_order_frame(tables, deduped, false, &sku_labels, num_classes, diags);
}

}  // namespace glassbox
