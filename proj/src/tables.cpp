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

#include "glassbox/tables.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "glassbox/csv.hpp"

namespace glassbox {

namespace {

constexpr const char* kUserHeader[] = {"user_id", "age_band", "gender", "education",
                                       "marital_status", "plus_status", "user_level",
                                       "city_level", "purchase_power", "first_order_month"};
constexpr const char* kClickHeader[] = {"user_id", "sku_id", "timestamp", "channel"};
constexpr const char* kOrderHeader[] = {"order_id", "user_id", "sku_id", "timestamp",
                                        "quantity", "original_unit_price", "final_unit_price",
                                        "direct_discount", "quantity_discount", "bundle_discount",
                                        "coupon_discount", "gift_flag", "promise_days",
                                        "product_type"};
constexpr const char* kSkuHeader[] = {"sku_id", "attribute1", "attribute2"};

struct RowFail {
  std::string message;
};

class RowIssue {
 public:
  explicit RowIssue(std::string msg) : msg_(std::move(msg)) {}
  const std::string& message() const { return msg_; }

 private:
  std::string msg_;
};

template <size_t N>
void check_header(const CsvTable& t, const char* const (&expected)[N], const std::string& table,
                  const std::string& path) {
  if (t.header.size() != N) {
    throw DataError(table + ": unexpected column count in " + path + " (got " +
                    std::to_string(t.header.size()) + ", want " + std::to_string(N) + ")");
  }
  for (size_t i = 0; i < N; ++i) {
    if (t.header[i] != expected[i]) {
      throw DataError(table + ": unexpected column '" + t.header[i] + "' at position " +
                      std::to_string(i) + " in " + path + " (want '" + expected[i] + "')");
    }
  }
}

int parse_code(const std::string& s) {
  if (s.empty() || s == "N/A" || s == "NA" || s == "U") return -1;
  bool ok = false;
  int64_t v = parse_int(s, &ok);
  if (!ok) throw RowIssue("bad integer code '" + s + "'");
  return static_cast<int>(v);
}

double parse_money(const std::string& s) {
  bool ok = false;
  double v = parse_double(s, &ok);
  if (!ok) throw RowIssue("bad numeric value '" + s + "'");
  return v;
}

// Bad row: diagnostic + skip in lenient mode, DataError otherwise.
void reject(const std::string& table, int64_t line, const std::string& msg, bool lenient,
            ParseReport* report, int64_t* rejected) {
  if (!lenient) {
    throw DataError(table + " line " + std::to_string(line) + ": " + msg);
  }
  ++*rejected;
  if (report != nullptr) report->diagnostics.push_back({table, line, msg});
}

}  // namespace

RawTables parse_tables(const TablePaths& paths, const ParseOptions& opts, ParseReport* report) {
  auto month_start = parse_month_start(opts.month);
  if (!month_start.has_value()) {
    throw ValidationError("bad month window '" + opts.month + "' (want YYYY-MM)");
  }
  const int64_t window_lo = *month_start;
  const int64_t window_hi = month_end(window_lo);

  RawTables out;
  ParseReport local;
  ParseReport* rep = report != nullptr ? report : &local;
  rep->diagnostics.clear();
  rep->accepted = {};
  rep->rejected = {};

  {
    CsvTable t = read_csv(paths.users);
    check_header(t, kUserHeader, "users", paths.users);
    out.users.reserve(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      const int64_t line = static_cast<int64_t>(i) + 2;
      try {
        if (r.size() != 10) throw RowIssue("wrong field count");
        UserRecord u;
        u.user_id = r[0];
        if (u.user_id.empty()) throw RowIssue("empty user_id");
        u.age_band = r[1].empty() ? "U" : r[1];
        u.gender = r[2].empty() ? "U" : r[2];
        u.education = parse_code(r[3]);
        u.marital_status = r[4].empty() ? "U" : r[4];
        u.plus_status = parse_code(r[5]) == 1 ? 1 : 0;
        u.user_level = parse_code(r[6]);
        u.city_level = parse_code(r[7]);
        u.purchase_power = parse_code(r[8]);
        u.first_order_month = r[9];
        out.users.push_back(std::move(u));
        ++rep->accepted.users;
      } catch (const RowIssue& e) {
        reject("users", line, e.message(), opts.lenient, rep, &rep->rejected.users);
      }
    }
  }

  {
    CsvTable t = read_csv(paths.clicks);
    check_header(t, kClickHeader, "clicks", paths.clicks);
    out.clicks.reserve(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      const int64_t line = static_cast<int64_t>(i) + 2;
      try {
        if (r.size() != 4) throw RowIssue("wrong field count");
        ClickRecord c;
        c.user_id = r[0];
        c.sku_id = r[1];
        if (c.user_id.empty() || c.sku_id.empty()) throw RowIssue("empty id");
        auto ts = parse_iso8601(r[2]);
        if (!ts.has_value()) throw RowIssue("bad timestamp '" + r[2] + "'");
        if (*ts < window_lo || *ts >= window_hi) {
          throw RowIssue("timestamp outside month window " + opts.month);
        }
        c.timestamp = *ts;
        c.channel = r[3].empty() ? "unknown" : r[3];
        out.clicks.push_back(std::move(c));
        ++rep->accepted.clicks;
      } catch (const RowIssue& e) {
        reject("clicks", line, e.message(), opts.lenient, rep, &rep->rejected.clicks);
      }
    }
  }

  std::unordered_set<std::string> known_users;
  known_users.reserve(out.users.size() * 2);
  for (const auto& u : out.users) known_users.insert(u.user_id);

  {
    CsvTable t = read_csv(paths.orders);
    check_header(t, kOrderHeader, "orders", paths.orders);
    out.orders.reserve(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      const int64_t line = static_cast<int64_t>(i) + 2;
      try {
        if (r.size() != 14) throw RowIssue("wrong field count");
        OrderRecord o;
        o.order_id = r[0];
        o.user_id = r[1];
        o.sku_id = r[2];
        if (o.order_id.empty() || o.user_id.empty() || o.sku_id.empty()) {
          throw RowIssue("empty id");
        }
        auto ts = parse_iso8601(r[3]);
        if (!ts.has_value()) throw RowIssue("bad timestamp '" + r[3] + "'");
        if (*ts < window_lo || *ts >= window_hi) {
          throw RowIssue("timestamp outside month window " + opts.month);
        }
        o.timestamp = *ts;
        bool ok = false;
        o.quantity = static_cast<int>(parse_int(r[4], &ok));
        if (!ok) throw RowIssue("bad quantity '" + r[4] + "'");
        o.original_unit_price = parse_money(r[5]);
        o.final_unit_price = parse_money(r[6]);
        o.direct_discount = parse_money(r[7]);
        o.quantity_discount = parse_money(r[8]);
        o.bundle_discount = parse_money(r[9]);
        o.coupon_discount = parse_money(r[10]);
        o.gift_flag = parse_code(r[11]) == 1;
        o.promise_days = parse_code(r[12]);
        o.product_type = parse_code(r[13]);
        if (!o.gift_flag && o.quantity < 1) throw RowIssue("non-gift row with quantity < 1");
        if (o.gift_flag && o.quantity < 1) throw RowIssue("gift row with quantity < 1");
        if (!known_users.count(o.user_id)) {
          rep->diagnostics.push_back({"orders", line, "order references user '" + o.user_id +
                                                          "' absent from users table"});
        }
        out.orders.push_back(std::move(o));
        ++rep->accepted.orders;
      } catch (const RowIssue& e) {
        reject("orders", line, e.message(), opts.lenient, rep, &rep->rejected.orders);
      }
    }
  }

  {
    CsvTable t = read_csv(paths.skus);
    check_header(t, kSkuHeader, "skus", paths.skus);
    out.skus.reserve(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      const int64_t line = static_cast<int64_t>(i) + 2;
      try {
        if (r.size() != 3) throw RowIssue("wrong field count");
        SkuRecord s;
        s.sku_id = r[0];
        if (s.sku_id.empty()) throw RowIssue("empty sku_id");
        for (int a = 0; a < 2; ++a) {
          const std::string& field = r[1 + a];
          if (field.empty() || field == "N/A" || field == "NA") continue;
          bool ok = false;
          double v = parse_double(field, &ok);
          if (!ok) throw RowIssue("bad attribute value '" + field + "'");
          if (a == 0) {
            s.attribute1 = v;
          } else {
            s.attribute2 = v;
          }
        }
        out.skus.push_back(std::move(s));
        ++rep->accepted.skus;
      } catch (const RowIssue& e) {
        reject("skus", line, e.message(), opts.lenient, rep, &rep->rejected.skus);
      }
    }
  }

  return out;
}

namespace {

struct IndexedEvent {
  ClickEvent ev;
  int64_t input_order;  // stable tiebreak
};

std::vector<ClickHistory> finalize_histories(
    std::map<std::string, std::vector<IndexedEvent>>& per_user,
    const std::unordered_set<std::string>& buyers) {
  std::vector<ClickHistory> out;
  out.reserve(per_user.size());
  for (auto& [user, evs] : per_user) {
    std::stable_sort(evs.begin(), evs.end(), [](const IndexedEvent& a, const IndexedEvent& b) {
      if (a.ev.timestamp != b.ev.timestamp) return a.ev.timestamp < b.ev.timestamp;
      return a.input_order < b.input_order;
    });
    ClickHistory h;
    h.user_id = user;
    h.buyer = buyers.count(user) > 0;
    h.events.reserve(evs.size());
    for (auto& e : evs) h.events.push_back(std::move(e.ev));
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

std::vector<ClickHistory> raw_histories(const RawTables& tables) {
  std::map<std::string, std::vector<IndexedEvent>> per_user;
  std::unordered_set<std::string> buyers;
  int64_t seq = 0;
  for (const auto& c : tables.clicks) {
    per_user[c.user_id].push_back({{c.timestamp, c.sku_id, c.channel, false}, seq++});
  }
  for (const auto& o : tables.orders) {
    buyers.insert(o.user_id);
    per_user[o.user_id].push_back({{o.timestamp, o.sku_id, "unknown", true}, seq++});
  }
  return finalize_histories(per_user, buyers);
}

std::vector<ClickHistory> dedup_clicks(const RawTables& tables) {
  // Group clicks and orders per user, preserving input order for tiebreaks.
  struct UserClicks {
    std::vector<int64_t> click_idx;
  };
  std::map<std::string, std::vector<int64_t>> clicks_of;
  for (int64_t i = 0; i < static_cast<int64_t>(tables.clicks.size()); ++i) {
    clicks_of[tables.clicks[i].user_id].push_back(i);
  }
  std::map<std::string, std::vector<int64_t>> orders_of;
  for (int64_t i = 0; i < static_cast<int64_t>(tables.orders.size()); ++i) {
    orders_of[tables.orders[i].user_id].push_back(i);
  }

  std::map<std::string, std::vector<IndexedEvent>> per_user;
  std::unordered_set<std::string> buyers;
  int64_t seq_base = static_cast<int64_t>(tables.clicks.size());

  // Non-buyers keep everything.
  for (auto& [user, idxs] : clicks_of) {
    if (orders_of.count(user)) continue;
    auto& evs = per_user[user];
    for (int64_t i : idxs) {
      const auto& c = tables.clicks[i];
      evs.push_back({{c.timestamp, c.sku_id, c.channel, false}, i});
    }
  }

  for (auto& [user, oidxs] : orders_of) {
    buyers.insert(user);
    auto& evs = per_user[user];
    const auto cit = clicks_of.find(user);
    const std::vector<int64_t> no_clicks;
    const std::vector<int64_t>& cidxs = cit != clicks_of.end() ? cit->second : no_clicks;

    int64_t last_order_ts = 0;
    for (int64_t oi : oidxs) last_order_ts = std::max(last_order_ts, tables.orders[oi].timestamp);

    std::unordered_set<int64_t> kept_clicks;
    for (int64_t oi : oidxs) {
      const auto& o = tables.orders[oi];
      // Last click on the ordered SKU at or before the order; ties resolved
      // by the latest input position.
      int64_t best = -1;
      for (int64_t ci : cidxs) {
        const auto& c = tables.clicks[ci];
        if (c.sku_id != o.sku_id || c.timestamp > o.timestamp) continue;
        if (best < 0 || c.timestamp > tables.clicks[best].timestamp ||
            (c.timestamp == tables.clicks[best].timestamp && ci > best)) {
          best = ci;
        }
      }
      std::string channel = "unknown";
      if (best >= 0) {
        kept_clicks.insert(best);
        channel = tables.clicks[best].channel;
      }
      evs.push_back({{o.timestamp, o.sku_id, channel, true}, seq_base + oi});
    }

    for (int64_t ci : cidxs) {
      const auto& c = tables.clicks[ci];
      if (kept_clicks.count(ci) || c.timestamp > last_order_ts) {
        evs.push_back({{c.timestamp, c.sku_id, c.channel, false}, ci});
      }
    }
  }

  return finalize_histories(per_user, buyers);
}

RawTables count_gifts(const RawTables& tables, GiftReport* report) {
  GiftReport local;
  GiftReport* rep = report != nullptr ? report : &local;
  rep->diagnostics.clear();
  rep->gift_only_orders_removed = 0;
  rep->gift_units_attached = 0;

  // order_id -> row indexes, preserving input order
  std::unordered_map<std::string, std::vector<int64_t>> rows_of;
  std::vector<std::string> order_sequence;
  for (int64_t i = 0; i < static_cast<int64_t>(tables.orders.size()); ++i) {
    auto [it, inserted] = rows_of.try_emplace(tables.orders[i].order_id);
    if (inserted) order_sequence.push_back(tables.orders[i].order_id);
    it->second.push_back(i);
  }

  RawTables out;
  out.users = tables.users;
  out.clicks = tables.clicks;
  out.skus = tables.skus;
  out.orders.reserve(tables.orders.size());

  for (const auto& oid : order_sequence) {
    const auto& idxs = rows_of[oid];
    int gift_units = 0;
    std::vector<int64_t> paid;
    for (int64_t i : idxs) {
      const auto& row = tables.orders[i];
      if (row.gift_flag) {
        gift_units += row.quantity;
      } else {
        paid.push_back(i);
      }
    }
    if (paid.empty()) {
      if (gift_units > 0) ++rep->gift_only_orders_removed;
      continue;
    }
    int64_t carrier = paid[0];
    if (paid.size() > 1 && gift_units > 0) {
      for (int64_t i : paid) {
        if (tables.orders[i].original_unit_price >
            tables.orders[carrier].original_unit_price) {
          carrier = i;
        }
      }
      rep->diagnostics.push_back(
          {"orders", 0,
           "order " + oid + " has " + std::to_string(paid.size()) +
               " paid rows with gifts; attached to highest-priced row"});
    }
    for (int64_t i : paid) {
      OrderRecord row = tables.orders[i];
      row.gift_flag = false;
      row.num_gifts = (i == carrier) ? gift_units : 0;
      out.orders.push_back(std::move(row));
    }
    rep->gift_units_attached += gift_units;
  }
  return out;
}

DiscountRatios discount_ratios(const OrderRecord& row) {
  if (row.original_unit_price <= 0.0) {
    throw DataError("discount ratios undefined: original unit price <= 0 on order " +
                    row.order_id);
  }
  auto ratio = [&](double v) {
    double r = v / row.original_unit_price;
    if (r < 0.0) r = 0.0;
    if (r > 1.0) r = 1.0;
    return r;
  };
  return {ratio(row.direct_discount), ratio(row.quantity_discount), ratio(row.bundle_discount),
          ratio(row.coupon_discount)};
}

}  // namespace glassbox
