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

#include "glassbox/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "glassbox/csv.hpp"
#include "glassbox/rng.hpp"

namespace glassbox {

using nlohmann::json;

namespace {

constexpr double kZ90 = 1.2815515655446004;  // standard normal 90th percentile

constexpr uint64_t kSaltUser = 0x11;
constexpr uint64_t kSaltSku = 0x22;
constexpr uint64_t kSaltOrder = 0x33;
constexpr uint64_t kSaltBulk = 0x44;
constexpr uint64_t kSaltPick = 0x55;
constexpr uint64_t kSaltClicks = 0x66;
constexpr uint64_t kSaltGifts = 0x77;

const char* kAgeBands[] = {"<16", "16-25", "26-35", "36-45", "46-55", ">55", "U"};
const char* kGenders[] = {"F", "M", "U"};
const int kEducation[] = {-1, 1, 2, 3, 4};
const char* kMarital[] = {"S", "M", "U"};
const int kUserLevels[] = {-1, 0, 1, 2, 3, 4, 10};
const int kCity[] = {-1, 1, 2, 3, 4, 5};
const int kPurchasePower[] = {-1, 1, 2, 3, 4, 5};
const char* kChannels[] = {"app", "mobile", "pc", "wechat"};
const double kChannelPrior[] = {0.25, 0.30, 0.35, 0.10};

void check_prior(const std::vector<double>& p, size_t want, const char* name) {
  if (p.size() != want) {
    throw ValidationError(std::string("synth config: ") + name + " needs " +
                          std::to_string(want) + " entries");
  }
  double total = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ValidationError(std::string("synth config: negative mass in ") + name);
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-6) {
    throw ValidationError(std::string("synth config: ") + name + " must sum to 1");
  }
}

double money(double v) { return std::round(v * 100.0) / 100.0; }

struct SkuInfo {
  std::string id;
  int cluster = 0;
  std::optional<double> attr1, attr2;
  double price = 0.0;
  int product_type = 1;
};

struct BuyerPlan {
  bool buyer = false;
  bool order_first = false;
  double intended_spend = 0.0;
  int promise = -1;
  double direct = 0.0, quantity_disc = 0.0, coupon = 0.0;  // ratios
  double score = 0.0;
  int user_level = -1;
};

std::string user_id_of(int64_t u) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%07lld", static_cast<long long>(u));
  return buf;
}

std::string sku_id_of(int64_t s) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%05lld", static_cast<long long>(s));
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_users < 1) throw ValidationError("synth config: n_users must be positive");
  if (buyer_fraction < 0.0 || buyer_fraction > 1.0) {
    throw ValidationError("synth config: buyer_fraction must lie in [0, 1]");
  }
  if (!parse_month_start(month).has_value()) {
    throw ValidationError("synth config: bad month '" + month + "'");
  }
  check_prior(order_count_mass, 10, "order_count_mass");
  if (spend_median <= 0.0 || spend_p90 <= spend_median) {
    throw ValidationError("synth config: need 0 < spend_median < spend_p90");
  }
  for (const auto& cdf : {buyer_span_cdf, nonbuyer_span_cdf}) {
    if (!(cdf[0] > 0.0 && cdf[0] <= cdf[1] && cdf[1] <= cdf[2] && cdf[2] <= 1.0)) {
      throw ValidationError("synth config: span CDF targets must ascend within (0, 1]");
    }
  }
  check_prior(age_prior, 7, "age_prior");
  check_prior(gender_prior, 3, "gender_prior");
  check_prior(education_prior, 5, "education_prior");
  check_prior(marital_prior, 3, "marital_prior");
  check_prior(user_level_prior, 7, "user_level_prior");
  check_prior(city_prior, 6, "city_prior");
  check_prior(purchase_power_prior, 6, "purchase_power_prior");
  check_prior(promise_prior, 9, "promise_prior");
  if (n_skus < 10) throw ValidationError("synth config: n_skus must be at least 10");
  const size_t k = cluster_weights.size();
  if (k < 2 || attr1_centers.size() != k || attr2_centers.size() != k ||
      price_base.size() != k || type2_price_factor.size() != k) {
    throw ValidationError("synth config: cluster arrays must share one length >= 2");
  }
  if (response.bulk_cap <= 0.0 || response.bulk_cap > 1.0) {
    throw ValidationError("synth config: bulk_cap must lie in (0, 1]");
  }
}

namespace {

// Piecewise span sampler honoring the cohort CDF targets at 1h/1d/1w.
double sample_span_seconds(Rng& rng, const std::array<double, 3>& cdf, double month_seconds,
                           double single_event_rate) {
  const double u = rng.uniform();
  if (u < cdf[0]) {
    if (rng.uniform() < single_event_rate) return 0.0;
    return rng.uniform(0.0, 3600.0);
  }
  auto log_uniform = [&rng](double lo, double hi) {
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
  };
  if (u < cdf[1]) return log_uniform(3600.0, 86400.0);
  if (u < cdf[2]) return log_uniform(86400.0, 604800.0);
  return log_uniform(604800.0, std::max(604801.0, month_seconds - 1.0));
}

int sample_promise(Rng& rng, const std::vector<double>& prior) {
  int idx = rng.categorical(prior);
  return idx == 0 ? -1 : idx;
}

double ratio_draw(Rng& rng, double rate, double max_ratio) {
  if (rng.uniform() >= rate) return 0.0;
  return rng.uniform(0.01, max_ratio);
}

}  // namespace

std::unordered_map<std::string, int> GroundTruth::label_map() const {
  std::unordered_map<std::string, int> out;
  for (size_t i = 0; i < sku_ids.size(); ++i) {
    if (sku_attrs_complete[i]) out.emplace(sku_ids[i], sku_cluster[i]);
  }
  return out;
}

SynthResult generate(const SynthConfig& cfg) {
  cfg.validate();
  const int64_t month_start = *parse_month_start(cfg.month);
  const int64_t month_stop = month_end(month_start);
  const double month_seconds = static_cast<double>(month_stop - month_start);
  const int K = static_cast<int>(cfg.cluster_weights.size());

  Rng root(cfg.seed);
  SynthResult out;
  GroundTruth& truth = out.truth;
  truth.response = cfg.response;
  truth.order_lines_per_cluster.assign(K, 0);

  // ---- SKUs ----
  std::vector<SkuInfo> skus(cfg.n_skus);
  for (int64_t s = 0; s < cfg.n_skus; ++s) {
    Rng rng = root.fork(kSaltSku * 0x10000001ULL + s);
    SkuInfo& sk = skus[s];
    sk.id = sku_id_of(s);
    sk.cluster = rng.categorical(cfg.cluster_weights);
    double a1 = std::clamp(rng.normal(cfg.attr1_centers[sk.cluster], cfg.attr1_std), 1.0, 4.0);
    double a2 = std::clamp(rng.normal(cfg.attr2_centers[sk.cluster], cfg.attr2_std), 30.0, 100.0);
    bool miss1 = rng.bernoulli(cfg.attr1_missing_rate);
    bool miss2 = rng.bernoulli(cfg.attr2_missing_rate);
    if (!miss1) sk.attr1 = std::round(a1 * 100.0) / 100.0;
    if (!miss2) sk.attr2 = std::round(a2 * 100.0) / 100.0;
    sk.product_type = rng.bernoulli(cfg.type2_rate) ? 2 : 1;
    double base = cfg.price_base[sk.cluster];
    if (sk.product_type == 2) base *= cfg.type2_price_factor[sk.cluster];
    sk.price = money(std::max(5.0, base * std::exp(rng.normal(0.0, cfg.price_sigma))));

    truth.sku_ids.push_back(sk.id);
    truth.sku_cluster.push_back(sk.cluster);
    truth.sku_attrs_complete.push_back(!miss1 && !miss2);
  }
  std::vector<int64_t> price_order(cfg.n_skus);
  std::iota(price_order.begin(), price_order.end(), 0);
  std::sort(price_order.begin(), price_order.end(), [&](int64_t a, int64_t b) {
    if (skus[a].price != skus[b].price) return skus[a].price < skus[b].price;
    return a < b;
  });
  std::vector<double> sorted_prices(cfg.n_skus);
  for (int64_t i = 0; i < cfg.n_skus; ++i) sorted_prices[i] = skus[price_order[i]].price;

  auto pick_sku_near = [&](double target_price, Rng& rng) -> int64_t {
    auto it = std::lower_bound(sorted_prices.begin(), sorted_prices.end(), target_price);
    int64_t idx = it - sorted_prices.begin();
    if (idx >= cfg.n_skus) idx = cfg.n_skus - 1;
    const int j = cfg.price_search_jitter;
    int64_t lo = std::max<int64_t>(0, idx - j);
    int64_t hi = std::min<int64_t>(cfg.n_skus - 1, idx + j);
    return price_order[lo + static_cast<int64_t>(rng.uniform_index(hi - lo + 1))];
  };

  // ---- users: demographics + buyer order plans (pass A) ----
  const double sigma = std::log(cfg.spend_p90 / cfg.spend_median) / kZ90;
  const double mu = std::log(cfg.spend_median);

  std::vector<UserRecord> users(cfg.n_users);
  std::vector<BuyerPlan> plans(cfg.n_users);
  double score_total = 0.0;
  int64_t buyer_count = 0;

  for (int64_t u = 0; u < cfg.n_users; ++u) {
    Rng rng = root.fork(kSaltUser * 0x10000001ULL + u);
    UserRecord& ur = users[u];
    ur.user_id = user_id_of(u);
    ur.age_band = kAgeBands[rng.categorical(cfg.age_prior)];
    ur.gender = kGenders[rng.categorical(cfg.gender_prior)];
    ur.education = kEducation[rng.categorical(cfg.education_prior)];
    ur.marital_status = kMarital[rng.categorical(cfg.marital_prior)];
    ur.plus_status = rng.bernoulli(cfg.plus_rate) ? 1 : 0;
    ur.user_level = kUserLevels[rng.categorical(cfg.user_level_prior)];
    ur.city_level = kCity[rng.categorical(cfg.city_prior)];
    ur.purchase_power = kPurchasePower[rng.categorical(cfg.purchase_power_prior)];

    BuyerPlan& plan = plans[u];
    plan.buyer = rng.bernoulli(cfg.buyer_fraction);
    plan.user_level = ur.user_level;
    if (!plan.buyer) {
      ur.first_order_month = "";
      continue;
    }
    ++buyer_count;
    if (ur.user_level == -1) {
      ur.first_order_month = cfg.month;
    } else {
      int months_back = 1 + static_cast<int>(rng.uniform_index(120));
      int64_t ym = (2018 * 12 + 2) - months_back;  // 2018-03 minus months_back
      char buf[8];
      std::snprintf(buf, sizeof(buf), "%04lld-%02lld", static_cast<long long>(ym / 12),
                    static_cast<long long>(ym % 12 + 1));
      ur.first_order_month = buf;
    }

    Rng org = root.fork(kSaltOrder * 0x10000001ULL + u);
    plan.order_first = org.bernoulli(cfg.order_first_fraction);
    plan.intended_spend = std::exp(org.normal(mu, sigma));
    plan.promise = sample_promise(org, cfg.promise_prior);
    plan.direct = ratio_draw(org, cfg.direct_rate, cfg.direct_max);
    plan.quantity_disc = ratio_draw(org, cfg.quantity_rate, cfg.quantity_max);
    plan.coupon = ratio_draw(org, cfg.coupon_rate, cfg.coupon_max);

    const auto& rs = cfg.response;
    double promise_n = plan.promise < 0 ? 0.0 : plan.promise / 8.0;
    double ulevel_n = ur.user_level == 10 ? 1.0 : std::max(0, ur.user_level) / 4.0;
    plan.score = std::exp(rs.promise_weight * promise_n + rs.userlevel_weight * ulevel_n +
                          rs.interaction_weight * promise_n * ulevel_n +
                          rs.discount_weight * (plan.direct + plan.quantity_disc));
    score_total += plan.score;
  }
  truth.buyers = buyer_count;

  // Calibrate bulk probabilities so the mean matches the non-unit bucket mass.
  const double tail_mass = 1.0 - cfg.order_count_mass[0];
  double lambda = 0.0;
  if (buyer_count > 0 && tail_mass > 0.0) {
    double lo = 0.0, hi = 1.0;
    auto mean_q = [&](double l) {
      double acc = 0.0;
      for (int64_t u = 0; u < cfg.n_users; ++u) {
        if (plans[u].buyer) acc += std::min(cfg.response.bulk_cap, l * plans[u].score);
      }
      return acc / static_cast<double>(buyer_count);
    };
    while (mean_q(hi) < tail_mass && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mean_q(mid) < tail_mass) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lambda = 0.5 * (lo + hi);
  }
  truth.bulk_calibration = lambda;

  std::vector<double> tail_bucket_mass(cfg.order_count_mass.begin() + 1,
                                       cfg.order_count_mass.end());

  // ---- pass B: emit clicks and orders ----
  RawTables& tables = out.tables;
  tables.users = users;
  for (const auto& sk : skus) {
    tables.skus.push_back({sk.id, sk.attr1, sk.attr2});
  }

  for (int64_t u = 0; u < cfg.n_users; ++u) {
    const BuyerPlan& plan = plans[u];
    const UserRecord& ur = users[u];
    Rng crng = root.fork(kSaltClicks * 0x10000001ULL + u);

    const auto& span_cdf = plan.buyer ? cfg.buyer_span_cdf : cfg.nonbuyer_span_cdf;
    double span = sample_span_seconds(crng, span_cdf, month_seconds,
                                      plan.buyer ? 0.0 : cfg.single_event_rate);
    int64_t t0 = month_start +
                 static_cast<int64_t>(crng.uniform() * (month_seconds - span - 1.0));
    int64_t t_last = t0 + static_cast<int64_t>(span);

    auto click_channel = [&crng]() {
      return kChannels[crng.categorical({kChannelPrior[0], kChannelPrior[1], kChannelPrior[2],
                                         kChannelPrior[3]})];
    };
    auto mid_time = [&](double frac_lo, double frac_hi) {
      double t = crng.uniform(frac_lo, frac_hi);
      if (span > 86400.0 && crng.uniform() < cfg.daily_period_amplitude) {
        // revisit at roughly the same time of day
        double day = std::floor(t * span / 86400.0);
        double jitter = crng.normal(0.0, 1200.0);
        double cand = day * 86400.0 + jitter;
        if (cand > 0.0 && cand < span) return t0 + static_cast<int64_t>(cand);
      }
      return t0 + static_cast<int64_t>(t * span);
    };

    if (!plan.buyer) {
      int nclicks = span <= 0.0 ? 1 : 2 + crng.poisson(cfg.nonbuyer_click_mean);
      for (int c = 0; c < nclicks; ++c) {
        int64_t t = c == 0 ? t0 : (c == 1 && span > 0.0 ? t_last : mid_time(0.02, 0.98));
        int64_t sk = static_cast<int64_t>(crng.uniform_index(cfg.n_skus));
        tables.clicks.push_back({ur.user_id, skus[sk].id, t, click_channel()});
      }
      continue;
    }

    // bulk draw and total units
    Rng brng = root.fork(kSaltBulk * 0x10000001ULL + u);
    double q = std::min(cfg.response.bulk_cap, lambda * plan.score);
    int total_units = 1;
    if (tail_mass > 0.0 && brng.bernoulli(q)) {
      int bucket = brng.categorical(tail_bucket_mass);  // 0 -> 2 units ... 8 -> 10+
      total_units = bucket + 2;
      if (bucket == 8) total_units = 10 + brng.poisson(cfg.response.tail_mean);
    }
    ++truth.bucket_counts[std::min(total_units, 10) - 1];

    // order lines
    Rng prng = root.fork(kSaltPick * 0x10000001ULL + u);
    struct Line {
      int64_t sku;
      int units;
    };
    std::vector<Line> lines;
    bool split = total_units >= 2 && prng.bernoulli(cfg.split_order_rate);
    const double keep_ratio = 1.0 - std::min(0.9, plan.direct + plan.quantity_disc + plan.coupon);
    if (split) {
      double tp = plan.intended_spend / (total_units * keep_ratio);
      lines.push_back({pick_sku_near(tp, prng), total_units - 1});
      lines.push_back({pick_sku_near(tp, prng), 1});
    } else {
      double tp = plan.intended_spend / (total_units * keep_ratio);
      lines.push_back({pick_sku_near(tp, prng), total_units});
    }

    // click timeline: first click, browse, pre-order clicks on the ordered
    // sku, then the order(s) close the span
    int64_t order_time = plan.order_first ? t0 : t_last;
    if (!plan.order_first) {
      tables.clicks.push_back(
          {ur.user_id,
           skus[static_cast<int64_t>(crng.uniform_index(cfg.n_skus))].id,
           t0, click_channel()});
      int extra = crng.poisson(cfg.order_extra_click_mean);
      for (int c = 0; c < extra; ++c) {
        tables.clicks.push_back(
            {ur.user_id,
             skus[static_cast<int64_t>(crng.uniform_index(cfg.n_skus))].id,
             mid_time(0.05, 0.9), click_channel()});
      }
      // repeated clicks on the ordered sku; dedup keeps only the last
      int reps = 1 + static_cast<int>(crng.uniform_index(3));
      for (int c = 0; c < reps; ++c) {
        tables.clicks.push_back({ur.user_id, skus[lines[0].sku].id, mid_time(0.3, 0.999),
                                 click_channel()});
      }
    } else if (span > 0.0) {
      tables.clicks.push_back(
          {ur.user_id,
           skus[static_cast<int64_t>(crng.uniform_index(cfg.n_skus))].id,
           t_last, click_channel()});
    }

    Rng grng = root.fork(kSaltGifts * 0x10000001ULL + u);
    int order_seq = 0;
    auto emit_order = [&](int64_t sku_idx, int units, int64_t when, bool with_gifts) {
      const SkuInfo& sk = skus[sku_idx];
      OrderRecord o;
      o.order_id = ur.user_id + "x" + std::to_string(order_seq++);
      o.user_id = ur.user_id;
      o.sku_id = sk.id;
      o.timestamp = when;
      o.quantity = units;
      o.original_unit_price = sk.price;
      double bundle_rate = sk.cluster == 2 ? cfg.bundle_rate_cluster2 : cfg.bundle_rate;
      double bundle = ratio_draw(grng, bundle_rate, cfg.bundle_max);
      double total_ratio = std::min(0.95, plan.direct + plan.quantity_disc + bundle + plan.coupon);
      double scale = plan.direct + plan.quantity_disc + bundle + plan.coupon > 0.0
                         ? total_ratio / (plan.direct + plan.quantity_disc + bundle + plan.coupon)
                         : 0.0;
      o.direct_discount = money(sk.price * plan.direct * scale);
      o.quantity_discount = money(sk.price * plan.quantity_disc * scale);
      o.bundle_discount = money(sk.price * bundle * scale);
      o.coupon_discount = money(sk.price * plan.coupon * scale);
      double final_price = sk.price - o.direct_discount - o.quantity_discount -
                           o.bundle_discount - o.coupon_discount;
      o.final_unit_price = money(std::max(0.01, final_price));
      o.gift_flag = false;
      o.promise_days = plan.promise;
      o.product_type = sk.product_type;
      tables.orders.push_back(o);
      ++truth.paid_lines;
      if (truth.sku_attrs_complete[sku_idx]) {
        ++truth.order_lines_per_cluster[sk.cluster];
      }

      if (with_gifts && grng.bernoulli(cfg.gift_order_rate)) {
        int gifts = 1 + static_cast<int>(grng.uniform_index(2));
        for (int gi = 0; gi < gifts; ++gi) {
          OrderRecord g;
          g.order_id = o.order_id;
          g.user_id = ur.user_id;
          g.sku_id = skus[static_cast<int64_t>(grng.uniform_index(cfg.n_skus))].id;
          g.timestamp = when;
          g.quantity = 1 + static_cast<int>(grng.uniform_index(2));
          g.original_unit_price = 0.0;
          g.final_unit_price = 0.0;
          g.gift_flag = true;
          g.promise_days = plan.promise;
          g.product_type = o.product_type;
          truth.gift_units += g.quantity;
          tables.orders.push_back(std::move(g));
        }
      }
    };

    emit_order(lines[0].sku, lines[0].units, order_time, true);
    if (lines.size() > 1) {
      int64_t t2 = plan.order_first
                       ? order_time
                       : t0 + static_cast<int64_t>(0.8 * span);
      emit_order(lines[1].sku, lines[1].units, t2, false);
    }
    if (plan.order_first) ++truth.order_first_users;

    if (grng.bernoulli(cfg.gift_only_order_rate)) {
      OrderRecord g;
      g.order_id = ur.user_id + "x" + std::to_string(order_seq++);
      g.user_id = ur.user_id;
      g.sku_id = skus[static_cast<int64_t>(grng.uniform_index(cfg.n_skus))].id;
      g.timestamp = order_time;
      g.quantity = 1;
      g.original_unit_price = 0.0;
      g.final_unit_price = 0.0;
      g.gift_flag = true;
      g.promise_days = plan.promise;
      g.product_type = 1;
      tables.orders.push_back(std::move(g));
      ++truth.gift_only_orders;
    }
  }

  truth.counts.users = static_cast<int64_t>(tables.users.size());
  truth.counts.clicks = static_cast<int64_t>(tables.clicks.size());
  truth.counts.orders = static_cast<int64_t>(tables.orders.size());
  truth.counts.skus = static_cast<int64_t>(tables.skus.size());
  return out;
}

namespace {

json response_to_json(const ResponseSpec& r) {
  return json{{"promise_weight", r.promise_weight},
              {"userlevel_weight", r.userlevel_weight},
              {"interaction_weight", r.interaction_weight},
              {"discount_weight", r.discount_weight},
              {"bulk_cap", r.bulk_cap},
              {"tail_mean", r.tail_mean}};
}

void response_from_json(const json& j, ResponseSpec& r) {
  if (j.contains("promise_weight")) r.promise_weight = j["promise_weight"].get<double>();
  if (j.contains("userlevel_weight")) r.userlevel_weight = j["userlevel_weight"].get<double>();
  if (j.contains("interaction_weight")) {
    r.interaction_weight = j["interaction_weight"].get<double>();
  }
  if (j.contains("discount_weight")) r.discount_weight = j["discount_weight"].get<double>();
  if (j.contains("bulk_cap")) r.bulk_cap = j["bulk_cap"].get<double>();
  if (j.contains("tail_mean")) r.tail_mean = j["tail_mean"].get<double>();
}

}  // namespace

std::string SynthConfig::to_json() const {
  json js;
  js["n_users"] = n_users;
  js["buyer_fraction"] = buyer_fraction;
  js["order_first_fraction"] = order_first_fraction;
  js["month"] = month;
  js["order_count_mass"] = order_count_mass;
  js["spend_median"] = spend_median;
  js["spend_p90"] = spend_p90;
  js["buyer_span_cdf"] = buyer_span_cdf;
  js["nonbuyer_span_cdf"] = nonbuyer_span_cdf;
  js["single_event_rate"] = single_event_rate;
  js["daily_period_amplitude"] = daily_period_amplitude;
  js["age_prior"] = age_prior;
  js["gender_prior"] = gender_prior;
  js["education_prior"] = education_prior;
  js["marital_prior"] = marital_prior;
  js["plus_rate"] = plus_rate;
  js["user_level_prior"] = user_level_prior;
  js["city_prior"] = city_prior;
  js["purchase_power_prior"] = purchase_power_prior;
  js["n_skus"] = n_skus;
  js["attr1_missing_rate"] = attr1_missing_rate;
  js["attr2_missing_rate"] = attr2_missing_rate;
  js["cluster_weights"] = cluster_weights;
  js["attr1_centers"] = attr1_centers;
  js["attr2_centers"] = attr2_centers;
  js["attr1_std"] = attr1_std;
  js["attr2_std"] = attr2_std;
  js["price_base"] = price_base;
  js["type2_price_factor"] = type2_price_factor;
  js["price_sigma"] = price_sigma;
  js["type2_rate"] = type2_rate;
  js["promise_prior"] = promise_prior;
  js["direct_rate"] = direct_rate;
  js["direct_max"] = direct_max;
  js["quantity_rate"] = quantity_rate;
  js["quantity_max"] = quantity_max;
  js["bundle_rate"] = bundle_rate;
  js["bundle_max"] = bundle_max;
  js["bundle_rate_cluster2"] = bundle_rate_cluster2;
  js["coupon_rate"] = coupon_rate;
  js["coupon_max"] = coupon_max;
  js["gift_order_rate"] = gift_order_rate;
  js["gift_only_order_rate"] = gift_only_order_rate;
  js["split_order_rate"] = split_order_rate;
  js["order_extra_click_mean"] = order_extra_click_mean;
  js["nonbuyer_click_mean"] = nonbuyer_click_mean;
  js["price_search_jitter"] = price_search_jitter;
  js["response"] = response_to_json(response);
  js["seed"] = seed;
  return js.dump(2);
}

SynthConfig SynthConfig::from_json(const std::string& text) {
  json js = json::parse(text);
  SynthConfig c;
  if (!js.contains("seed")) throw ValidationError("synth config: seed is required");
  c.seed = js["seed"].get<uint64_t>();
  auto get = [&js](const char* key, auto& field) {
    if (js.contains(key)) field = js[key].get<std::decay_t<decltype(field)>>();
  };
  get("n_users", c.n_users);
  get("buyer_fraction", c.buyer_fraction);
  get("order_first_fraction", c.order_first_fraction);
  get("month", c.month);
  get("order_count_mass", c.order_count_mass);
  get("spend_median", c.spend_median);
  get("spend_p90", c.spend_p90);
  get("buyer_span_cdf", c.buyer_span_cdf);
  get("nonbuyer_span_cdf", c.nonbuyer_span_cdf);
  get("single_event_rate", c.single_event_rate);
  get("daily_period_amplitude", c.daily_period_amplitude);
  get("age_prior", c.age_prior);
  get("gender_prior", c.gender_prior);
  get("education_prior", c.education_prior);
  get("marital_prior", c.marital_prior);
  get("plus_rate", c.plus_rate);
  get("user_level_prior", c.user_level_prior);
  get("city_prior", c.city_prior);
  get("purchase_power_prior", c.purchase_power_prior);
  get("n_skus", c.n_skus);
  get("attr1_missing_rate", c.attr1_missing_rate);
  get("attr2_missing_rate", c.attr2_missing_rate);
  get("cluster_weights", c.cluster_weights);
  get("attr1_centers", c.attr1_centers);
  get("attr2_centers", c.attr2_centers);
  get("attr1_std", c.attr1_std);
  get("attr2_std", c.attr2_std);
  get("price_base", c.price_base);
  get("type2_price_factor", c.type2_price_factor);
  get("price_sigma", c.price_sigma);
  get("type2_rate", c.type2_rate);
  get("promise_prior", c.promise_prior);
  get("direct_rate", c.direct_rate);
  get("direct_max", c.direct_max);
  get("quantity_rate", c.quantity_rate);
  get("quantity_max", c.quantity_max);
  get("bundle_rate", c.bundle_rate);
  get("bundle_max", c.bundle_max);
  get("bundle_rate_cluster2", c.bundle_rate_cluster2);
  get("coupon_rate", c.coupon_rate);
  get("coupon_max", c.coupon_max);
  get("gift_order_rate", c.gift_order_rate);
  get("gift_only_order_rate", c.gift_only_order_rate);
  get("split_order_rate", c.split_order_rate);
  get("order_extra_click_mean", c.order_extra_click_mean);
  get("nonbuyer_click_mean", c.nonbuyer_click_mean);
  get("price_search_jitter", c.price_search_jitter);
  if (js.contains("response")) response_from_json(js["response"], c.response);
  c.validate();
  return c;
}

std::string GroundTruth::to_json() const {
  json js;
  js["counts"] = {{"users", counts.users},
                  {"clicks", counts.clicks},
                  {"orders", counts.orders},
                  {"skus", counts.skus}};
  js["buyers"] = buyers;
  js["order_first_users"] = order_first_users;
  js["paid_lines"] = paid_lines;
  js["gift_units"] = gift_units;
  js["gift_only_orders"] = gift_only_orders;
  js["sku_ids"] = sku_ids;
  js["sku_cluster"] = sku_cluster;
  json complete = json::array();
  for (bool b : sku_attrs_complete) complete.push_back(b);
  js["sku_attrs_complete"] = std::move(complete);
  js["order_lines_per_cluster"] = order_lines_per_cluster;
  js["bucket_counts"] = bucket_counts;
  js["bulk_calibration"] = bulk_calibration;
  js["response"] = response_to_json(response);
  js["interaction_pair"] = {interaction_a, interaction_b};
  return js.dump(2);
}

void write_synth(const SynthResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const RawTables& t = result.tables;

  {
    CsvWriter w(dir + "/users.csv");
    w.write_row({"user_id", "age_band", "gender", "education", "marital_status", "plus_status",
                 "user_level", "city_level", "purchase_power", "first_order_month"});
    for (const auto& u : t.users) {
      w.write_row({u.user_id, u.age_band, u.gender, std::to_string(u.education),
                   u.marital_status, std::to_string(u.plus_status),
                   std::to_string(u.user_level), std::to_string(u.city_level),
                   std::to_string(u.purchase_power), u.first_order_month});
    }
  }
  {
    CsvWriter w(dir + "/clicks.csv");
    w.write_row({"user_id", "sku_id", "timestamp", "channel"});
    for (const auto& c : t.clicks) {
      w.write_row({c.user_id, c.sku_id, format_iso8601(c.timestamp), c.channel});
    }
  }
  {
    CsvWriter w(dir + "/orders.csv");
    w.write_row({"order_id", "user_id", "sku_id", "timestamp", "quantity",
                 "original_unit_price", "final_unit_price", "direct_discount",
                 "quantity_discount", "bundle_discount", "coupon_discount", "gift_flag",
                 "promise_days", "product_type"});
    for (const auto& o : t.orders) {
      w.write_row({o.order_id, o.user_id, o.sku_id, format_iso8601(o.timestamp),
                   std::to_string(o.quantity), format_double(o.original_unit_price),
                   format_double(o.final_unit_price), format_double(o.direct_discount),
                   format_double(o.quantity_discount), format_double(o.bundle_discount),
                   format_double(o.coupon_discount), o.gift_flag ? "1" : "0",
                   o.promise_days < 0 ? "N/A" : std::to_string(o.promise_days),
                   std::to_string(o.product_type)});
    }
  }
  {
    CsvWriter w(dir + "/skus.csv");
    w.write_row({"sku_id", "attribute1", "attribute2"});
    for (const auto& s : t.skus) {
      w.write_row({s.sku_id, s.attribute1 ? format_double(*s.attribute1) : "",
                   s.attribute2 ? format_double(*s.attribute2) : ""});
    }
  }
  std::ofstream gt(dir + "/ground_truth.json", std::ios::binary);
  if (!gt) throw DataError("cannot write ground truth");
  gt << result.truth.to_json() << "\n";
}

}  // namespace glassbox
