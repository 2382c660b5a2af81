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

#include "glassbox/csv.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "glassbox/common.hpp"

namespace glassbox {

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    auto fields = split_csv_line(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw DataError("empty file (no header): " + path);
  return table;
}

namespace {

bool needs_quotes(const std::string& f) {
  return f.find_first_of(",\"\n\r") != std::string::npos;
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw DataError("cannot write file: " + path);
  out_ = f;
}

CsvWriter::~CsvWriter() {
  if (out_ != nullptr) std::fclose(static_cast<std::FILE*>(out_));
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  auto* f = static_cast<std::FILE*>(out_);
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) std::fputc(',', f);
    const std::string& field = fields[i];
    if (needs_quotes(field)) {
      std::fputc('"', f);
      for (char c : field) {
        if (c == '"') std::fputc('"', f);
        std::fputc(c, f);
      }
      std::fputc('"', f);
    } else {
      std::fwrite(field.data(), 1, field.size(), f);
    }
  }
  std::fputc('\n', f);
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double v, int decimals) {
  std::array<char, 64> buf;
  int n = std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
  return std::string(buf.data(), static_cast<size_t>(n));
}

double parse_double(const std::string& s, bool* ok) {
  const char* begin = s.c_str();
  const char* end = begin + s.size();
  while (begin < end && *begin == ' ') ++begin;
  double v = 0.0;
  auto res = std::from_chars(begin, end, v);
  bool good = res.ec == std::errc() && res.ptr == end;
  if (ok != nullptr) *ok = good;
  return good ? v : 0.0;
}

int64_t parse_int(const std::string& s, bool* ok) {
  const char* begin = s.c_str();
  const char* end = begin + s.size();
  while (begin < end && *begin == ' ') ++begin;
  int64_t v = 0;
  auto res = std::from_chars(begin, end, v);
  bool good = res.ec == std::errc() && res.ptr == end;
  if (ok != nullptr) *ok = good;
  return good ? v : 0;
}

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

// Howard Hinnant's civil-days algorithm.
int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<int64_t>(era) * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool parse_digits(const std::string& s, size_t pos, size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (size_t i = 0; i < len; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<int64_t> parse_iso8601(const std::string& s) {
  // YYYY-MM-DD[ T]HH:MM:SS
  int y, mo, d, h = 0, mi = 0, se = 0;
  if (!parse_digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!parse_digits(s, 5, 2, mo) || !parse_digits(s, 8, 2, d)) return std::nullopt;
  if (s.size() > 10) {
    if ((s[10] != 'T' && s[10] != ' ') || s.size() < 19 || s[13] != ':' || s[16] != ':') return std::nullopt;
    if (!parse_digits(s, 11, 2, h) || !parse_digits(s, 14, 2, mi) || !parse_digits(s, 17, 2, se)) return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) return std::nullopt;
  if (h > 23 || mi > 59 || se > 60) return std::nullopt;
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

std::string format_iso8601(int64_t t) {
  int64_t days = t / 86400;
  int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02lld:%02lld:%02lld", y, m, d,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return std::string(buf);
}

std::optional<int64_t> parse_month_start(const std::string& ym) {
  int y, m;
  if (ym.size() != 7 || ym[4] != '-') return std::nullopt;
  if (!parse_digits(ym, 0, 4, y) || !parse_digits(ym, 5, 2, m)) return std::nullopt;
  if (m < 1 || m > 12) return std::nullopt;
  return days_from_civil(y, m, 1) * 86400;
}

int64_t month_end(int64_t month_start) {
  int64_t days = month_start / 86400;
  int y, m, d;
  civil_from_days(days, y, m, d);
  m += 1;
  if (m > 12) {
    m = 1;
    y += 1;
  }
  return days_from_civil(y, m, 1) * 86400;
}

}  // namespace glassbox
