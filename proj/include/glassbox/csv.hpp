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

#ifndef GLASSBOX_CSV_HPP
#define GLASSBOX_CSV_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glassbox {

// Minimal RFC-4180-ish CSV support: header row, quoted fields with embedded
// commas/quotes, UTF-8 passthrough. No multiline fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
std::vector<std::string> split_csv_line(const std::string& line);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write_row(const std::vector<std::string>& fields);

 private:
  void* out_;
};

// Shortest round-trip formatting; the single source of numeric text in every
// artifact so reruns are byte-identical.
std::string format_double(double v);
std::string format_fixed(double v, int decimals);

double parse_double(const std::string& s, bool* ok = nullptr);
int64_t parse_int(const std::string& s, bool* ok = nullptr);

// "YYYY-MM-DDTHH:MM:SS" <-> seconds since the Unix epoch (UTC, no zone
// suffix). The transaction tables use this format exclusively.
std::optional<int64_t> parse_iso8601(const std::string& s);
std::string format_iso8601(int64_t epoch_seconds);

// "YYYY-MM" -> epoch seconds of the month start; also the month window helper.
std::optional<int64_t> parse_month_start(const std::string& ym);
int64_t month_end(int64_t month_start);  // first instant of the next month

}  // namespace glassbox

#endif  // GLASSBOX_CSV_HPP
