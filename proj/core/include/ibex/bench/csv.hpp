// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ibex::bench {

// RFC 4180: fields containing a comma, quote, CR or LF are quoted, quotes
// doubled; records end with CRLF.
std::string csv_field(std::string_view s);

class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}
  void row(const std::vector<std::string>& fields);

private:
  std::ostream* out_;
};

// Parses RFC 4180 text back into records (used by tests and tools).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string fmt_ms(double ms);

}  // namespace ibex::bench
