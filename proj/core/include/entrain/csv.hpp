// Copyright 2026 The Entrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RFC 4180 helpers shared by the turn-table, ratings and report
// writers.

#ifndef ENTRAIN_CSV_HPP_
#define ENTRAIN_CSV_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entrain::csv {

// Splits one record. Quoted fields may contain commas and doubled quotes.
// Throws ParseError (carrying `line`) on an unterminated quote.
std::vector<std::string> SplitRecord(std::string_view record, std::size_t line);

// Reads the next non-blank line, stripping a trailing '\r' and a leading
// UTF-8 BOM on the first line. Returns false at end of stream.
bool ReadRecord(std::istream& in, std::string& record, std::size_t& line);

// Trims ASCII whitespace.
std::string_view Trim(std::string_view s);

// Strict numeric parsing of a whole field; nullopt on any trailing garbage.
std::optional<double> ParseDouble(std::string_view field);
std::optional<std::int64_t> ParseInt(std::string_view field);

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

// Quotes a field if it contains a comma, quote or newline.
std::string Escape(std::string_view field);

}  // namespace entrain::csv

#endif  // ENTRAIN_CSV_HPP_
