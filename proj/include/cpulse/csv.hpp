#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cpulse::csv {

/// Locale-independent "%.<digits>g"; 17 digits round-trip any double.
std::string number(double value, int digits = 17);

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

/// Splits one CSV record, honouring double-quoted fields with "" escapes.
std::vector<std::string> split(std::string_view line);

/// Parses a whole field as a double; throws IoError on trailing garbage.
double parse_number(const std::string& field);

}  // namespace cpulse::csv
