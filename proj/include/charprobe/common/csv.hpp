#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace charprobe {

// Minimal RFC 4180 reader: quoted fields, "" escapes, CRLF or LF rows.
// Throws MalformedRecord on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view body);

std::string csv_escape(std::string_view field);
// Joined with ',' and terminated by '\n'.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace charprobe
