#pragma once

#include <iosfwd>
#include <string>

#include "a4/migrator.hpp"

namespace a4 {

// "1".."N" -> 0-based option index, "s"/"skip" -> -1, anything else -> -2.
int parse_selection(const std::string& line, std::size_t option_count);

std::string format_site_prompt(const std::string& file, std::size_t offset,
                               const std::vector<SiteOption>& options);

// Prompts on `out`, reads answers from `in` until one parses; end of
// input counts as skip.
SiteSelector make_console_selector(std::istream& in, std::ostream& out,
                                   const std::string& file);

}  // namespace a4
