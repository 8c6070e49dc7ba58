#include "a4/interactive.hpp"

#include <istream>
#include <ostream>

namespace a4 {

int parse_selection(const std::string& line, std::size_t option_count) {
  std::string t;
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') t += c;
  }
  if (t == "s" || t == "skip") return -1;
  if (t.empty() || t.size() > 6) return -2;
  for (char c : t) {
    if (c < '0' || c > '9') return -2;
  }
  long n = std::stol(t);
  if (n < 1 || n > static_cast<long>(option_count)) return -2;
  return static_cast<int>(n - 1);
}

std::string format_site_prompt(const std::string& file, std::size_t offset,
                               const std::vector<SiteOption>& options) {
  std::string out =
      file + " @" + std::to_string(offset) + ": " +
      std::to_string(options.size()) +
      (options.size() == 1 ? " applicable rewrite\n" : " applicable rewrites\n");
  for (std::size_t i = 0; i < options.size(); ++i) {
    const SiteOption& o = options[i];
    const std::string& ref = o.pattern->example_id.empty()
                                 ? o.pattern->source_id
                                 : o.pattern->example_id;
    out += "  " + std::to_string(i + 1) + ") pattern " + o.pattern->pattern_id +
           " (from " + ref + ")\n";
  }
  out += "apply which? [1-" + std::to_string(options.size()) + ", s=skip] ";
  return out;
}

SiteSelector make_console_selector(std::istream& in, std::ostream& out,
                                   const std::string& file) {
  return [&in, &out, file](std::size_t offset,
                           const std::vector<SiteOption>& options) -> int {
    out << format_site_prompt(file, offset, options) << std::flush;
    std::string line;
    while (std::getline(in, line)) {
      int pick = parse_selection(line, options.size());
      if (pick != -2) return pick;
      out << "enter 1-" << options.size() << " or s: " << std::flush;
    }
    return -1;  // end of input: leave the site untouched
  };
}

}  // namespace a4
