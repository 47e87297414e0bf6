#include "qshutter/profile_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "qshutter/errors.hpp"

namespace qshutter {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view token, int line) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

ProfileConfig parse_profile(std::istream& in) {
  std::vector<Segment> segments;
  std::optional<double> mass;
  std::string name;
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "segment") {
      const auto tokens = split_ws(value);
      if (tokens.size() != 2) {
        throw ParseError(line_no, "segment needs '<width_angstrom> <height_eV>'");
      }
      const double width = parse_number(tokens[0], line_no);
      const double height = parse_number(tokens[1], line_no);
      if (!(width > 0.0)) throw ParseError(line_no, "segment width must be positive");
      segments.push_back({width, height});
    } else if (key == "mass_factor") {
      if (mass) throw ParseError(line_no, "mass_factor given twice");
      mass = parse_number(value, line_no);
      if (!(*mass > 0.0)) throw ParseError(line_no, "mass_factor must be positive");
    } else if (key == "name") {
      name = value;
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  if (segments.empty()) throw ParseError(line_no, "profile has no segments");
  return {name, build_profile(std::move(segments), mass.value_or(kDefaultMassFactor))};
}

ProfileConfig load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file " + path.string());
  return parse_profile(in);
}

}  // namespace qshutter
