#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hillspec::cli {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& text, const char* what) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
  }
  return value;
}

}  // namespace

double parse_alpha(const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  const auto at = t.find("pi");
  if (at == std::string::npos) return parse_number(t, "alpha");

  std::string head = trim(t.substr(0, at));
  std::string tail = trim(t.substr(at + 2));
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  const double factor = head.empty() ? 1.0 : parse_number(head, "alpha");
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("invalid alpha: '" + text + "'");
    divisor = parse_number(tail.substr(1), "alpha");
    if (divisor == 0.0) throw std::invalid_argument("invalid alpha: division by zero");
  }
  return factor * std::numbers::pi / divisor;
}

std::pair<double, double> parse_range(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("expected lo:hi, got an empty string");
  const auto colon = text.find(':', text.front() == '-' ? 1 : 0);
  if (colon == std::string::npos) {
    throw std::invalid_argument("expected lo:hi, got '" + text + "'");
  }
  const double lo = parse_number(text.substr(0, colon), "range");
  const double hi = parse_number(text.substr(colon + 1), "range");
  if (!(lo < hi)) throw std::invalid_argument("range needs lo < hi, got '" + text + "'");
  return {lo, hi};
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    line = line.substr(0, line.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream words(line);
    std::string word;
    while (words >> word) out.push_back(parse_number(word, "lambda"));
  }
  return out;
}

std::vector<double> read_lambdas(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open lambda file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto values = parse_lambdas(buffer.str());
  if (values.empty()) throw std::invalid_argument("lambda file " + path + " is empty");
  return values;
}

std::vector<double> lambda_grid(std::pair<double, double> range, int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(grid));
  const auto [lo, hi] = range;
  for (int i = 0; i < grid; ++i) {
    out[static_cast<std::size_t>(i)] =
        grid == 1 ? lo : (i + 1 == grid ? hi : lo + (hi - lo) * i / (grid - 1));
  }
  return out;
}

void validate(const RunConfig& c) {
  if (!(c.tol >= 1e-12 && c.tol <= 1e-2)) {
    throw std::invalid_argument("--tol must lie in [1e-12, 1e-2]");
  }
  if (c.grid < 1) throw std::invalid_argument("--grid must be >= 1");
  if (!(c.alpha >= 0.0 && c.alpha < std::numbers::pi)) {
    throw std::invalid_argument("--alpha must lie in [0, pi)");
  }
  if (c.periods < 1) throw std::invalid_argument("--periods must be >= 1");
  if (c.scan_points < 2) throw std::invalid_argument("--scan-points must be >= 2");
  if (!(c.edge_tol > 0.0)) throw std::invalid_argument("--edge-tol must be positive");
  if (c.bench < 0) throw std::invalid_argument("--bench must be >= 0");
}

}  // namespace hillspec::cli
