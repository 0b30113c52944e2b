#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hillspec::cli {

enum class Format { csv, json };

/// Everything the subcommands read from the command line.
struct RunConfig {
  std::string potential;
  int periods = 1;
  double alpha = 0.0;
  std::optional<std::pair<double, double>> range;
  int grid = 101;
  double tol = 1e-8;
  Format format = Format::csv;
  unsigned threads = 1;
  std::optional<std::pair<double, double>> bracket;
  std::string lambdas_file;
  bool rho = false;
  int bench = 0;  // repetitions; 0 disables timing
  std::string output;
  bool simple_shooting = false;
  int scan_points = 2000;
  double edge_tol = 1e-10;
};

/// Accepts plain numbers and multiples of pi: "0.5", "pi", "pi/6", "2pi/3",
/// "0.25*pi". Throws std::invalid_argument.
double parse_alpha(const std::string& text);

/// "lo:hi" with lo < hi.
std::pair<double, double> parse_range(const std::string& text);

/// Whitespace- or comma-separated numbers; '#' starts a comment.
std::vector<double> parse_lambdas(const std::string& text);
std::vector<double> read_lambdas(const std::string& path);

/// grid points spread uniformly over [lo, hi], endpoints included; one
/// point means lo.
std::vector<double> lambda_grid(std::pair<double, double> range, int grid);

/// Range checks shared by every command. Throws std::invalid_argument.
void validate(const RunConfig& config);

}  // namespace hillspec::cli
