#pragma once

// Test-only oracles. None of these call into the library code they check.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace oracle {

std::filesystem::path source_dir();
std::filesystem::path data_dir();
std::filesystem::path tools_dir();

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

/// Dimensions of a free-format MPS file, counted token by token.
struct MpsShape {
  std::size_t columns = 0;
  std::size_t rows = 0;       // excluding the objective row
  std::size_t nonzeros = 0;   // COLUMNS entries on constraint rows
  std::size_t objective_entries = 0;
  std::size_t ranges = 0;
  std::size_t bounds = 0;
  std::size_t markers = 0;
  bool has_endata = false;
};
MpsShape read_mps_shape(std::istream& in);

/// Pooled-variance t statistic from raw sums in long double.
double pooled_t(const std::vector<double>& a, const std::vector<double>& b);

/// Two-sided p-value of Student's t from Boost.Math.
double t_two_sided_p(double t, double df);

/// Solves A x = b (row-major, n x n) by dense LU.
std::vector<double> dense_solve(const std::vector<double>& a, const std::vector<double>& b, int n);

/// True when python3 with scipy's HiGHS is available for the external bridge.
bool highs_available();

/// Path of the bundled HiGHS solver spec.
std::filesystem::path highs_spec();

}  // namespace oracle
