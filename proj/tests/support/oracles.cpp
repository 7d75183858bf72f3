#include "oracles.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <cstdlib>
#include <istream>
#include <random>
#include <set>
#include <sstream>

namespace oracle {

std::filesystem::path source_dir() { return FLOWGRAPH_SOURCE_DIR; }
std::filesystem::path data_dir() { return source_dir() / "data"; }
std::filesystem::path tools_dir() { return source_dir() / "tools"; }

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("flowgraph_test_" + tag + "_" + std::to_string(rng()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

MpsShape read_mps_shape(std::istream& in) {
  MpsShape shape;
  std::string section, objective, line;
  std::set<std::string> columns;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    std::istringstream words(line);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      section = tok[0];
      if (section == "ENDATA") shape.has_endata = true;
      continue;
    }
    if (section == "ROWS") {
      if (tok[0] == "N") {
        objective = tok[1];
      } else {
        ++shape.rows;
      }
    } else if (section == "COLUMNS") {
      if (tok.size() >= 2 && tok[1] == "'MARKER'") {
        ++shape.markers;
        continue;
      }
      columns.insert(tok[0]);
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        if (tok[k] == objective) {
          ++shape.objective_entries;
        } else {
          ++shape.nonzeros;
        }
      }
    } else if (section == "RANGES") {
      shape.ranges += (tok.size() - 1) / 2;
    } else if (section == "BOUNDS") {
      ++shape.bounds;
    }
  }
  shape.columns = columns.size();
  return shape;
}

double pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
  long double sa = 0, sb = 0, qa = 0, qb = 0;
  for (double x : a) sa += x;
  for (double x : b) sb += x;
  const long double na = a.size(), nb = b.size();
  const long double ma = sa / na, mb = sb / nb;
  for (double x : a) qa += (x - ma) * (x - ma);
  for (double x : b) qb += (x - mb) * (x - mb);
  const long double sp2 = (qa + qb) / (na + nb - 2);
  return static_cast<double>((ma - mb) / std::sqrt(sp2 * (1 / na + 1 / nb)));
}

double t_two_sided_p(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

std::vector<double> dense_solve(const std::vector<double>& a, const std::vector<double>& b, int n) {
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs(i) = b[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) m(i, j) = a[static_cast<std::size_t>(i * n + j)];
  }
  const Eigen::VectorXd x = m.fullPivLu().solve(rhs);
  return {x.data(), x.data() + n};
}

bool highs_available() {
  static const bool ok = std::system("python3 -c 'import scipy.optimize' >/dev/null 2>&1") == 0;
  return ok;
}

std::filesystem::path highs_spec() { return tools_dir() / "highs.json"; }

}  // namespace oracle
