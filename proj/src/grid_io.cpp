#include "csgf/grid_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "csgf/errors.hpp"

namespace csgf {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

void write_grid_csv(std::ostream& out, const RealGrid& values, bool clamp_residue) {
  out << "l\\m";
  for (Eigen::Index m = 0; m < values.cols(); ++m) out << ',' << m;
  out << '\n';
  for (Eigen::Index l = 0; l < values.rows(); ++l) {
    out << l;
    for (Eigen::Index m = 0; m < values.cols(); ++m) {
      double v = values(l, m);
      if (clamp_residue && v < 0.0 && v > -1e-6) v = 0.0;
      out << ',' << format_value(v);
    }
    out << '\n';
  }
}

RealGrid read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty grid CSV");
  const auto header = split(line);
  if (header.empty() || header[0] != "l\\m") throw InvalidArgument("grid CSV header must start with l\\m");
  const auto cols = static_cast<Eigen::Index>(header.size() - 1);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (static_cast<Eigen::Index>(cells.size()) != cols + 1)
      throw InvalidArgument("grid CSV row " + std::to_string(rows.size()) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(cols + 1));
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(cols));
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(std::stod(cells[c]));
    rows.push_back(std::move(row));
  }
  RealGrid out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t l = 0; l < rows.size(); ++l)
    for (Eigen::Index m = 0; m < cols; ++m)
      out(static_cast<Eigen::Index>(l), m) = rows[l][static_cast<std::size_t>(m)];
  return out;
}

std::string grid_metadata_json(const ProbabilityGrid& pg, const std::string& backend,
                               const std::string& model_name) {
  nlohmann::json meta{{"model", model_name},
                      {"backend", backend},
                      {"t", pg.t},
                      {"origin", {pg.j, pg.k}},
                      {"n", pg.n},
                      {"sum", pg.sum()},
                      {"truncation_mass", truncation_mass(pg)}};
  return meta.dump(2);
}

}  // namespace csgf
