#include "mfg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfg {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void write_point(std::ostream& out, const Grid& g, Point x) {
  out << fmt(x[0]) << ',';
  if (g.dim() == 2) out << fmt(x[1]) << ',';
}

std::vector<std::vector<double>> read_rows(const std::string& path,
                                           std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != columns) {
      throw std::runtime_error(path + ": expected " + std::to_string(columns) +
                               " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class PointAt>
std::vector<double> read_values(const std::string& path, const Grid& grid,
                                std::size_t count, PointAt point_at) {
  const std::size_t cols = grid.dim() == 1 ? 2 : 3;
  const auto rows = read_rows(path, cols);
  if (rows.size() != count) {
    throw std::runtime_error(path + ": row count does not match the grid");
  }
  const double tol = 1e-9 * (1.0 + std::abs(grid.hi()[0] - grid.lo()[0]));
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Point x = point_at(k);
    for (int a = 0; a < grid.dim(); ++a) {
      if (std::abs(rows[k][static_cast<std::size_t>(a)] - x[a]) > tol) {
        throw std::runtime_error(path + ": coordinates do not match the grid");
      }
    }
    v[k] = rows[k][cols - 1];
  }
  return v;
}

}  // namespace

void write_node_csv(const std::string& path, const Field& f) {
  auto out = open_out(path);
  out << (f.grid.dim() == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t k = 0; k < f.size(); ++k) {
    write_point(out, f.grid, f.grid.node_point(k));
    out << fmt(f[k]) << '\n';
  }
}

void write_cell_csv(const std::string& path, const CellField& f) {
  auto out = open_out(path);
  out << (f.grid.dim() == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t c = 0; c < f.size(); ++c) {
    write_point(out, f.grid, f.grid.cell_center(c));
    out << fmt(f[c]) << '\n';
  }
}

void write_flux_csv(const std::string& path, const CellVectorField& f) {
  auto out = open_out(path);
  const bool two = f.grid.dim() == 2;
  out << (two ? "x,y,value_x,value_y\n" : "x,value\n");
  for (std::size_t c = 0; c < f.size(); ++c) {
    write_point(out, f.grid, f.grid.cell_center(c));
    out << fmt(f[c][0]);
    if (two) out << ',' << fmt(f[c][1]);
    out << '\n';
  }
}

Field read_node_csv(const std::string& path, const Grid& grid) {
  return Field(grid, read_values(path, grid, grid.node_count(), [&](std::size_t k) {
                 return grid.node_point(k);
               }));
}

CellField read_cell_csv(const std::string& path, const Grid& grid) {
  return CellField(grid,
                   read_values(path, grid, grid.cell_count(), [&](std::size_t c) {
                     return grid.cell_center(c);
                   }));
}

nlohmann::json report_to_json(const SolveReport& r, const Grid& grid) {
  nlohmann::json active = nlohmann::json::array();
  for (std::size_t k : r.active_set) {
    const Point x = grid.node_point(k);
    if (grid.dim() == 1) {
      active.push_back({{"node", k}, {"x", x[0]}});
    } else {
      active.push_back({{"node", k}, {"x", x[0]}, {"y", x[1]}});
    }
  }
  return {{"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"objective", r.objective},
          {"pg_norm", r.pg_norm},
          {"converged", r.converged},
          {"termination", to_string(r.reason)},
          {"active_set", active},
          {"history", r.history}};
}

nlohmann::json diagnostics_to_json(const DiagnosticsReport& d) {
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& c : d.checks()) {
    checks[c.name] = {{"value", c.value},
                      {"threshold", c.threshold},
                      {"passed", c.passed}};
  }
  return {{"eps_m", d.eps_m},
          {"hj_residual_pos", d.hj_residual_pos},
          {"hj_inequality_violation", d.hj_inequality_violation},
          {"continuity_residual", d.continuity_residual},
          {"neumann_error", d.neumann_error},
          {"dirichlet_sign_violation", d.dirichlet_sign_violation},
          {"complementarity_residual", d.complementarity_residual},
          {"mass_balance_gap", d.mass_balance_gap},
          {"apriori_energy", d.apriori_energy},
          {"integral_m_conjugate", d.integral_m_conjugate},
          {"integral_g_power", d.integral_g_power},
          {"integral_flux_conjugate", d.integral_flux_conjugate},
          {"free_boundary_flux", d.free_boundary_flux},
          {"checks", checks},
          {"passed", d.passed()}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace mfg
