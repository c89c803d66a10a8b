#pragma once

#include <string>

#include <json.hpp>

#include "mfg/grid.hpp"
#include "mfg/optimizer.hpp"
#include "mfg/verify.hpp"

namespace mfg {

/// Header `x[,y],value`, one row per node.
void write_node_csv(const std::string& path, const Field& f);
/// Header `x[,y],value`, one row per cell centroid.
void write_cell_csv(const std::string& path, const CellField& f);
/// Header `x,value` in 1D and `x,y,value_x,value_y` in 2D.
void write_flux_csv(const std::string& path, const CellVectorField& f);

/// Reads a file written by write_node_csv / write_cell_csv back onto `grid`;
/// throws std::runtime_error on a row count or coordinate mismatch.
Field read_node_csv(const std::string& path, const Grid& grid);
CellField read_cell_csv(const std::string& path, const Grid& grid);

nlohmann::json report_to_json(const SolveReport& r, const Grid& grid);
nlohmann::json diagnostics_to_json(const DiagnosticsReport& d);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace mfg
