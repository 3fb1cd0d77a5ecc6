#pragma once

#include <iosfwd>
#include <string>

#include "csgf/inversion.hpp"

namespace csgf {

// CSV with header "l\m,0,1,...,n-1"; row l holds p_{(j,k),(l,m)} for each m,
// written with 17 significant digits. With clamp_residue, entries in
// (-1e-6, 0) are written as 0.
void write_grid_csv(std::ostream& out, const RealGrid& values, bool clamp_residue = false);
RealGrid read_grid_csv(std::istream& in);

// JSON metadata written next to a grid export.
std::string grid_metadata_json(const ProbabilityGrid& pg, const std::string& backend,
                               const std::string& model_name);

}  // namespace csgf
