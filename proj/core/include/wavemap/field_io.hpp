#pragma once

// Field dump format:
//   WMFIELD v1 M=<M> comps=3\n
//   (M+1)^2 little-endian float64 triples, row-major (x fastest).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>

#include "wavemap/grid.hpp"

namespace wavemap {

void write_field(std::ostream& out, const VecField& f, const Grid2D& g);
void write_field(const std::filesystem::path& path, const VecField& f, const Grid2D& g);

std::pair<Grid2D, VecField> read_field(std::istream& in);
std::pair<Grid2D, VecField> read_field(const std::filesystem::path& path);

/// CSV with header `x,y,<p>1,<p>2,<p>3`, one row per node in row-major order.
void write_field_csv(std::ostream& out, const VecField& f, const Grid2D& g,
                     const std::string& prefix = "u");
void write_field_csv(const std::filesystem::path& path, const VecField& f, const Grid2D& g,
                     const std::string& prefix = "u");

/// Checkpoint sidecar: a single line `t=<time> tau=<tau>`.
void write_sidecar(const std::filesystem::path& path, double t, double tau);
std::pair<double, double> read_sidecar(const std::filesystem::path& path);

}  // namespace wavemap
