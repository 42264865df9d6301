#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nse/grid.hpp"
#include "nse/harmonics.hpp"

namespace nse {

/// Values on a pixelization, as stored in a map file.
struct MapFile {
  int order = 0;
  int n_rings = 0;
  int n_phi = 0;
  std::vector<double> values;
};

/// Text map: header lines "#order L", "#nrings R", "#nphi P", then one row
/// "k,theta,phi,lambda,value" per point in ring-major order, %.17g floats.
void write_map_file(const std::filesystem::path& path, const Pixelization& pix,
                    std::span<const double> values);

/// Throws IoError when the file cannot be read or is malformed.
MapFile read_map_file(const std::filesystem::path& path);

/// "#lmax L" followed by rows "l,m,re,im" for m >= 0.
void write_alm_file(const std::filesystem::path& path, const Alm& alm);
Alm read_alm_file(const std::filesystem::path& path);

/// Shortest round-trip representation used by every text output.
std::string format_double(double v);

}  // namespace nse
