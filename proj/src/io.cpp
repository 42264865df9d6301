#include "nse/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "nse/error.hpp"

namespace nse {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

bool header_value(const std::string& line, const char* key, int& value) {
  const std::string prefix = std::string("#") + key + " ";
  if (line.rfind(prefix, 0) != 0) return false;
  try {
    value = std::stoi(line.substr(prefix.size()));
  } catch (const std::exception&) {
    throw IoError("malformed header line '" + line + "'");
  }
  return true;
}

std::vector<double> split_numbers(const std::string& line, std::size_t expected,
                                  const std::filesystem::path& path) {
  std::vector<double> out;
  out.reserve(expected);
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto comma = line.find(',', pos);
    const auto field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str()) throw IoError("non-numeric field '" + field + "' in '" + path.string() + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected)
    throw IoError("expected " + std::to_string(expected) + " fields per row in '" + path.string() +
                  "', got " + std::to_string(out.size()));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_map_file(const std::filesystem::path& path, const Pixelization& pix,
                    std::span<const double> values) {
  if (values.size() != pix.size())
    throw ShapeError("write_map_file: " + std::to_string(values.size()) + " values for " +
                     std::to_string(pix.size()) + " points");
  auto out = open_out(path);
  out << "#order " << pix.order() << "\n#nrings " << pix.n_rings() << "\n#nphi " << pix.n_phi() << '\n';
  char buf[160];
  for (std::size_t k = 0; k < pix.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", k, pix.theta(k), pix.phi(k),
                  pix.weight(k), values[k]);
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

MapFile read_map_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  MapFile map;
  int seen = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header_value(line, "order", map.order) || header_value(line, "nrings", map.n_rings) ||
          header_value(line, "nphi", map.n_phi))
        ++seen;
      continue;
    }
    const auto row = split_numbers(line, 5, path);
    if (static_cast<std::size_t>(row[0]) != map.values.size())
      throw IoError("map file '" + path.string() + "': row index " + format_double(row[0]) +
                    " out of sequence");
    map.values.push_back(row[4]);
  }
  if (seen < 3) throw IoError("map file '" + path.string() + "' lacks #order/#nrings/#nphi headers");
  if (static_cast<std::size_t>(map.n_rings) * map.n_phi != map.values.size())
    throw IoError("map file '" + path.string() + "' has " + std::to_string(map.values.size()) +
                  " rows, header implies " + std::to_string(map.n_rings * map.n_phi));
  return map;
}

void write_alm_file(const std::filesystem::path& path, const Alm& alm) {
  auto out = open_out(path);
  out << "#lmax " << alm.lmax() << '\n';
  char buf[96];
  for (int l = 0; l <= alm.lmax(); ++l)
    for (int m = 0; m <= l; ++m) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", l, m, alm(l, m).real(), alm(l, m).imag());
      out << buf;
    }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Alm read_alm_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  int lmax = -1;
  std::string line;
  Alm alm;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header_value(line, "lmax", lmax)) {
        if (lmax < 0) throw IoError("negative #lmax in '" + path.string() + "'");
        alm = Alm(lmax);
      }
      continue;
    }
    if (lmax < 0) throw IoError("Alm file '" + path.string() + "' lacks a #lmax header");
    const auto row = split_numbers(line, 4, path);
    const int l = static_cast<int>(row[0]);
    const int m = static_cast<int>(row[1]);
    if (l < 0 || l > lmax || m < 0 || m > l)
      throw IoError("Alm file '" + path.string() + "': entry (" + std::to_string(l) + "," +
                    std::to_string(m) + ") out of range");
    alm(l, m) = {row[2], row[3]};
  }
  if (lmax < 0) throw IoError("Alm file '" + path.string() + "' lacks a #lmax header");
  return alm;
}

}  // namespace nse
