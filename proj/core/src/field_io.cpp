#include "wavemap/field_io.hpp"

#include <fmt/format.h>

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {
namespace {

constexpr const char* kMagic = "WMFIELD";

void put_le(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> bytes{};
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

double get_le(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FieldFormatError("field dump truncated");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_field(std::ostream& out, const VecField& f, const Grid2D& g) {
  if (!f.matches(g)) throw std::invalid_argument("write_field: field does not match grid");
  out << kMagic << " v1 M=" << g.cells() << " comps=3\n";
  for (const Vec3& v : f.values()) {
    put_le(out, v.x);
    put_le(out, v.y);
    put_le(out, v.z);
  }
  if (!out) throw FieldFormatError("failed writing field dump");
}

void write_field(const std::filesystem::path& path, const VecField& f, const Grid2D& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FieldFormatError("cannot open " + path.string());
  write_field(out, f, g);
}

std::pair<Grid2D, VecField> read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FieldFormatError("missing field header");
  std::istringstream hs(header);
  std::string magic, version, mtok, ctok;
  hs >> magic >> version >> mtok >> ctok;
  if (magic != kMagic || version != "v1") throw FieldFormatError("bad field header: " + header);
  if (mtok.rfind("M=", 0) != 0 || ctok != "comps=3") throw FieldFormatError("bad field header: " + header);
  int cells = 0;
  try {
    cells = std::stoi(mtok.substr(2));
  } catch (const std::exception&) {
    throw FieldFormatError("bad grid size in header: " + header);
  }
  if (cells < 2) throw FieldFormatError("bad grid size in header: " + header);
  Grid2D g(cells);
  VecField f(g);
  for (Vec3& v : f.values()) {
    v.x = get_le(in);
    v.y = get_le(in);
    v.z = get_le(in);
  }
  return {g, std::move(f)};
}

std::pair<Grid2D, VecField> read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FieldFormatError("cannot open " + path.string());
  return read_field(in);
}

void write_field_csv(std::ostream& out, const VecField& f, const Grid2D& g, const std::string& prefix) {
  if (!f.matches(g)) throw std::invalid_argument("write_field_csv: field does not match grid");
  out << fmt::format("x,y,{0}1,{0}2,{0}3\n", prefix);
  for (int j = 0; j < g.nodes(); ++j) {
    for (int i = 0; i < g.nodes(); ++i) {
      const Vec3& v = f(i, j);
      out << fmt::format("{},{},{},{},{}\n", g.coord(i), g.coord(j), v.x, v.y, v.z);
    }
  }
}

void write_field_csv(const std::filesystem::path& path, const VecField& f, const Grid2D& g,
                     const std::string& prefix) {
  std::ofstream out(path);
  if (!out) throw FieldFormatError("cannot open " + path.string());
  write_field_csv(out, f, g, prefix);
}

void write_sidecar(const std::filesystem::path& path, double t, double tau) {
  std::ofstream out(path);
  if (!out) throw FieldFormatError("cannot open " + path.string());
  out << fmt::format("t={} tau={}\n", t, tau);
}

std::pair<double, double> read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string ttok, tautok;
  if (!(in >> ttok >> tautok) || ttok.rfind("t=", 0) != 0 || tautok.rfind("tau=", 0) != 0)
    throw FieldFormatError("bad sidecar " + path.string());
  return {std::stod(ttok.substr(2)), std::stod(tautok.substr(4))};
}

}  // namespace wavemap
