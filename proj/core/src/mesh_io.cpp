#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "curvefem/mesh.hpp"

namespace curvefem {

namespace {

constexpr const char* kMeshHeader = "curvefem-mesh v1";

int read_section_count(std::istream& in, const std::string& expected) {
  std::string keyword;
  long long n = -1;
  if (!(in >> keyword >> n) || keyword != expected || n < 0) {
    throw std::runtime_error("mesh file: expected '" + expected + " <count>'");
  }
  return static_cast<int>(n);
}

}  // namespace

void write_mesh(const Mesh& mesh, std::ostream& out) {
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << kMeshHeader << '\n';
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  out << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "boundary_edges " << mesh.num_boundary_edges() << '\n';
  for (const auto& e : mesh.boundary_edges()) {
    out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.owner << '\n';
  }
  out.precision(precision);
}

Mesh read_mesh(std::istream& in) {
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != kMeshHeader) throw std::runtime_error("mesh file: missing 'curvefem-mesh v1' header");

  const int nv = read_section_count(in, "vertices");
  std::vector<Point> vertices(nv);
  for (auto& v : vertices) {
    // operator>> on double round-trips the 17-digit text exactly
    if (!(in >> v.x() >> v.y())) throw std::runtime_error("mesh file: truncated vertex block");
  }
  const int nt = read_section_count(in, "triangles");
  std::vector<std::array<int, 3>> triangles(nt);
  for (auto& t : triangles) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw std::runtime_error("mesh file: truncated triangle block");
  }
  const int nb = read_section_count(in, "boundary_edges");
  std::vector<std::array<int, 3>> boundary(nb);
  for (auto& b : boundary) {
    if (!(in >> b[0] >> b[1] >> b[2])) throw std::runtime_error("mesh file: truncated boundary block");
  }
  return Mesh(std::move(vertices), std::move(triangles), boundary);
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mesh(mesh, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_mesh(in);
}

}  // namespace curvefem
