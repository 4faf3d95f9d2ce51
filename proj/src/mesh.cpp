#include "everse/mesh.hpp"

#include "everse/parallel.hpp"
#include "everse/surface.hpp"

#include <cmath>
#include <limits>

namespace everse {

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kHalfPi = 1.5707963267948966;
}  // namespace

std::array<Vec3, 2> MeshFrame::bounds() const {
  const double inf = std::numeric_limits<double>::infinity();
  Vec3 lo{inf, inf, inf}, hi{-inf, -inf, -inf};
  for (const auto& v : vertices) {
    lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y); lo.z = std::min(lo.z, v.z);
    hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y); hi.z = std::max(hi.z, v.z);
  }
  return {lo, hi};
}

MeshFrame tessellate(const StageParams& stage, int rows, int cols) {
  if (rows < 3 || cols < 3)
    throw std::invalid_argument("tessellate: needs rows >= 3 and cols >= 3");

  const auto why = stage.check();
  const auto mw = smoothness_margin(stage.shape);
  if (!why.empty() || !(mw.margin > 0.0)) {
    SmoothnessReport rep;
    rep.margin = mw.margin;
    rep.pass = false;
    rep.note = why.empty() ? "ruled-surface margin is not positive" : why;
    throw MeshRefusal("tessellate: stage rejected: " + rep.note, rep);
  }

  MeshFrame mesh;
  mesh.rows = rows;
  mesh.cols = cols;
  mesh.closed = true;
  const int nv = (rows - 1) * cols + 2;
  mesh.vertices.resize(nv);
  mesh.normals.resize(nv);

  const int south = 0, north = nv - 1;
  auto ring = [cols](int i, int j) {
    return 1 + (i - 1) * cols + ((j % cols + cols) % cols);
  };

  mesh.vertices[south] = closed_point(stage, -kHalfPi, 0.0);
  mesh.normals[south] = pipeline_normal(stage, -kHalfPi, 0.0);
  mesh.vertices[north] = closed_point(stage, kHalfPi, 0.0);
  mesh.normals[north] = pipeline_normal(stage, kHalfPi, 0.0);

  parallel_for(rows - 1, [&](int k) {
    const int i = k + 1;
    const double theta = -kHalfPi + kPi * i / rows;
    for (int j = 0; j < cols; ++j) {
      const double phi = -kPi + 2.0 * kPi * j / cols;
      mesh.vertices[ring(i, j)] = closed_point(stage, theta, phi);
      Vec3 nrm = pipeline_normal(stage, theta, phi);
      const double len = nrm.norm();
      mesh.normals[ring(i, j)] = len > 0.0 ? nrm / len : nrm;
    }
  });

  mesh.triangles.reserve(2 * (rows - 1) * cols);
  for (int j = 0; j < cols; ++j) {
    mesh.triangles.push_back(
        {static_cast<std::uint32_t>(south), static_cast<std::uint32_t>(ring(1, j)),
         static_cast<std::uint32_t>(ring(1, j + 1))});
  }
  for (int i = 1; i < rows - 1; ++i)
    for (int j = 0; j < cols; ++j) {
      const auto a = static_cast<std::uint32_t>(ring(i, j));
      const auto b = static_cast<std::uint32_t>(ring(i, j + 1));
      const auto c = static_cast<std::uint32_t>(ring(i + 1, j + 1));
      const auto d = static_cast<std::uint32_t>(ring(i + 1, j));
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  for (int j = 0; j < cols; ++j) {
    mesh.triangles.push_back({static_cast<std::uint32_t>(north),
                              static_cast<std::uint32_t>(ring(rows - 1, j + 1)),
                              static_cast<std::uint32_t>(ring(rows - 1, j))});
  }
  return mesh;
}

MeshFrame tessellate_open(const SurfaceParams& shape, int rows, int cols,
                          double h_min, double h_max) {
  if (rows < 2 || cols < 3)
    throw std::invalid_argument("tessellate_open: needs rows >= 2 and cols >= 3");
  if (!(h_min < h_max))
    throw std::invalid_argument("tessellate_open: empty height range");

  MeshFrame mesh;
  mesh.rows = rows;
  mesh.cols = cols;
  mesh.closed = false;
  mesh.vertices.resize(static_cast<std::size_t>(rows) * cols);
  mesh.normals.resize(mesh.vertices.size());

  auto at = [cols](int i, int j) {
    return static_cast<std::size_t>(i) * cols + ((j % cols + cols) % cols);
  };
  parallel_for(rows, [&](int i) {
    const double h = h_min + (h_max - h_min) * i / (rows - 1);
    for (int j = 0; j < cols; ++j) {
      const double phi = -kPi + 2.0 * kPi * j / cols;
      mesh.vertices[at(i, j)] = family_point(shape, h, phi);
      Vec3 nrm = normal_vector(shape, h, phi);
      const double len = nrm.norm();
      mesh.normals[at(i, j)] = len > 0.0 ? nrm / len : nrm;
    }
  });

  mesh.triangles.reserve(2 * (rows - 1) * cols);
  for (int i = 0; i + 1 < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const auto a = static_cast<std::uint32_t>(at(i, j));
      const auto b = static_cast<std::uint32_t>(at(i, j + 1));
      const auto c = static_cast<std::uint32_t>(at(i + 1, j + 1));
      const auto d = static_cast<std::uint32_t>(at(i + 1, j));
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  return mesh;
}

double signed_volume(const MeshFrame& mesh) {
  double six_v = 0.0;
  for (const auto& f : mesh.triangles) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    six_v += dot(a, cross(b, c));
  }
  return six_v / 6.0;
}

double max_edge_length(const MeshFrame& mesh) {
  double m = 0.0;
  for (const auto& f : mesh.triangles)
    for (int k = 0; k < 3; ++k)
      m = std::max(m, (mesh.vertices[f[k]] - mesh.vertices[f[(k + 1) % 3]]).norm());
  return m;
}

}  // namespace everse
