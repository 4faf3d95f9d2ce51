#pragma once

#include "everse/vec3.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace everse {

struct Aabb {
  Vec3 lo{0.0, 0.0, 0.0}, hi{0.0, 0.0, 0.0};

  void grow(const Vec3& p);
  void grow(const Aabb& b);
  bool overlaps(const Aabb& b, double pad = 0.0) const;
  Vec3 center() const { return (lo + hi) * 0.5; }
};

// Median-split bounding volume hierarchy over a triangle soup.
class TriangleBvh {
 public:
  TriangleBvh(const std::vector<Vec3>& vertices,
              const std::vector<std::array<std::uint32_t, 3>>& triangles);

  // Every unordered triangle pair whose boxes overlap, i < j.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> self_pairs(
      double pad = 0.0) const;

 private:
  struct Node {
    Aabb box;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf triangle range in order_
  };

  int build(int begin, int end);
  void pairs_in(int node, std::vector<std::pair<std::uint32_t, std::uint32_t>>& out,
                double pad) const;
  void pairs_between(int a, int b,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>>& out,
                     double pad) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
  std::vector<Aabb> boxes_;
  std::vector<Vec3> centers_;
  int root_ = -1;
};

// Proper crossing segment of two triangles, if any.  Coplanar overlaps and
// touches shorter than the tolerance do not count.
bool tri_tri_segment(const std::array<Vec3, 3>& ta, const std::array<Vec3, 3>& tb,
                     Vec3& s0, Vec3& s1, double tol = 1e-12);

}  // namespace everse
