#include "everse/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace everse {

void Aabb::grow(const Vec3& p) {
  lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
  hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
}

void Aabb::grow(const Aabb& b) {
  grow(b.lo);
  grow(b.hi);
}

bool Aabb::overlaps(const Aabb& b, double pad) const {
  return lo.x <= b.hi.x + pad && b.lo.x <= hi.x + pad &&
         lo.y <= b.hi.y + pad && b.lo.y <= hi.y + pad &&
         lo.z <= b.hi.z + pad && b.lo.z <= hi.z + pad;
}

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Aabb empty_box() { return {{kInf, kInf, kInf}, {-kInf, -kInf, -kInf}}; }
}  // namespace

TriangleBvh::TriangleBvh(const std::vector<Vec3>& vertices,
                         const std::vector<std::array<std::uint32_t, 3>>& triangles) {
  const auto n = triangles.size();
  order_.resize(n);
  boxes_.resize(n);
  centers_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    order_[i] = static_cast<std::uint32_t>(i);
    Aabb b = empty_box();
    for (int k = 0; k < 3; ++k) b.grow(vertices[triangles[i][k]]);
    boxes_[i] = b;
    centers_[i] = b.center();
  }
  nodes_.reserve(n > 0 ? 2 * n : 1);
  if (n > 0) root_ = build(0, static_cast<int>(n));
}

int TriangleBvh::build(int begin, int end) {
  Node node;
  node.box = empty_box();
  for (int i = begin; i < end; ++i) node.box.grow(boxes_[order_[i]]);
  node.begin = begin;
  node.end = end;

  if (end - begin > 4) {
    Aabb cb = empty_box();
    for (int i = begin; i < end; ++i) cb.grow(centers_[order_[i]]);
    const Vec3 ext = cb.hi - cb.lo;
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > (axis == 0 ? ext.x : ext.y)) axis = 2;
    auto key = [this, axis](std::uint32_t tri) {
      const Vec3& c = centers_[tri];
      return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
    };
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
    if (mid > begin && mid < end) {
      const int self = static_cast<int>(nodes_.size());
      nodes_.push_back(node);
      const int left = build(begin, mid);
      const int right = build(mid, end);
      nodes_[self].left = left;
      nodes_[self].right = right;
      return self;
    }
  }
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

void TriangleBvh::pairs_in(
    int node, std::vector<std::pair<std::uint32_t, std::uint32_t>>& out,
    double pad) const {
  const Node& nd = nodes_[node];
  if (nd.left < 0) {
    for (int i = nd.begin; i < nd.end; ++i)
      for (int j = i + 1; j < nd.end; ++j) {
        const auto a = order_[i], b = order_[j];
        if (boxes_[a].overlaps(boxes_[b], pad))
          out.emplace_back(std::min(a, b), std::max(a, b));
      }
    return;
  }
  pairs_in(nd.left, out, pad);
  pairs_in(nd.right, out, pad);
  pairs_between(nd.left, nd.right, out, pad);
}

void TriangleBvh::pairs_between(
    int a, int b, std::vector<std::pair<std::uint32_t, std::uint32_t>>& out,
    double pad) const {
  const Node& na = nodes_[a];
  const Node& nb = nodes_[b];
  if (!na.box.overlaps(nb.box, pad)) return;
  if (na.left < 0 && nb.left < 0) {
    for (int i = na.begin; i < na.end; ++i)
      for (int j = nb.begin; j < nb.end; ++j) {
        const auto ta = order_[i], tb = order_[j];
        if (boxes_[ta].overlaps(boxes_[tb], pad))
          out.emplace_back(std::min(ta, tb), std::max(ta, tb));
      }
    return;
  }
  if (nb.left < 0 || (na.left >= 0 && na.end - na.begin >= nb.end - nb.begin)) {
    pairs_between(na.left, b, out, pad);
    pairs_between(na.right, b, out, pad);
  } else {
    pairs_between(a, nb.left, out, pad);
    pairs_between(a, nb.right, out, pad);
  }
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> TriangleBvh::self_pairs(
    double pad) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  if (root_ >= 0) pairs_in(root_, out, pad);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Crossing segment of one triangle with the plane of the other: the two
// points where edges change side.
int plane_crossings(const std::array<Vec3, 3>& v, const double d[3], Vec3 out[2]) {
  int m = 0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (d[i] == 0.0) {
      if (m < 2) out[m++] = v[i];
      continue;
    }
    if ((d[i] > 0.0) != (d[j] > 0.0) && d[j] != 0.0) {
      if (m < 2) out[m++] = v[i] + (v[j] - v[i]) * (d[i] / (d[i] - d[j]));
    }
  }
  return m;
}

}  // namespace

bool tri_tri_segment(const std::array<Vec3, 3>& ta, const std::array<Vec3, 3>& tb,
                     Vec3& s0, Vec3& s1, double tol) {
  const Vec3 na = cross(ta[1] - ta[0], ta[2] - ta[0]);
  const Vec3 nb = cross(tb[1] - tb[0], tb[2] - tb[0]);
  const double scale =
      std::max({na.norm(), nb.norm(), std::numeric_limits<double>::min()});
  const double eps = 1e-13 * scale;

  double db[3], da[3];
  int pos = 0, neg = 0;
  for (int i = 0; i < 3; ++i) {
    db[i] = dot(na, tb[i] - ta[0]);
    if (std::fabs(db[i]) < eps) db[i] = 0.0;
    pos += db[i] > 0.0;
    neg += db[i] < 0.0;
  }
  if (pos == 0 || neg == 0) return false;
  pos = neg = 0;
  for (int i = 0; i < 3; ++i) {
    da[i] = dot(nb, ta[i] - tb[0]);
    if (std::fabs(da[i]) < eps) da[i] = 0.0;
    pos += da[i] > 0.0;
    neg += da[i] < 0.0;
  }
  if (pos == 0 || neg == 0) return false;

  Vec3 pa[2], pb[2];
  if (plane_crossings(ta, da, pa) < 2) return false;
  if (plane_crossings(tb, db, pb) < 2) return false;

  // both segments lie on the plane intersection line; overlap along it
  const Vec3 dir = cross(na, nb);
  const double len2 = dir.norm2();
  if (len2 <= 0.0) return false;
  auto par = [&](const Vec3& p) { return dot(dir, p) / len2; };
  double a0 = par(pa[0]), a1 = par(pa[1]);
  double b0 = par(pb[0]), b1 = par(pb[1]);
  Vec3 qa0 = pa[0], qa1 = pa[1], qb0 = pb[0], qb1 = pb[1];
  if (a0 > a1) { std::swap(a0, a1); std::swap(qa0, qa1); }
  if (b0 > b1) { std::swap(b0, b1); std::swap(qb0, qb1); }
  const double lo = std::max(a0, b0), hi = std::min(a1, b1);
  if (hi - lo <= tol) return false;
  s0 = a0 >= b0 ? qa0 : qb0;
  s1 = a1 <= b1 ? qa1 : qb1;
  return true;
}

}  // namespace everse
