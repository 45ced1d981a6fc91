#ifndef RIGHTSIM_GEOMETRY_HPP
#define RIGHTSIM_GEOMETRY_HPP

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace rightsim {

template <typename Scalar> using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Pose = Eigen::Transform<Scalar, 3, Eigen::Isometry>;

template <typename Scalar> using Points2 = std::vector<Vec2<Scalar>>;
template <typename Scalar> using Points3 = std::vector<Vec3<Scalar>, Eigen::aligned_allocator<Vec3<Scalar>>>;

using Vec2d = Vec2<double>;
using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Posed = Pose<double>;

template <typename Scalar>
Pose<Scalar> identity_pose() {
  return Pose<Scalar>::Identity();
}

/// Minimum distance between segments [p0,p1] and [q0,q1]. Degenerate
/// (zero-length) segments are handled as points.
template <typename Scalar>
Scalar segment_distance(const Vec3<Scalar>& p0, const Vec3<Scalar>& p1, const Vec3<Scalar>& q0,
                        const Vec3<Scalar>& q1) {
  const Vec3<Scalar> d1 = p1 - p0;
  const Vec3<Scalar> d2 = q1 - q0;
  const Vec3<Scalar> r = p0 - q0;
  const Scalar a = d1.squaredNorm();
  const Scalar e = d2.squaredNorm();
  const Scalar f = d2.dot(r);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  Scalar s = 0;
  Scalar t = 0;
  if (a <= eps && e <= eps) {
    return r.norm();
  }
  if (a <= eps) {
    t = std::clamp<Scalar>(f / e, 0, 1);
  } else {
    const Scalar c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp<Scalar>(-c / a, 0, 1);
    } else {
      const Scalar b = d1.dot(d2);
      const Scalar denom = a * e - b * b;
      s = denom > eps * a * e ? std::clamp<Scalar>((b * f - c * e) / denom, 0, 1) : Scalar(0);
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp<Scalar>(-c / a, 0, 1);
      } else if (t > 1) {
        t = 1;
        s = std::clamp<Scalar>((b - c) / a, 0, 1);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

template <typename Scalar>
Scalar cross2(const Vec2<Scalar>& o, const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, collinear
/// boundary points dropped. Returns 1 or 2 points for degenerate input.
template <typename Scalar>
Points2<Scalar> convex_hull(Points2<Scalar> pts, Scalar merge_tol = Scalar(1e-12)) {
  std::sort(pts.begin(), pts.end(), [](const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [merge_tol](const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
                          return (a - b).norm() <= merge_tol;
                        }),
            pts.end());
  if (pts.size() < 3) {
    return pts;
  }
  Points2<Scalar> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Closest boundary feature of a convex hull to a query point.
template <typename Scalar>
struct HullQuery {
  bool inside = false;       // query inside or on the hull (within tolerance)
  Scalar distance = 0;       // distance to the hull (0 when inside)
  Vec2<Scalar> nearest;      // nearest point on the hull
  int edge = -1;             // edge index (start vertex) whose interior is nearest, else -1
  int vertex = -1;           // vertex index when the nearest point is a vertex
};

template <typename Scalar>
HullQuery<Scalar> query_hull(const Points2<Scalar>& hull, const Vec2<Scalar>& c, Scalar tol) {
  HullQuery<Scalar> out;
  const auto n = static_cast<int>(hull.size());
  if (n == 0) {
    out.distance = std::numeric_limits<Scalar>::infinity();
    return out;
  }
  if (n == 1) {
    out.nearest = hull[0];
    out.vertex = 0;
    out.distance = (c - hull[0]).norm();
    out.inside = out.distance <= tol;
    return out;
  }

  bool strictly_inside = n >= 3;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  const int edges = n == 2 ? 1 : n;
  for (int i = 0; i < edges; ++i) {
    const Vec2<Scalar>& a = hull[i];
    const Vec2<Scalar>& b = hull[(i + 1) % n];
    const Vec2<Scalar> ab = b - a;
    if (n >= 3 && cross2(a, b, c) < 0) strictly_inside = false;
    const Scalar len2 = ab.squaredNorm();
    Scalar u = len2 > 0 ? (c - a).dot(ab) / len2 : Scalar(0);
    u = std::clamp<Scalar>(u, 0, 1);
    const Vec2<Scalar> q = a + u * ab;
    const Scalar d = (c - q).norm();
    if (d < best) {
      best = d;
      out.nearest = q;
      const Scalar len = std::sqrt(len2);
      const Scalar end_tol = len > 0 ? Scalar(1e-9) / len : Scalar(1);
      if (u <= end_tol) {
        out.edge = -1;
        out.vertex = i;
      } else if (u >= 1 - end_tol) {
        out.edge = -1;
        out.vertex = (i + 1) % n;
      } else {
        out.edge = i;
        out.vertex = -1;
      }
    }
  }
  if (strictly_inside) {
    out.inside = true;
    out.distance = 0;
    return out;
  }
  out.distance = best;
  out.inside = best <= tol;
  return out;
}

/// Rigid motion in the ground plane: x' = Rz(yaw) x + (dx, dy).
template <typename Scalar>
struct PlanarMotion {
  Scalar dx = 0;
  Scalar dy = 0;
  Scalar dyaw = 0;

  Vec2<Scalar> apply(const Vec2<Scalar>& p) const {
    const Scalar c = std::cos(dyaw), s = std::sin(dyaw);
    return {c * p.x() - s * p.y() + dx, s * p.x() + c * p.y() + dy};
  }

  Pose<Scalar> as_pose() const {
    Pose<Scalar> m = Pose<Scalar>::Identity();
    m.linear() = Eigen::AngleAxis<Scalar>(dyaw, Vec3<Scalar>::UnitZ()).toRotationMatrix();
    m.translation() = Vec3<Scalar>(dx, dy, 0);
    return m;
  }
};

/// Sum of squared residuals |motion(src_i) - dst_i|^2.
template <typename Scalar>
Scalar planar_objective(const PlanarMotion<Scalar>& m, const Points2<Scalar>& src, const Points2<Scalar>& dst) {
  Scalar sum = 0;
  for (std::size_t i = 0; i < src.size(); ++i) sum += (m.apply(src[i]) - dst[i]).squaredNorm();
  return sum;
}

/// Closed-form least-squares 2-D registration (src -> dst). One point gives
/// a pure translation; an empty set gives the identity.
template <typename Scalar>
PlanarMotion<Scalar> register_planar(const Points2<Scalar>& src, const Points2<Scalar>& dst) {
  PlanarMotion<Scalar> m;
  if (src.empty()) return m;
  if (src.size() == 1) {
    m.dx = dst[0].x() - src[0].x();
    m.dy = dst[0].y() - src[0].y();
    return m;
  }
  Vec2<Scalar> cs = Vec2<Scalar>::Zero(), cd = Vec2<Scalar>::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cs += src[i];
    cd += dst[i];
  }
  cs /= static_cast<Scalar>(src.size());
  cd /= static_cast<Scalar>(src.size());
  Scalar sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec2<Scalar> a = src[i] - cs;
    const Vec2<Scalar> b = dst[i] - cd;
    sxx += a.dot(b);
    sxy += a.x() * b.y() - a.y() * b.x();
  }
  m.dyaw = (sxx == 0 && sxy == 0) ? Scalar(0) : std::atan2(sxy, sxx);
  const Scalar c = std::cos(m.dyaw), s = std::sin(m.dyaw);
  m.dx = cd.x() - (c * cs.x() - s * cs.y());
  m.dy = cd.y() - (s * cs.x() + c * cs.y());
  return m;
}

/// Weighted least-squares rigid transform mapping src onto dst (Kabsch with
/// reflection guard).
template <typename Scalar>
Pose<Scalar> register_rigid(const Points3<Scalar>& src, const Points3<Scalar>& dst,
                            const std::vector<Scalar>& weights) {
  Scalar wsum = 0;
  Vec3<Scalar> cs = Vec3<Scalar>::Zero(), cd = Vec3<Scalar>::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    wsum += weights[i];
    cs += weights[i] * src[i];
    cd += weights[i] * dst[i];
  }
  Pose<Scalar> out = Pose<Scalar>::Identity();
  if (wsum <= 0) return out;
  cs /= wsum;
  cd /= wsum;
  Mat3<Scalar> h = Mat3<Scalar>::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    h.noalias() += weights[i] * (src[i] - cs) * (dst[i] - cd).transpose();
  }
  Eigen::JacobiSVD<Mat3<Scalar>> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3<Scalar> d = Mat3<Scalar>::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) d(2, 2) = -1;
  const Mat3<Scalar> r = svd.matrixV() * d * svd.matrixU().transpose();
  out.linear() = r;
  out.translation() = cd - r * cs;
  return out;
}

/// Wrap an angle into [-pi, pi).
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  const Scalar two_pi = Scalar(2 * M_PI);
  a = std::fmod(a + Scalar(M_PI), two_pi);
  if (a < 0) a += two_pi;
  return a - Scalar(M_PI);
}

/// Continuous continuation of `raw` (any branch) nearest to `previous`.
template <typename Scalar>
Scalar unwrap_next(Scalar previous, Scalar raw) {
  return previous + wrap_angle(raw - previous);
}

}  // namespace rightsim

#endif  // RIGHTSIM_GEOMETRY_HPP
