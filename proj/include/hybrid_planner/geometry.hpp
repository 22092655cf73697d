// Copyright 2026 Hybrid Planner Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HYBRID_PLANNER__GEOMETRY_HPP_
#define HYBRID_PLANNER__GEOMETRY_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybrid_planner::geometry
{

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;  // convex, counter-clockwise

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Wrap an angle into (-pi, pi].
inline double normalize_angle(double a)
{
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) {
    r += 2.0 * kPi;
  }
  return r;
}

/// Shortest-arc interpolation between two angles, u in [0, 1].
inline double lerp_angle(double a, double b, double u)
{
  return normalize_angle(a + normalize_angle(b - a) * u);
}

struct Pose2D
{
  double x{0.0};
  double y{0.0};
  double heading{0.0};  // radians in (-pi, pi]

  Pose2D() = default;
  Pose2D(double x_in, double y_in, double heading_in)
  : x(x_in), y(y_in), heading(normalize_angle(heading_in))
  {
  }

  Vec2 position() const { return {x, y}; }

  /// Map a point given in this pose's body frame into the world frame.
  Vec2 body_to_world(const Vec2 & p) const
  {
    const double c = std::cos(heading), s = std::sin(heading);
    return {x + c * p.x() - s * p.y(), y + s * p.x() + c * p.y()};
  }

  /// Map a world-frame point into this pose's body frame.
  Vec2 world_to_body(const Vec2 & p) const
  {
    const double c = std::cos(heading), s = std::sin(heading);
    const double dx = p.x() - x, dy = p.y() - y;
    return {c * dx + s * dy, -s * dx + c * dy};
  }
};

/// Full kinematic state of the ego vehicle at one timestamp.
/// Longitudinal/lateral quantities are expressed in the body frame.
struct EgoState
{
  Pose2D pose;
  double vel_lon{0.0};
  double vel_lat{0.0};
  double vel_ang{0.0};
  double acc_lon{0.0};
  double acc_lat{0.0};
  double acc_ang{0.0};
  double timestamp{0.0};
};

struct TrajectoryPoint
{
  Pose2D pose;
  double t{0.0};          // seconds relative to plan start
  double speed{0.0};      // m/s, >= 0
  double accel{0.0};      // m/s^2
  double curvature{0.0};  // 1/m, left turn positive
};

/// Uniformly sampled sequence of trajectory points.
struct Trajectory
{
  std::vector<TrajectoryPoint> points;
  double dt{0.1};

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  double duration() const { return points.empty() ? 0.0 : points.back().t - points.front().t; }

  /// Throws if the spacing is not uniform, times are not strictly
  /// increasing, or there are fewer than two points.
  void validate() const
  {
    if (points.size() < 2) {
      throw std::invalid_argument("trajectory needs at least 2 points");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
      const double step = points[i].t - points[i - 1].t;
      if (step <= 0.0) {
        throw std::invalid_argument("trajectory times not strictly increasing");
      }
      if (std::abs(step - dt) > 1e-9) {
        throw std::invalid_argument("trajectory spacing not uniform");
      }
    }
  }
};

/// Piecewise-linear path with precomputed cumulative arc length and a
/// continuous heading field (per-vertex headings, shortest-arc interpolated
/// along each segment). The continuous frame keeps lateral projection and
/// its inverse consistent across segment joints.
class Polyline
{
public:
  Polyline() = default;

  explicit Polyline(std::vector<Vec2> vertices) : vertices_(std::move(vertices))
  {
    if (vertices_.size() < 2) {
      throw std::invalid_argument("degenerate polyline: need at least 2 vertices");
    }
    const std::size_t n = vertices_.size();
    arc_.resize(n);
    arc_[0] = 0.0;
    std::vector<double> seg_heading(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      const Vec2 d = vertices_[i] - vertices_[i - 1];
      const double len = d.norm();
      if (len < 1e-12) {
        throw std::invalid_argument("degenerate polyline: duplicate vertices");
      }
      arc_[i] = arc_[i - 1] + len;
      seg_heading[i - 1] = std::atan2(d.y(), d.x());
    }
    heading_.resize(n);
    heading_[0] = seg_heading.front();
    heading_[n - 1] = seg_heading.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
      heading_[i] = lerp_angle(seg_heading[i - 1], seg_heading[i], 0.5);
    }
  }

  const std::vector<Vec2> & vertices() const { return vertices_; }
  const std::vector<double> & arc_lengths() const { return arc_; }
  std::size_t size() const { return vertices_.size(); }
  double length() const { return arc_.empty() ? 0.0 : arc_.back(); }

  /// Index of the segment containing arc length s (clamped).
  std::size_t segment_index(double s) const
  {
    if (s <= 0.0) {
      return 0;
    }
    const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - arc_.begin());
    return std::min(i - 1, vertices_.size() - 2);
  }

  /// Position at arc length s (clamped to [0, length]).
  Vec2 point_at(double s) const
  {
    const std::size_t i = segment_index(s);
    const double seg = arc_[i + 1] - arc_[i];
    const double u = std::clamp((s - arc_[i]) / seg, 0.0, 1.0);
    return vertices_[i] + u * (vertices_[i + 1] - vertices_[i]);
  }

  /// Interpolated frame heading at arc length s.
  double heading_at(double s) const
  {
    const std::size_t i = segment_index(s);
    const double seg = arc_[i + 1] - arc_[i];
    const double u = std::clamp((s - arc_[i]) / seg, 0.0, 1.0);
    return lerp_angle(heading_[i], heading_[i + 1], u);
  }

  Vec2 tangent_at(double s) const
  {
    const double h = heading_at(s);
    return {std::cos(h), std::sin(h)};
  }

  /// Left unit normal at arc length s.
  Vec2 normal_at(double s) const
  {
    const double h = heading_at(s);
    return {-std::sin(h), std::cos(h)};
  }

private:
  std::vector<Vec2> vertices_;
  std::vector<double> arc_;
  std::vector<double> heading_;
};

/// Path-relative coordinates. d > 0 is left of the path tangent.
struct FrenetCoord
{
  double s{0.0};
  double d{0.0};
  double heading_err{0.0};
};

/// Vehicle body geometry. The pose reference point is the rear axle.
struct Footprint
{
  double length{4.5};
  double width{2.0};
  double rear_axle_to_rear{1.0};
  double wheelbase{2.7};

  Polygon polygon_at(const Pose2D & pose) const
  {
    const double xr = -rear_axle_to_rear;
    const double xf = length - rear_axle_to_rear;
    const double hw = width / 2.0;
    return {
      pose.body_to_world({xr, -hw}), pose.body_to_world({xf, -hw}),
      pose.body_to_world({xf, hw}), pose.body_to_world({xr, hw})};
  }
};

inline bool is_convex(const Polygon & poly)
{
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  double sign = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[(i + 1) % n] - poly[i];
    const Vec2 b = poly[(i + 2) % n] - poly[(i + 1) % n];
    const double cross = a.x() * b.y() - a.y() * b.x();
    if (std::abs(cross) < 1e-12) {
      continue;  // collinear edge
    }
    if (sign == 0.0) {
      sign = cross > 0.0 ? 1.0 : -1.0;
    } else if (cross * sign < 0.0) {
      return false;
    }
  }
  return true;
}

namespace detail
{
inline void project_polygon(const Polygon & poly, const Vec2 & axis, double & lo, double & hi)
{
  lo = std::numeric_limits<double>::infinity();
  hi = -std::numeric_limits<double>::infinity();
  for (const auto & v : poly) {
    const double p = axis.dot(v);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
}

inline bool separated_by_edges_of(const Polygon & a, const Polygon & b)
{
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = a[(i + 1) % n] - a[i];
    const Vec2 axis{-e.y(), e.x()};
    double lo_a, hi_a, lo_b, hi_b;
    project_polygon(a, axis, lo_a, hi_a);
    project_polygon(b, axis, lo_b, hi_b);
    if (hi_a < lo_b || hi_b < lo_a) {
      return true;
    }
  }
  return false;
}
}  // namespace detail

/// Separating-axis intersection test for two convex polygons.
inline bool convex_polygons_intersect(const Polygon & a, const Polygon & b)
{
  return !detail::separated_by_edges_of(a, b) && !detail::separated_by_edges_of(b, a);
}

/// True iff the oriented footprint rectangle at pose intersects any obstacle.
inline bool footprint_collides(
  const Pose2D & pose, const Footprint & fp, const std::vector<Polygon> & obstacles)
{
  const Polygon body = fp.polygon_at(pose);
  for (const auto & obs : obstacles) {
    if (!is_convex(obs)) {
      throw std::invalid_argument("non-convex obstacle");
    }
    if (convex_polygons_intersect(body, obs)) {
      return true;
    }
  }
  return false;
}

namespace detail
{
/// Orthogonality residual of the continuous frame: zero where the query
/// point lies on the normal line through the path point at s.
inline double frenet_residual(const Polyline & path, const Vec2 & p, double s)
{
  return (p - path.point_at(s)).dot(path.tangent_at(s));
}
}  // namespace detail

/// Projection of (point, heading) onto the path's continuous frame: finds
/// the foot point where the query lies on the local normal, picking the
/// closest root when the path folds back. Clamped at the endpoints.
inline FrenetCoord project_to_path(const Polyline & path, const Vec2 & point, double heading)
{
  if (path.size() < 2) {
    throw std::invalid_argument("degenerate path");
  }
  const auto & arc = path.arc_lengths();
  const std::size_t n_seg = path.size() - 1;

  double best_s = std::numeric_limits<double>::quiet_NaN();
  double best_d2 = std::numeric_limits<double>::infinity();
  const auto consider = [&](double s) {
    const double d2 = (point - path.point_at(s)).squaredNorm();
    if (d2 < best_d2 - 1e-15) {
      best_d2 = d2;
      best_s = s;
    }
  };

  const double f_start = detail::frenet_residual(path, point, arc[0]);
  const double f_end = detail::frenet_residual(path, point, path.length());
  if (f_start < 0.0) {
    consider(0.0);  // behind the start
  }
  if (f_end > 0.0) {
    consider(path.length());  // beyond the end
  }

  double f_lo = f_start;
  for (std::size_t i = 0; i < n_seg; ++i) {
    const double f_hi = detail::frenet_residual(path, point, arc[i + 1]);
    if (f_lo == 0.0) {
      consider(arc[i]);
    } else if (f_lo * f_hi < 0.0) {
      double lo = arc[i], hi = arc[i + 1];
      double f_a = f_lo;
      for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_m = detail::frenet_residual(path, point, mid);
        if (f_a * f_m <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          f_a = f_m;
        }
      }
      consider(0.5 * (lo + hi));
    }
    f_lo = f_hi;
  }
  if (f_lo == 0.0) {
    consider(path.length());
  }

  const Vec2 normal = path.normal_at(best_s);
  FrenetCoord fr;
  fr.s = best_s;
  fr.d = normal.dot(point - path.point_at(best_s));
  fr.heading_err = normalize_angle(heading - path.heading_at(best_s));
  return fr;
}

/// Windowed variant of project_to_path: only searches arc lengths within
/// `half_window` of `s_hint`, falling back to the full search when no foot
/// point exists there. Intended for tracking queries that advance along the
/// path, where the previous station is a reliable hint.
inline FrenetCoord project_to_path_hinted(
  const Polyline & path, const Vec2 & point, double heading, double s_hint, double half_window)
{
  if (path.size() < 2) {
    throw std::invalid_argument("degenerate path");
  }
  const auto & arc = path.arc_lengths();
  const double lo_s = std::max(0.0, s_hint - half_window);
  const double hi_s = std::min(path.length(), s_hint + half_window);
  const std::size_t i0 = path.segment_index(lo_s);
  const std::size_t i1 = path.segment_index(hi_s);

  double best_s = std::numeric_limits<double>::quiet_NaN();
  double best_d2 = std::numeric_limits<double>::infinity();
  double f_lo = detail::frenet_residual(path, point, arc[i0]);
  for (std::size_t i = i0; i <= i1; ++i) {
    const double f_hi = detail::frenet_residual(path, point, arc[i + 1]);
    if (f_lo == 0.0 || f_lo * f_hi < 0.0) {
      double lo = arc[i], hi = arc[i + 1];
      double f_a = f_lo;
      for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_m = detail::frenet_residual(path, point, mid);
        if (f_a * f_m <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          f_a = f_m;
        }
      }
      const double s = 0.5 * (lo + hi);
      const double d2 = (point - path.point_at(s)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best_s = s;
      }
    }
    f_lo = f_hi;
  }
  // Clamped endpoints inside the window.
  if (i0 == 0 && detail::frenet_residual(path, point, 0.0) < 0.0) {
    if ((point - path.point_at(0.0)).squaredNorm() < best_d2) {
      best_s = 0.0;
      best_d2 = (point - path.point_at(0.0)).squaredNorm();
    }
  }
  if (i1 == path.size() - 2 && detail::frenet_residual(path, point, path.length()) > 0.0) {
    if ((point - path.point_at(path.length())).squaredNorm() < best_d2) {
      best_s = path.length();
    }
  }
  if (!std::isfinite(best_s)) {
    return project_to_path(path, point, heading);
  }

  const Vec2 normal = path.normal_at(best_s);
  FrenetCoord fr;
  fr.s = best_s;
  fr.d = normal.dot(point - path.point_at(best_s));
  fr.heading_err = normalize_angle(heading - path.heading_at(best_s));
  return fr;
}

inline Pose2D frenet_to_cartesian(const Polyline & path, const FrenetCoord & fr)
{
  if (fr.s < -1e-9 || fr.s > path.length() + 1e-9) {
    throw std::invalid_argument("s out of range");
  }
  const double s = std::clamp(fr.s, 0.0, path.length());
  const Vec2 pos = path.point_at(s) + fr.d * path.normal_at(s);
  return {pos.x(), pos.y(), normalize_angle(path.heading_at(s) + fr.heading_err)};
}

/// Resample a polyline at a uniform arc-length step, keeping both endpoints.
inline Polyline resample_uniform(const Polyline & path, double step)
{
  if (step <= 0.0) {
    throw std::invalid_argument("step must be positive");
  }
  const double len = path.length();
  if (step > len) {
    throw std::invalid_argument("step larger than extent");
  }
  std::vector<Vec2> out;
  const auto n_steps = static_cast<std::size_t>(std::floor(len / step + 1e-9));
  out.reserve(n_steps + 2);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    out.push_back(path.point_at(static_cast<double>(i) * step));
  }
  if (static_cast<double>(n_steps) * step < len - 1e-9) {
    out.push_back(path.point_at(len));
  } else {
    out.back() = path.point_at(len);
  }
  return Polyline(std::move(out));
}

/// Resample a trajectory at a uniform time step. The span must be an
/// integer multiple of the step so endpoints are preserved exactly.
inline Trajectory resample_uniform(const Trajectory & traj, double step)
{
  if (step <= 0.0) {
    throw std::invalid_argument("step must be positive");
  }
  if (traj.points.size() < 2) {
    throw std::invalid_argument("trajectory needs at least 2 points");
  }
  const double t0 = traj.points.front().t;
  const double span = traj.points.back().t - t0;
  if (step > span + 1e-9) {
    throw std::invalid_argument("step larger than extent");
  }
  const auto n_steps = static_cast<std::size_t>(std::llround(span / step));

  Trajectory out;
  out.dt = step;
  out.points.reserve(n_steps + 1);
  std::size_t j = 0;
  for (std::size_t i = 0; i <= n_steps; ++i) {
    const double t = t0 + std::min(static_cast<double>(i) * step, span);
    while (j + 2 < traj.points.size() && traj.points[j + 1].t <= t) {
      ++j;
    }
    const auto & a = traj.points[j];
    const auto & b = traj.points[j + 1];
    const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
    TrajectoryPoint p;
    p.t = t;
    p.pose = Pose2D(
      a.pose.x + u * (b.pose.x - a.pose.x), a.pose.y + u * (b.pose.y - a.pose.y),
      lerp_angle(a.pose.heading, b.pose.heading, u));
    p.speed = a.speed + u * (b.speed - a.speed);
    p.accel = a.accel + u * (b.accel - a.accel);
    p.curvature = a.curvature + u * (b.curvature - a.curvature);
    out.points.push_back(p);
  }
  return out;
}

/// Signed curvature per vertex from the circumscribed circle of vertex
/// triples. Endpoints copy their neighbor. Left turn is positive.
inline std::vector<double> curvature_profile(const Polyline & path)
{
  const auto & v = path.vertices();
  if (v.size() < 3) {
    throw std::invalid_argument("curvature needs at least 3 vertices");
  }
  for (std::size_t i = 1; i < v.size(); ++i) {
    if ((v[i] - v[i - 1]).norm() < 1e-12) {
      throw std::invalid_argument("duplicate vertices");
    }
  }
  std::vector<double> kappa(v.size(), 0.0);
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Vec2 ab = v[i] - v[i - 1];
    const Vec2 bc = v[i + 1] - v[i];
    const Vec2 ca = v[i - 1] - v[i + 1];
    const double cross = ab.x() * bc.y() - ab.y() * bc.x();
    const double denom = ab.norm() * bc.norm() * ca.norm();
    kappa[i] = denom < 1e-15 ? 0.0 : 2.0 * cross / denom;
  }
  kappa.front() = kappa[1];
  kappa.back() = kappa[kappa.size() - 2];
  return kappa;
}

}  // namespace hybrid_planner::geometry

#endif  // HYBRID_PLANNER__GEOMETRY_HPP_
