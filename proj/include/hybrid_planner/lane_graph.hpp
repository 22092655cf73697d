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

#ifndef HYBRID_PLANNER__LANE_GRAPH_HPP_
#define HYBRID_PLANNER__LANE_GRAPH_HPP_

#include <hybrid_planner/geometry.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hybrid_planner::lanes
{

using geometry::Footprint;
using geometry::Polyline;
using geometry::Vec2;

inline constexpr double kStationSpacing = 0.5;  // m, corridor and centerline resolution

struct Lane
{
  std::string id;
  Polyline centerline;
  Polyline left_bound;
  Polyline right_bound;
  double speed_limit{8.33};  // m/s
  std::vector<std::string> successors;
};

struct LaneGraph
{
  std::map<std::string, Lane> lanes;

  const Lane & at(const std::string & id) const
  {
    const auto it = lanes.find(id);
    if (it == lanes.end()) {
      throw std::invalid_argument("unknown lane id '" + id + "'");
    }
    return it->second;
  }

  /// Checks referential integrity, speed limits, and that each centerline
  /// actually runs between its bounds.
  void validate() const
  {
    for (const auto & [id, lane] : lanes) {
      if (lane.speed_limit <= 0.0) {
        throw std::invalid_argument("lane '" + id + "': speed_limit must be positive");
      }
      for (const auto & succ : lane.successors) {
        if (succ == id) {
          throw std::invalid_argument("lane '" + id + "' lists itself as successor");
        }
        if (lanes.find(succ) == lanes.end()) {
          throw std::invalid_argument("lane '" + id + "': unknown successor id '" + succ + "'");
        }
      }
      const double len = lane.centerline.length();
      for (double s = 0.0; s <= len; s += 2.0) {
        const Vec2 p = lane.centerline.point_at(s);
        const auto fl = geometry::project_to_path(lane.left_bound, p, 0.0);
        const auto fr = geometry::project_to_path(lane.right_bound, p, 0.0);
        if (fl.d > -1e-6 || fr.d < 1e-6) {
          throw std::invalid_argument("lane '" + id + "': centerline not between bounds");
        }
      }
    }
  }
};

struct Route
{
  std::vector<std::string> lane_ids;
  double total_length{0.0};
};

/// Per-station lateral freedom around a reference path, already inflated by
/// half the vehicle width: a reference offset d with right_limit <= d <=
/// left_limit keeps the footprint inside the lane bounds on straights.
struct DrivableCorridor
{
  Polyline reference;
  std::vector<double> stations;
  std::vector<double> left_limit;
  std::vector<double> right_limit;

  /// Interpolated limits at arc length s (clamped to the station range).
  std::pair<double, double> limits_at(double s) const
  {
    if (stations.empty()) {
      throw std::invalid_argument("empty corridor");
    }
    if (s <= stations.front()) {
      return {left_limit.front(), right_limit.front()};
    }
    if (s >= stations.back()) {
      return {left_limit.back(), right_limit.back()};
    }
    const auto it = std::upper_bound(stations.begin(), stations.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - stations.begin()) - 1;
    const double u = (s - stations[i]) / (stations[i + 1] - stations[i]);
    return {
      left_limit[i] + u * (left_limit[i + 1] - left_limit[i]),
      right_limit[i] + u * (right_limit[i + 1] - right_limit[i])};
  }
};

/// Dijkstra over successor edges, edge weight = centerline length. Ties are
/// broken toward the lexicographically smaller lane-id sequence so results
/// are reproducible across runs.
inline Route shortest_route(
  const LaneGraph & graph, const std::string & start_lane, const std::string & goal_lane)
{
  graph.at(start_lane);
  graph.at(goal_lane);

  struct NodeState
  {
    double dist{std::numeric_limits<double>::infinity()};
    std::vector<std::string> path;
    bool settled{false};
  };
  std::map<std::string, NodeState> state;
  state[start_lane].dist = graph.at(start_lane).centerline.length();
  state[start_lane].path = {start_lane};

  while (true) {
    // Select the unsettled node with the smallest (dist, path) key.
    const NodeState * best = nullptr;
    std::string best_id;
    for (const auto & [id, st] : state) {
      if (st.settled || !std::isfinite(st.dist)) {
        continue;
      }
      if (
        best == nullptr || st.dist < best->dist - 1e-12 ||
        (std::abs(st.dist - best->dist) <= 1e-12 && st.path < best->path)) {
        best = &st;
        best_id = id;
      }
    }
    if (best == nullptr) {
      throw std::runtime_error("no route");
    }
    if (best_id == goal_lane) {
      return Route{best->path, best->dist};
    }
    auto & settled = state[best_id];
    settled.settled = true;

    for (const auto & succ : graph.at(best_id).successors) {
      const double cand_dist = settled.dist + graph.at(succ).centerline.length();
      auto & st = state[succ];
      if (st.settled) {
        continue;
      }
      std::vector<std::string> cand_path = settled.path;
      cand_path.push_back(succ);
      if (
        cand_dist < st.dist - 1e-12 ||
        (std::abs(cand_dist - st.dist) <= 1e-12 && cand_path < st.path)) {
        st.dist = cand_dist;
        st.path = std::move(cand_path);
      }
    }
  }
}

namespace detail
{
/// Concatenate per-lane polylines in route order, merging duplicate junction
/// vertices. `max_gap` < 0 disables the discontinuity check.
inline Polyline concat_route_polylines(
  const LaneGraph & graph, const Route & route, const Polyline Lane::* member, double max_gap)
{
  std::vector<Vec2> pts;
  for (const auto & id : route.lane_ids) {
    const auto & verts = (graph.at(id).*member).vertices();
    std::size_t first = 0;
    if (!pts.empty()) {
      const double gap = (verts.front() - pts.back()).norm();
      if (max_gap >= 0.0 && gap > max_gap) {
        throw std::runtime_error("discontinuous route at lane '" + id + "'");
      }
      if (gap < 1e-6) {
        first = 1;  // merge the shared junction vertex
      }
    }
    pts.insert(pts.end(), verts.begin() + first, verts.end());
  }
  return Polyline(std::move(pts));
}
}  // namespace detail

/// Concatenated route centerline resampled at the station spacing.
inline Polyline route_centerline(const LaneGraph & graph, const Route & route)
{
  if (route.lane_ids.empty()) {
    throw std::invalid_argument("empty route");
  }
  for (std::size_t i = 0; i + 1 < route.lane_ids.size(); ++i) {
    const auto & succ = graph.at(route.lane_ids[i]).successors;
    if (std::find(succ.begin(), succ.end(), route.lane_ids[i + 1]) == succ.end()) {
      throw std::invalid_argument("route lanes not connected by successor edges");
    }
  }
  const Polyline cat =
    detail::concat_route_polylines(graph, route, &Lane::centerline, kStationSpacing);
  return geometry::resample_uniform(cat, kStationSpacing);
}

/// Lateral freedom along the route. At each station the limits are the
/// distances to the lane bounds minus half the footprint width.
inline DrivableCorridor corridor_along(
  const LaneGraph & graph, const Route & route, const Footprint & ego_footprint)
{
  DrivableCorridor corridor;
  corridor.reference = route_centerline(graph, route);
  const Polyline left_cat =
    detail::concat_route_polylines(graph, route, &Lane::left_bound, -1.0);
  const Polyline right_cat =
    detail::concat_route_polylines(graph, route, &Lane::right_bound, -1.0);

  const double half_width = ego_footprint.width / 2.0;
  const auto & stations = corridor.reference.arc_lengths();
  const auto & points = corridor.reference.vertices();
  corridor.stations = stations;
  corridor.left_limit.resize(stations.size());
  corridor.right_limit.resize(stations.size());
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double dl = std::abs(geometry::project_to_path(left_cat, points[i], 0.0).d);
    const double dr = std::abs(geometry::project_to_path(right_cat, points[i], 0.0).d);
    corridor.left_limit[i] = dl - half_width;
    corridor.right_limit[i] = -(dr - half_width);
    if (corridor.left_limit[i] <= corridor.right_limit[i]) {
      throw std::runtime_error("impassable corridor");
    }
  }
  return corridor;
}

}  // namespace hybrid_planner::lanes

#endif  // HYBRID_PLANNER__LANE_GRAPH_HPP_
