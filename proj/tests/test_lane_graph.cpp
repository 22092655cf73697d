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

#include <hybrid_planner/lane_graph.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "test_support.hpp"

using namespace hybrid_planner::lanes;
using namespace hybrid_planner::geometry;
using test_support::make_straight;

namespace
{

Lane straight_lane(
  const std::string & id, Vec2 from, Vec2 to, double width, std::vector<std::string> succ = {})
{
  Lane lane;
  lane.id = id;
  lane.centerline = make_straight(from, to, 1.0);
  const Vec2 dir = (to - from).normalized();
  const Vec2 n{-dir.y(), dir.x()};
  lane.left_bound = make_straight(from + width / 2 * n, to + width / 2 * n, 1.0);
  lane.right_bound = make_straight(from - width / 2 * n, to - width / 2 * n, 1.0);
  lane.successors = std::move(succ);
  return lane;
}

/// Exhaustive simple-path enumeration, the oracle for Dijkstra on small graphs.
void enumerate_paths(
  const LaneGraph & g, const std::string & node, const std::string & goal,
  std::vector<std::string> & path, std::set<std::string> & visited, double len,
  double & best_len, std::vector<std::string> & best_path)
{
  len += g.at(node).centerline.length();
  path.push_back(node);
  visited.insert(node);
  if (node == goal) {
    if (len < best_len - 1e-12 || (std::abs(len - best_len) <= 1e-12 && path < best_path)) {
      best_len = len;
      best_path = path;
    }
  } else {
    for (const auto & succ : g.at(node).successors) {
      if (!visited.count(succ)) {
        enumerate_paths(g, succ, goal, path, visited, len, best_len, best_path);
      }
    }
  }
  path.pop_back();
  visited.erase(node);
}

}  // namespace

TEST_CASE("shortest_route basics")
{
  LaneGraph g;
  g.lanes["a"] = straight_lane("a", {0, 0}, {50, 0}, 4.0, {"b", "c"});
  g.lanes["b"] = straight_lane("b", {50, 0}, {100, 0}, 4.0, {"d"});
  g.lanes["c"] = straight_lane("c", {50, 0}, {50, 60}, 4.0, {"d"});
  g.lanes["d"] = straight_lane("d", {100, 0}, {150, 0}, 4.0);
  g.validate();

  SECTION("start equals goal")
  {
    const Route r = shortest_route(g, "a", "a");
    REQUIRE(r.lane_ids == std::vector<std::string>{"a"});
    CHECK(r.total_length == Catch::Approx(50.0).margin(1e-6));
  }
  SECTION("diamond picks the shorter branch")
  {
    const Route r = shortest_route(g, "a", "d");
    REQUIRE(r.lane_ids == std::vector<std::string>{"a", "b", "d"});
  }
  SECTION("unreachable goal")
  {
    LaneGraph h;
    h.lanes["a"] = straight_lane("a", {0, 0}, {50, 0}, 4.0);
    h.lanes["z"] = straight_lane("z", {0, 100}, {50, 100}, 4.0);
    CHECK_THROWS_WITH(shortest_route(h, "a", "z"), "no route");
  }
  SECTION("deterministic output")
  {
    const Route r1 = shortest_route(g, "a", "d");
    const Route r2 = shortest_route(g, "a", "d");
    CHECK(r1.lane_ids == r2.lane_ids);
    CHECK(r1.total_length == r2.total_length);
  }
}

TEST_CASE("shortest_route matches exhaustive enumeration on random graphs")
{
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> len_dist(20.0, 80.0);
  std::uniform_int_distribution<int> n_dist(4, 10);
  std::bernoulli_distribution edge(0.4);

  for (int trial = 0; trial < 40; ++trial) {
    const int n = n_dist(rng);
    LaneGraph g;
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
      ids.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    // Random lane lengths laid out on separate rows; connectivity is what matters.
    for (int i = 0; i < n; ++i) {
      const double len = len_dist(rng);
      g.lanes[ids[i]] =
        straight_lane(ids[i], {0.0, 10.0 * i}, {len, 10.0 * i}, 4.0);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && edge(rng)) {
          g.lanes[ids[i]].successors.push_back(ids[j]);
        }
      }
    }

    double best_len = std::numeric_limits<double>::infinity();
    std::vector<std::string> best_path;
    std::vector<std::string> path;
    std::set<std::string> visited;
    enumerate_paths(g, ids[0], ids[n - 1], path, visited, 0.0, best_len, best_path);

    if (best_path.empty()) {
      CHECK_THROWS_WITH(shortest_route(g, ids[0], ids[n - 1]), "no route");
    } else {
      const Route r = shortest_route(g, ids[0], ids[n - 1]);
      CHECK(r.total_length == Catch::Approx(best_len).margin(1e-9));
      CHECK(r.lane_ids == best_path);
    }
  }
}

TEST_CASE("route_centerline")
{
  LaneGraph g;
  g.lanes["a"] = straight_lane("a", {0, 0}, {30, 0}, 4.0, {"b"});
  g.lanes["b"] = straight_lane("b", {30, 0}, {60, 0}, 4.0);

  SECTION("single lane resampled")
  {
    const Polyline c = route_centerline(g, Route{{"a"}, 30.0});
    CHECK(c.length() == Catch::Approx(30.0).margin(0.5));
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
      CHECK(c.arc_lengths()[i] - c.arc_lengths()[i - 1] == Catch::Approx(0.5).margin(1e-9));
    }
  }
  SECTION("two lanes concatenate additively")
  {
    const Polyline c = route_centerline(g, shortest_route(g, "a", "b").lane_ids.size() == 2
                                             ? shortest_route(g, "a", "b")
                                             : Route{{"a", "b"}, 60.0});
    CHECK(c.length() == Catch::Approx(60.0).margin(0.5));
  }
  SECTION("discontinuous junction rejected")
  {
    LaneGraph h;
    h.lanes["a"] = straight_lane("a", {0, 0}, {30, 0}, 4.0, {"b"});
    h.lanes["b"] = straight_lane("b", {31.0, 0}, {60, 0}, 4.0);
    CHECK_THROWS_AS(route_centerline(h, Route{{"a", "b"}, 59.0}), std::runtime_error);
  }
  SECTION("arc length monotone on random multi-lane routes")
  {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> step(15.0, 40.0);
    for (int trial = 0; trial < 10; ++trial) {
      LaneGraph h;
      Vec2 cursor{0, 0};
      std::vector<std::string> ids;
      for (int i = 0; i < 5; ++i) {
        const std::string id(1, static_cast<char>('a' + i));
        const Vec2 next = cursor + Vec2{step(rng), 0.0};
        std::vector<std::string> succ;
        if (i < 4) {
          succ.push_back(std::string(1, static_cast<char>('a' + i + 1)));
        }
        h.lanes[id] = straight_lane(id, cursor, next, 4.0, succ);
        ids.push_back(id);
        cursor = next;
      }
      const Polyline c = route_centerline(h, Route{ids, cursor.x()});
      const auto & arc = c.arc_lengths();
      for (std::size_t i = 1; i < arc.size(); ++i) {
        REQUIRE(arc[i] > arc[i - 1]);
      }
    }
  }
}

namespace
{
Lane bound_step_lane(const std::string & id)
{
  // 150 m straight lane, 4 m wide, with the right bound stepping 0.5 m
  // inward over s in [60, 90].
  Lane lane;
  lane.id = id;
  lane.centerline = make_straight({0, 0}, {150, 0}, 1.0);
  lane.left_bound = make_straight({0, 2}, {150, 2}, 1.0);
  std::vector<Vec2> rb;
  for (double x = 0.0; x <= 150.0; x += 1.0) {
    const double y = (x >= 60.0 && x <= 90.0) ? -1.5 : -2.0;
    rb.push_back({x, y});
  }
  lane.right_bound = Polyline(std::move(rb));
  return lane;
}
}  // namespace

TEST_CASE("corridor_along")
{
  const Footprint fp{4.5, 2.0, 1.0, 2.7};

  SECTION("symmetric straight lane")
  {
    LaneGraph g;
    g.lanes["a"] = straight_lane("a", {0, 0}, {100, 0}, 4.0);
    const auto corridor = corridor_along(g, Route{{"a"}, 100.0}, fp);
    for (std::size_t i = 0; i < corridor.stations.size(); ++i) {
      REQUIRE(corridor.left_limit[i] == Catch::Approx(1.0).margin(1e-6));
      REQUIRE(corridor.right_limit[i] == Catch::Approx(-1.0).margin(1e-6));
    }
  }
  SECTION("right-bound step shows up in right_limit")
  {
    LaneGraph g;
    g.lanes["a"] = bound_step_lane("a");
    const auto corridor = corridor_along(g, Route{{"a"}, 150.0}, fp);
    const auto limits_mid = corridor.limits_at(75.0);
    const auto limits_before = corridor.limits_at(40.0);
    CHECK(limits_mid.second == Catch::Approx(-0.5).margin(1e-3));
    CHECK(limits_before.second == Catch::Approx(-1.0).margin(1e-3));
    CHECK(limits_mid.first == Catch::Approx(1.0).margin(1e-3));
  }
  SECTION("containment: offset by left_limit stays inside the left bound")
  {
    std::mt19937 rng(17);
    LaneGraph g;
    g.lanes["a"] = straight_lane("a", {0, 0}, {80, 0}, 4.0, {"b"});
    // Slightly curved second lane.
    Lane b;
    b.id = "b";
    b.centerline = test_support::make_arc({80, 40}, 40.0, -kPi / 2, 0.8, 0.5);
    b.left_bound = test_support::make_arc({80, 40}, 38.0, -kPi / 2, 0.8, 0.5);
    b.right_bound = test_support::make_arc({80, 40}, 42.0, -kPi / 2, 0.8, 0.5);
    g.lanes["b"] = b;
    const auto corridor = corridor_along(g, Route{{"a", "b"}, 112.0}, fp);
    const Polyline left_cat = g.lanes["b"].left_bound;
    for (std::size_t i = 0; i < corridor.stations.size(); ++i) {
      const Vec2 p = corridor.reference.vertices()[i] +
                     corridor.left_limit[i] * corridor.reference.normal_at(corridor.stations[i]);
      // The offset point must stay at least half the width from the left
      // bound (within 5 cm), i.e. the footprint edge does not cross it.
      const auto & lane = corridor.stations[i] < 80.0 ? g.lanes["a"] : g.lanes["b"];
      const double dist = std::abs(geometry::project_to_path(lane.left_bound, p, 0.0).d);
      REQUIRE(dist >= fp.width / 2.0 - 0.05);
    }
  }
  SECTION("impassable corridor rejected")
  {
    LaneGraph g;
    g.lanes["a"] = straight_lane("a", {0, 0}, {50, 0}, 1.9);
    CHECK_THROWS_WITH(corridor_along(g, Route{{"a"}, 50.0}, fp), "impassable corridor");
  }
  SECTION("inflation monotone in footprint width")
  {
    LaneGraph g;
    g.lanes["a"] = bound_step_lane("a");
    const Footprint narrow{4.5, 1.6, 1.0, 2.7};
    const auto c_narrow = corridor_along(g, Route{{"a"}, 150.0}, narrow);
    const auto c_wide = corridor_along(g, Route{{"a"}, 150.0}, fp);
    for (std::size_t i = 0; i < c_narrow.stations.size(); ++i) {
      REQUIRE(c_wide.left_limit[i] <= c_narrow.left_limit[i] + 1e-12);
      REQUIRE(c_wide.right_limit[i] >= c_narrow.right_limit[i] - 1e-12);
    }
  }
}

TEST_CASE("graph validation catches bad references")
{
  LaneGraph g;
  g.lanes["a"] = straight_lane("a", {0, 0}, {50, 0}, 4.0, {"missing"});
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);

  LaneGraph h;
  h.lanes["a"] = straight_lane("a", {0, 0}, {50, 0}, 4.0, {"a"});
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}
