#include <doctest.h>

#include <array>
#include <cmath>

#include "mobenv/errors.hpp"
#include "mobenv/mobility.hpp"
#include "oracles.hpp"

using namespace mobenv;

namespace {

MobilityConfig limited_cfg() {
  MobilityConfig cfg;
  cfg.variant = MobilityVariant::Limited;
  cfg.anchors = {{20, 20}, {100, 100}, {180, 30}, {0, 200}, {150, 150}};
  return cfg;
}

double spread(const std::vector<Position>& pts) {
  double mx = 0, my = 0;
  for (const auto& p : pts) mx += p.x, my += p.y;
  mx /= pts.size();
  my /= pts.size();
  double v = 0;
  for (const auto& p : pts) v += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
  return v / pts.size();
}

}  // namespace

TEST_CASE("limited users stay near their anchors") {
  const MobilityConfig cfg = limited_cfg();
  RngStream rng(3);
  for (int episode = 0; episode < 200; ++episode) {
    auto ues = init_positions(cfg, 5, rng);
    for (std::size_t j = 0; j < 5; ++j) {
      REQUIRE(ues[j].anchor == cfg.anchors[j]);
      REQUIRE(distance(ues[j].position, ues[j].anchor) <= cfg.init_radius + 1e-12);
      REQUIRE(distance(ues[j].waypoint, ues[j].anchor) <= cfg.waypoint_radius + 1e-12);
    }
    for (int t = 0; t < 100; ++t) {
      for (auto& ue : ues) {
        ue = step_motion(ue, cfg);
        REQUIRE(distance(ue.waypoint, ue.anchor) <= cfg.waypoint_radius + 1e-12);
        REQUIRE(cfg.contains(ue.position));
      }
    }
  }
}

TEST_CASE("full-map waypoints are uniform") {
  MobilityConfig cfg;
  RngStream rng(11);
  const UeMotionState dummy{};
  const int n = 100'000;
  std::array<int, 100> cells{};
  double mx = 0, my = 0;
  for (int k = 0; k < n; ++k) {
    const Position p = sample_waypoint(cfg, dummy, rng);
    REQUIRE(cfg.contains(p));
    mx += p.x;
    my += p.y;
    const int cx = std::min(9, int(p.x / 20.0));
    const int cy = std::min(9, int(p.y / 20.0));
    ++cells[cy * 10 + cx];
  }
  CHECK(std::abs(mx / n - 100.0) < 2.0);
  CHECK(std::abs(my / n - 100.0) < 2.0);
  const double expected = n / 100.0;
  double chi2 = 0;
  for (int c : cells) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < oracle::kChi2_099_df99);
}

TEST_CASE("disc sampling") {
  MobilityConfig cfg;
  RngStream rng(4);
  SUBCASE("radius 0 returns the centre") {
    const Position c{37.5, 12.0};
    for (int k = 0; k < 10; ++k) CHECK(sample_in_disc(cfg, c, 0.0, rng) == c);
  }
  SUBCASE("points near the border stay on the map") {
    for (int k = 0; k < 10'000; ++k) {
      const Position p = sample_in_disc(cfg, {0.0, 0.0}, 10.0, rng);
      REQUIRE(cfg.contains(p));
      REQUIRE(std::hypot(p.x, p.y) <= 10.0 + 1e-12);
    }
  }
  SUBCASE("area-uniform: about a quarter of points fall within half the radius") {
    int inner = 0;
    const int n = 40'000;
    for (int k = 0; k < n; ++k) {
      if (distance(sample_in_disc(cfg, {100, 100}, 10.0, rng), {100, 100}) <= 5.0) ++inner;
    }
    CHECK(std::abs(inner / double(n) - 0.25) < 0.01);
  }
}

TEST_CASE("step_motion") {
  MobilityConfig cfg;
  SUBCASE("speed 0 freezes the user") {
    cfg.speed = 0.0;
    RngStream rng(1);
    auto ues = init_positions(cfg, 3, rng);
    for (int t = 0; t < 50; ++t) {
      for (auto& ue : ues) {
        const UeMotionState before = ue;
        ue = step_motion(ue, cfg);
        REQUIRE(ue == before);
      }
    }
  }
  SUBCASE("exact arrival lands on the waypoint and draws a new one") {
    UeMotionState ue{{10, 10}, {12.5, 10}, {10, 10}, RngStream(5)};
    const UeMotionState next = step_motion(ue, cfg);
    CHECK(next.position == Position{12.5, 10});
    CHECK_FALSE(next.waypoint == Position{12.5, 10});
  }
  SUBCASE("short hop: leftover movement is dropped") {
    UeMotionState ue{{10, 10}, {11, 10}, {10, 10}, RngStream(5)};
    const UeMotionState next = step_motion(ue, cfg);
    CHECK(next.position == Position{11, 10});
  }
  SUBCASE("regular step moves exactly speed toward the waypoint") {
    UeMotionState ue{{0, 0}, {30, 40}, {0, 0}, RngStream(5)};
    const UeMotionState next = step_motion(ue, cfg);
    CHECK(next.position.x == doctest::Approx(1.5));
    CHECK(next.position.y == doctest::Approx(2.0));
    CHECK(next.waypoint == ue.waypoint);
  }
  SUBCASE("displacement never exceeds speed") {
    RngStream rng(9);
    UeMotionState ue = init_positions(cfg, 1, rng)[0];
    for (int t = 0; t < 100'000; ++t) {
      const UeMotionState next = step_motion(ue, cfg);
      REQUIRE(distance(next.position, ue.position) <= cfg.speed + 1e-9);
      REQUIRE(cfg.contains(next.position));
      ue = next;
    }
  }
}

TEST_CASE("limited mobility has far smaller positional variance than full") {
  RngStream rng_full(21), rng_lim(21);
  MobilityConfig full;
  const MobilityConfig lim = limited_cfg();
  auto a = init_positions(full, 5, rng_full);
  auto b = init_positions(lim, 5, rng_lim);
  std::vector<std::vector<Position>> track_a(5), track_b(5);
  for (int t = 0; t < 10'000; ++t) {
    for (std::size_t j = 0; j < 5; ++j) {
      a[j] = step_motion(a[j], full);
      b[j] = step_motion(b[j], lim);
      track_a[j].push_back(a[j].position);
      track_b[j].push_back(b[j].position);
    }
  }
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(spread(track_b[j]) < 0.1 * spread(track_a[j]));
    CHECK(spread(track_b[j]) <= 100.0);
  }
}

TEST_CASE("determinism and validation") {
  MobilityConfig cfg;
  RngStream r1(77), r2(77);
  auto a = init_positions(cfg, 5, r1);
  auto b = init_positions(cfg, 5, r2);
  for (int t = 0; t < 500; ++t) {
    for (std::size_t j = 0; j < 5; ++j) {
      a[j] = step_motion(a[j], cfg);
      b[j] = step_motion(b[j], cfg);
    }
  }
  CHECK(a == b);

  MobilityConfig bad = limited_cfg();
  CHECK_THROWS_AS(bad.validate(4), ConfigError);
  bad.anchors[0] = {-1, 0};
  CHECK_THROWS_AS(bad.validate(5), ConfigError);
  bad = cfg;
  bad.speed = -1;
  CHECK_THROWS_AS(bad.validate(5), ConfigError);
  CHECK_THROWS_AS(init_positions(cfg, 0, r1), ConfigError);

  SUBCASE("per-episode anchors are drawn when none are configured") {
    MobilityConfig open = limited_cfg();
    open.anchors.clear();
    RngStream rng(2);
    const auto e1 = init_positions(open, 5, rng);
    const auto e2 = init_positions(open, 5, rng);
    CHECK_FALSE(e1[0].anchor == e2[0].anchor);
  }
}
