#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "colprob/interval_engine.hpp"
#include "oracles.hpp"

using namespace colprob;

TEST_CASE("grid spans both axes inclusively") {
  const auto g = build_grid(5.5, 2);
  REQUIRE(g.n_points() == 4);
  // Azimuth-major flattening.
  const double exp_phi[4] = {0.0, 0.0, kTwoPi, kTwoPi};
  const double exp_rho[4] = {0.0, 5.5, 0.0, 5.5};
  for (std::size_t p = 0; p < 4; ++p) {
    CHECK(g.point_phi(p) == doctest::Approx(exp_phi[p]).scale(1e-15));
    CHECK(g.point_rho(p) == exp_rho[p]);
  }

  const auto g20 = build_grid(5.5, 20);
  CHECK(g20.delta_phi == doctest::Approx(kTwoPi / 19.0));
  CHECK(g20.delta_rho == doctest::Approx(5.5 / 19.0));
  CHECK(g20.phi.front() == 0.0);
  CHECK(g20.phi.back() == kTwoPi);
  CHECK(g20.rho.back() == 5.5);
  CHECK(g20.n_points() == 400);

  const auto degenerate = build_grid(0.0, 3);
  for (double r : degenerate.rho) CHECK(r == 0.0);

  CHECK_THROWS_AS(build_grid(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(-1.0, 5), std::invalid_argument);
}

TEST_CASE("single-circle covers give a pure radius test") {
  const auto ego = cover_rectangle(RectangleFootprint(4.5, 2.0), 1);
  const auto obj = cover_rectangle(RectangleFootprint(4.5, 2.0), 1);
  const double joint = ego.radius + obj.radius;
  const auto grid = build_grid(max_collision_distance(ego, obj), 20);
  const auto m = intersection_intervals(ego, obj, grid);
  REQUIRE(m.n_pairs() == 1);
  for (std::size_t p = 0; p < m.n_points(); ++p) {
    const auto& iv = m.at(p, 0);
    if (grid.point_rho(p) <= joint) {
      CHECK(iv.is_full());
    } else {
      CHECK(iv.is_empty());
    }
  }
}

TEST_CASE("contact-only boundary point has no measure") {
  const auto cover = cover_rectangle(RectangleFootprint(4.5, 2.0), 3);
  const auto grid = build_grid(max_collision_distance(cover, cover), 20);
  const auto m = intersection_intervals(cover, cover, grid);
  // (phi = 0, rho = rho_bar): the farthest ego and object circles just touch.
  const std::size_t point = 0 * 20 + 19;
  REQUIRE(grid.point_rho(point) == 5.5);
  for (int pair = 0; pair < m.n_pairs(); ++pair) {
    CHECK(m.at(point, pair).is_empty());
  }
  const auto sets = sort_disjoint(m);
  CHECK(sets.at(point).empty());
}

TEST_CASE("mirrored circle pairs are half-turn rotations") {
  const auto ego = cover_rectangle(RectangleFootprint(4.5, 2.0), 3);
  const auto obj = cover_rectangle(RectangleFootprint(4.5, 2.0), 3);
  const auto grid = build_grid(max_collision_distance(ego, obj), 20);
  const auto m = intersection_intervals(ego, obj, grid);
  for (std::size_t p = 0; p < m.n_points(); p += 7) {
    for (int l = 0; l < 3; ++l) {
      const auto& plus = m.at(p, l * 3 + 2);  // offset +1.5
      const auto& minus = m.at(p, l * 3 + 0); // offset -1.5
      CHECK(plus.is_full() == minus.is_full());
      CHECK(plus.is_empty() == minus.is_empty());
      if (!plus.is_full()) {
        CHECK(minus.width() == plus.width());
        if (!plus.is_empty()) {
          CHECK(minus.lower() ==
                doctest::Approx(wrap_angle(plus.lower() + kPi)).epsilon(1e-12));
        }
      }
    }
  }
}

// The mirror shortcut must agree with ground truth for negative offsets: a
// heading lies in the stored interval exactly when the signed-offset circle
// reaches the ego circle.
TEST_CASE("matrix entries match the contact oracle, signed offsets included") {
  const auto ego = cover_rectangle(RectangleFootprint(4.5, 2.0), 2);
  const auto obj = cover_rectangle(RectangleFootprint(4.5, 2.0), 3);
  const double joint = ego.radius + obj.radius;
  const auto grid = build_grid(max_collision_distance(ego, obj), 13);
  const auto m = intersection_intervals(ego, obj, grid);
  oracles::TestRng rng(0x10c5u);
  int disagreements = 0;
  for (int trial = 0; trial < 20'000; ++trial) {
    const std::size_t p = rng.next() % m.n_points();
    const int l = static_cast<int>(rng.next() % 2);
    const int q = static_cast<int>(rng.next() % 3);
    const double theta = rng.uniform(0.0, kTwoPi);
    const double x = grid.point_rho(p) * std::cos(grid.point_phi(p));
    const double y = grid.point_rho(p) * std::sin(grid.point_phi(p));
    const auto sp = shift_polar(x, y, ego.offsets[l]);
    const bool truth = oracles::circles_touch_at_heading(sp.phi, sp.rho,
                                                         obj.offsets[q], joint,
                                                         theta);
    const auto& iv = m.at(p, l * 3 + q);
    if (iv.contains(theta) != truth) {
      ++disagreements;
      if (!iv.is_empty() && !iv.is_full()) {
        const double d_lo = std::abs(wrap_signed(theta - iv.lower()));
        const double d_hi = std::abs(wrap_signed(theta - iv.upper()));
        CHECK(std::min(d_lo, d_hi) <= 1e-9);
      }
    }
  }
  CHECK(disagreements <= 2);
}

TEST_CASE("merge semantics") {
  std::vector<AngleInterval> out;

  SUBCASE("overlapping chains collapse") {
    const AngleInterval raw[] = {
        AngleInterval::from_bounds(1.0, 2.0),
        AngleInterval::from_bounds(1.5, 3.0),
        AngleInterval::from_bounds(5.0, 5.5),
    };
    merge_point_intervals(raw, out);
    REQUIRE(out.size() == 2);
    CHECK(out[0].lower() == doctest::Approx(1.0));
    CHECK(out[0].upper() == doctest::Approx(3.0));
    CHECK(out[1].lower() == doctest::Approx(5.0));
    CHECK(out[1].upper() == doctest::Approx(5.5));
  }

  SUBCASE("full dominates") {
    const AngleInterval raw[] = {
        AngleInterval::from_bounds(1.0, 2.0),
        AngleInterval::full(),
        AngleInterval::from_bounds(4.0, 4.2),
    };
    merge_point_intervals(raw, out);
    REQUIRE(out.size() == 1);
    CHECK(out[0].is_full());
  }

  SUBCASE("union through the wrap point stays one interval") {
    const AngleInterval raw[] = {
        AngleInterval::from_bounds(1.5 * kPi, kTwoPi + 0.5),
        AngleInterval::from_bounds(0.3, 1.0),
    };
    merge_point_intervals(raw, out);
    REQUIRE(out.size() == 1);
    CHECK(out[0].wraps());
    CHECK(out[0].lower() == doctest::Approx(1.5 * kPi));
    CHECK(out[0].width() == doctest::Approx(0.5 * kPi + 1.0));
  }

  SUBCASE("touching endpoints fuse") {
    const AngleInterval raw[] = {
        AngleInterval::from_bounds(1.0, 2.0),
        AngleInterval::from_bounds(2.0, 2.5),
    };
    merge_point_intervals(raw, out);
    REQUIRE(out.size() == 1);
    CHECK(out[0].lower() == doctest::Approx(1.0));
    CHECK(out[0].upper() == doctest::Approx(2.5));
  }

  SUBCASE("circle filled by parts collapses to full") {
    const AngleInterval raw[] = {
        AngleInterval::from_bounds(0.0, 2.5),
        AngleInterval::from_bounds(2.0, 4.5),
        AngleInterval::from_bounds(4.0, kTwoPi + 0.1),
    };
    merge_point_intervals(raw, out);
    REQUIRE(out.size() == 1);
    CHECK(out[0].is_full());
  }
}

TEST_CASE("merge preserves measure and membership on random input") {
  oracles::TestRng rng(0xfeed5u);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<AngleInterval> raw;
    const int k = 1 + static_cast<int>(rng.next() % 9);
    for (int i = 0; i < k; ++i) {
      const double lo = rng.uniform(0.0, kTwoPi);
      const double w = rng.uniform(0.0, kTwoPi);
      raw.push_back(AngleInterval::from_lower_width(lo, w));
    }
    std::vector<AngleInterval> merged;
    merge_point_intervals(raw, merged);

    CHECK(oracles::union_measure(merged) ==
          doctest::Approx(oracles::union_measure(raw)).epsilon(0.0).scale(1e-12));

    // Pairwise disjoint and sorted.
    double measure = 0.0;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      measure += merged[i].width();
      if (i > 0 && !merged[i].is_full()) {
        CHECK(merged[i - 1].lower() < merged[i].lower());
        CHECK(!merged[i - 1].contains(merged[i].lower()));
        CHECK(!merged[i].contains(merged[i - 1].lower()));
      }
    }
    CHECK(measure <= kTwoPi + 1e-12);

    for (int s = 0; s < 64; ++s) {
      const double theta = rng.uniform(0.0, kTwoPi);
      bool in_raw = false, in_merged = false;
      for (const auto& iv : raw) in_raw = in_raw || iv.contains(theta);
      for (const auto& iv : merged) in_merged = in_merged || iv.contains(theta);
      CHECK(in_raw == in_merged);
    }
  }
}

TEST_CASE("interval tables are reproducible and serializable") {
  const auto ego = cover_rectangle(RectangleFootprint(4.5, 2.0), 3);
  const auto obj = cover_rectangle(RectangleFootprint(4.5, 2.0), 2);
  const auto grid = build_grid(max_collision_distance(ego, obj), 20);
  const auto a = sort_disjoint(intersection_intervals(ego, obj, grid));
  const auto b = sort_disjoint(intersection_intervals(ego, obj, grid));
  CHECK(a == b); // same inputs, structurally identical output

  const IntervalCacheKey key{4.5, 2.0, 4.5, 2.0, 3, 2, 20};
  const auto text = serialize_interval_cache(key, grid, a);
  const auto cache = deserialize_interval_cache(text);
  CHECK(cache.key == key);
  CHECK(cache.grid.rho_bar == grid.rho_bar);
  CHECK(cache.grid.n_samples == grid.n_samples);
  CHECK(cache.intervals == a); // bit-exact round trip

  CHECK_THROWS(deserialize_interval_cache("{\"schema_version\": 99}"));
}
