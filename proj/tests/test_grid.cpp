#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pplab/grid.hpp"

using namespace pplab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("make_ball_grid: node counts and origin") {
  GridDomain g1 = make_ball_grid(1, 17);
  CHECK(g1.num_nodes() == 289);
  auto m = g1.multi_index(g1.origin());
  CHECK(m[0] == 8);
  CHECK(m[1] == 8);
  CHECK(g1.point(g1.origin())[0] == doctest::Approx(0.0));

  GridDomain g2 = make_ball_grid(2, 33);
  CHECK(g2.num_nodes() == Index(33) * 33 * 33 * 33);
}

TEST_CASE("make_ball_grid: rejects bad arguments") {
  CHECK_THROWS_AS(make_ball_grid(3, 33), GridError);
  CHECK_THROWS_AS(make_ball_grid(1, 32), GridError);
  CHECK_THROWS_AS(make_ball_grid(1, 9), GridError);
}

TEST_CASE("interior nodes keep axis neighbors inside the closed ball") {
  GridDomain g = make_ball_grid(1, 33);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.is_interior(id)) continue;
    auto m = g.multi_index(id);
    for (int a = 0; a < g.dim(); ++a) {
      for (int s = -1; s <= 1; s += 2) {
        auto t = m;
        t[a] += s;
        REQUIRE(g.in_box(t));
        CHECK(g.in_ball(g.flat_index(t)));
      }
    }
  }
}

TEST_CASE("ball_mask basics") {
  GridDomain g = make_ball_grid(1, 33);
  Mask all = ball_mask(g, 2.0);
  CHECK(all.count() == full_ball(g).count());

  Mask origin_only = ball_mask(g, g.h() / 2);
  CHECK(origin_only.count() == 1);
  CHECK(origin_only.contains(g.origin()));

  Mask clipped = ball_mask(g, {0.9, 0, 0, 0}, 0.3);
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (clipped.contains(id)) CHECK(g.radius2(id) <= 1.0 + 1e-12);
  CHECK(clipped.count() > 0);
}

TEST_CASE("integrate: constants, empty mask, skipped nodes") {
  GridDomain g = make_ball_grid(1, 33);
  ScalarField zero(g, 0.0);
  CHECK(integrate(zero, full_ball(g)).value == 0.0);

  ScalarField one(g, 1.0);
  Mask empty(g);
  CHECK(integrate(one, empty).value == 0.0);

  ScalarField holes(g, 1.0);
  holes.set_undefined(g.origin());
  auto r = integrate(holes, full_ball(g));
  CHECK(r.skipped == 1);

  ScalarField bad(g, 1.0);
  Mask only_origin(g);
  only_origin.set(g.origin(), true);
  bad.set_undefined(g.origin());
  CHECK_THROWS_AS(integrate(bad, only_origin), GridError);
}

TEST_CASE("integrate: unit disc area converges to pi at O(h)") {
  double errs[2];
  int ns[2] = {129, 257};
  for (int i = 0; i < 2; ++i) {
    GridDomain g = make_ball_grid(1, ns[i]);
    ScalarField one(g, 1.0);
    errs[i] = std::abs(integrate(one, full_ball(g)).value - kPi);
  }
  CHECK(errs[1] < errs[0]);

  GridDomain g = make_ball_grid(1, 513);
  ScalarField one(g, 1.0);
  CHECK(integrate(one, full_ball(g)).value == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("integrate is linear and additive over disjoint masks") {
  GridDomain g = make_ball_grid(1, 65);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1, 1);
  ScalarField f(g, 0.0), h(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    f.set(id, uni(rng));
    h.set(id, uni(rng));
  }
  Mask left(g), right(g);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.in_ball(id)) continue;
    if (g.point(id)[0] < 0)
      left.set(id, true);
    else
      right.set(id, true);
  }
  Mask whole = full_ball(g);

  ScalarField combo(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) combo.set(id, 2.0 * f[id] - 3.0 * h[id]);
  double lin = integrate(combo, whole).value;
  CHECK(lin == doctest::Approx(2.0 * integrate(f, whole).value - 3.0 * integrate(h, whole).value)
                   .epsilon(1e-12));

  double split = integrate(f, left).value + integrate(f, right).value;
  CHECK(split == doctest::Approx(integrate(f, whole).value).epsilon(1e-12));
}

TEST_CASE("dilate grows a mask by a euclidean radius") {
  GridDomain g = make_ball_grid(1, 65);
  Mask m(g);
  m.set(g.origin(), true);
  Mask d = dilate(m, 3 * g.h());
  CHECK(d.count() > 1);
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (d.contains(id)) CHECK(g.radius2(id) <= 9.01 * g.h() * g.h());
}
