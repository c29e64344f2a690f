#include <cmath>

#include "doctest.h"
#include "polsim/error.hpp"
#include "polsim/medium.hpp"
#include "support.hpp"

using namespace polsim;

TEST_CASE("beam shape convention") {
  const MediumSpec m = test::fig2().medium;
  CHECK(shape_a1(0.0, m) == 1.0);
  CHECK(shape_a1(1.0, m) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(shape_a1(40.0, m) == 0.0);
  CHECK(shape_a1(-0.7, m) == doctest::Approx(shape_a1(0.7, m)).epsilon(1e-15));
}

TEST_CASE("combined shape follows the second beam direction") {
  MediumSpec co = test::fig2().medium;
  CHECK(shape_combined(5.0, co) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shape_combined(0.0, co) == doctest::Approx(1.0).epsilon(1e-12));

  MediumSpec counter = co;
  counter.control2->direction = Direction::minus_z;
  CHECK(shape_combined(5.0, counter) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(shape_combined(0.0, counter) > 0.0);

  MediumSpec single = co;
  single.control2.reset();
  for (double x : {-1.0, 0.3, 2.5, 5.0}) CHECK(shape_combined(x, single) == shape_a1(x, single));

  // a2 scales with the square of the second amplitude.
  MediumSpec half = co;
  half.control2->amplitude = 0.5;
  CHECK(shape_a2(5.0, half) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("shape integral closed form") {
  const MediumSpec m = test::fig2().medium;
  CHECK(shape_a1_total(m) == doctest::Approx(std::sqrt(std::acos(-1.0) / 8.0)).epsilon(1e-14));
  // From the center of beam 1 past all of beam 2: a half and a whole beam.
  CHECK(shape_integral(9.0, m) == doctest::Approx(3.0 * shape_a1_total(m)).epsilon(1e-12));
}

TEST_CASE("group velocity along the reference axis") {
  const MediumSpec m = test::fig2().medium;
  CHECK(group_velocity(0.0, 2.0, m) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(group_velocity(0.0, 0.0, m) == doctest::Approx(1.0 - 0.95 * std::exp(-4.0)).epsilon(1e-14));
  CHECK(std::abs(group_velocity(2.5, 1.0, m)) < 1e-5);
  // Separable: the ratio between two z values does not depend on x.
  const double r0 = group_velocity(0.0, 1.0, m) / group_velocity(0.0, 2.3, m);
  for (double x : {-0.8, 0.4, 5.2}) {
    CHECK(group_velocity(x, 1.0, m) / group_velocity(x, 2.3, m) ==
          doctest::Approx(r0).epsilon(1e-13));
  }
}

TEST_CASE("group index") {
  MediumSpec m = test::fig2().medium;
  m.control2.reset();
  CHECK(group_index(0.0, 2.0, m) == doctest::Approx(2000.0).epsilon(1e-12));
  for (double x : {-0.5, 0.0, 0.9})
    for (double z : {0.0, 1.3, 2.0}) {
      CHECK(m.constants.c / group_index(x, z, m) ==
            doctest::Approx(group_velocity(x, z, m)).epsilon(1e-12));
    }
  // Doubling every Rabi frequency at fixed density divides n_g by 4.
  const double n = density(1.0, m);
  MediumSpec strong = m;
  strong.control1.amplitude *= 2.0;
  strong.vg.base *= 4.0;
  strong.vg.dip_depth *= 4.0;
  CHECK(density(1.0, strong) == doctest::Approx(n).epsilon(1e-14));
  CHECK(group_index(0.3, 1.0, strong) == doctest::Approx(group_index(0.3, 1.0, m) / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)group_index(40.0, 1.0, m), Error);
}

TEST_CASE("medium validation") {
  MediumSpec m = test::fig2().medium;
  // Five units apart is below the 3 x (sum of widths) guard: a warning only.
  CHECK(m.validate(0.0, 4.0).size() == 1);
  MediumSpec far = m;
  far.control2->center = 6.0;
  CHECK(far.validate(0.0, 4.0).empty());

  MediumSpec bad = m;
  bad.vg.dip_depth = 1.0;
  CHECK_THROWS_AS((void)bad.validate(0.0, 4.0), Error);

  MediumSpec tab = m;
  tab.vg.samples_z = {0.0, 2.0, 4.0};
  tab.vg.samples_v = {1.0, 0.1, 1.0};
  CHECK(vg_tilde(1.0, tab) == doctest::Approx(0.55));
  CHECK(vg_tilde(-1.0, tab) == 1.0);
}
