#include <doctest.h>

#include <sstream>

#include "qshutter/errors.hpp"
#include "qshutter/profile_io.hpp"
#include "qshutter/units.hpp"

using namespace qshutter;

TEST_CASE("derived constant follows the mass factor") {
  const auto c = PhysicalConstants::for_mass(0.067);
  CHECK(c.hbar2_over_2m == doctest::Approx(3.80998 / 0.067).epsilon(1e-15));
  CHECK(c.hbar == kHbar);
  CHECK_THROWS_AS(PhysicalConstants::for_mass(0.0), DomainError);
  CHECK_THROWS_AS(PhysicalConstants::for_mass(-1.0), DomainError);
  const double k = c.momentum(0.1);
  CHECK(c.energy(k).real() == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("profile lengths") {
  CHECK(build_profile({{30, 0.5}, {100, 0}, {30, 0.5}}).length() == 160.0);
  CHECK(build_profile({{30, 0.3}, {50, 0}, {100, 0.3}}).length() == 180.0);
  const auto well = build_profile({{10, -0.1}});
  CHECK(well.length() == 10.0);
  CHECK(well.potential_at(5.0) == -0.1);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(build_profile({}), DomainError);
  CHECK_THROWS_AS(build_profile({{30, 0.5}, {0, 0}}), DomainError);
  CHECK_THROWS_AS(build_profile({{-1, 0.5}}), DomainError);
  CHECK_THROWS_AS(build_profile({{30, 0.5}}, 0.0), DomainError);
}

TEST_CASE("potential lookup") {
  const auto p = build_profile({{30, 0.5}, {100, 0}, {30, 0.5}});
  CHECK(p.potential_at(80) == 0.0);
  CHECK(p.potential_at(-5) == 0.0);
  CHECK(p.potential_at(15) == 0.5);
  CHECK(p.potential_at(170) == 0.0);
  // interior boundaries take the right-hand segment
  CHECK(p.potential_at(30) == 0.0);
  CHECK(p.potential_at(130) == 0.5);
  CHECK(p.potential_at(0) == 0.5);
  CHECK(p.potential_at(160) == 0.0);
  CHECK(potential_at(p, 15) == 0.5);
}

TEST_CASE("midpoints reproduce every height") {
  const auto p = build_profile({{30, 0.3}, {50, 0}, {100, 0.3}, {7.5, -0.2}, {1e-3, 4.0}});
  for (std::size_t i = 0; i < p.segments().size(); ++i) {
    const double mid = 0.5 * (p.offsets()[i] + p.offsets()[i + 1]);
    CHECK(p.potential_at(mid) == p.segments()[i].height);
    CHECK(p.segment_index(mid) == i);
  }
}

TEST_CASE("splitting a segment changes nothing") {
  const auto p = build_profile({{30, 0.5}, {100, 0}, {30, 0.5}});
  const auto q = build_profile({{30, 0.5}, {37.5, 0}, {62.5, 0}, {12, 0.5}, {18, 0.5}});
  CHECK(p.length() == q.length());
  for (double x = -10.0; x <= 170.0; x += 0.25) {
    CHECK(p.potential_at(x) == q.potential_at(x));
  }
}

TEST_CASE("profile config parsing") {
  std::istringstream in(
      "# test\n"
      "name = double barrier\n"
      "mass_factor = 0.07   # override\n"
      "segment = 30 0.5\n"
      "\n"
      "segment = 100 0\n"
      "segment=30 0.5\n");
  const auto cfg = parse_profile(in);
  CHECK(cfg.name == "double barrier");
  CHECK(cfg.profile.length() == 160.0);
  CHECK(cfg.profile.constants().mass_factor == 0.07);
  CHECK(cfg.profile.segments().size() == 3);

  std::istringstream defaults("segment = 10 -0.1\n");
  CHECK(parse_profile(defaults).profile.constants().mass_factor == kDefaultMassFactor);
}

namespace {
int error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_profile(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}
}  // namespace

TEST_CASE("profile config errors carry line numbers") {
  CHECK(error_line("") == 0);
  CHECK(error_line("# only comments\n\n") >= 0);
  CHECK(error_line("segment = 30 0.5\nfoo = 1\n") == 2);
  CHECK(error_line("segment = 30\n") == 1);
  CHECK(error_line("segment = 30 0.5 7\n") == 1);
  CHECK(error_line("segment = 30 abc\n") == 1);
  CHECK(error_line("segment = 30 0.5\nsegment = -2 0\n") == 2);
  CHECK(error_line("mass_factor = 0.067\nmass_factor = 0.07\nsegment = 1 1\n") == 2);
  CHECK(error_line("mass_factor = zero\n") == 1);
  CHECK(error_line("segment 30 0.5\n") == 1);
  CHECK_THROWS(load_profile("/nonexistent/profile.cfg"));
}

TEST_CASE("shipped profiles load") {
  const auto sym = load_profile(QSHUTTER_DATA_DIR "/profiles/symmetric.cfg");
  CHECK(sym.profile.length() == 160.0);
  const auto asy = load_profile(QSHUTTER_DATA_DIR "/profiles/asymmetric.cfg");
  CHECK(asy.profile.length() == 180.0);
  CHECK(asy.profile.potential_at(100) == 0.3);
}
