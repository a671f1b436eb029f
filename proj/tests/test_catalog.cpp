#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "spiraldim/catalog.hpp"
#include "spiraldim/errors.hpp"

using namespace spiraldim;

TEST_CASE("rational arithmetic") {
  CHECK(Rational(-4, -6) == Rational(2, 3));
  CHECK(Rational(4, -6) == Rational(-2, 3));
  CHECK(Rational(0, 7) == Rational::integer(0));
  CHECK(Rational(3, 4) + Rational(1, 6) == Rational(11, 12));
  CHECK(Rational(3, 4) - Rational(1, 6) == Rational(7, 12));
  CHECK(Rational(3, 4) * Rational(2, 9) == Rational(1, 6));
  CHECK(Rational(3, 4) / Rational(9, 2) == Rational(1, 6));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(24, 13).str() == "24/13");
  CHECK(Rational(-7, 1).str() == "-7");
  CHECK(Rational(1, 3).value() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(Rational(1, 2) / Rational(0, 5), DomainError);
  const Rational huge((1LL << 62) - 1, 1);
  CHECK_THROWS_AS(huge * huge, DomainError);
}

TEST_CASE("planar focus dimensions") {
  CHECK(dim_degenerate_nn(3, 2).exact.value() == Rational(24, 13));
  CHECK(dim_degenerate_nn(3, 11).exact.value() == Rational(132, 67));
  CHECK(dim_degenerate_nn(11, 2).exact.value() == Rational(88, 45));
  CHECK(dim_degenerate_nn(11, 11).exact.value() == Rational(484, 243));
  CHECK(dim_degenerate_nn(1, 1).exact.value() == Rational(4, 3));
  CHECK(dim_degenerate_nn(3, 0).exact.value() == Rational::integer(1));
  CHECK(dim_degenerate_nn(3, 2).method == "analytic");

  CHECK(dim_conjecture_mn(3, 1, 1).exact.value() == Rational(14, 9));
  CHECK(dim_conjecture_mn(3, 1, 1).method == "conjecture");
  CHECK(dim_conjecture_mn(5, 5, 2).method == "analytic");

  CHECK_THROWS_AS(dim_degenerate_nn(2, 1), DomainError);
  CHECK_THROWS_AS(dim_degenerate_nn(3, -1), DomainError);
  CHECK_THROWS_AS(dim_conjecture_mn(4, 3, 1), DomainError);
}

TEST_CASE("catalog cross-family identities") {
  const std::vector<int> ns = {1, 3, 5, 11};
  const std::vector<int> ks = {1, 2, 3, 11};

  // The conjectured formula must agree with the proved one on its diagonal.
  for (int n : ns)
    for (int k : ks)
      CHECK(dim_conjecture_mn(n, n, k).exact.value() ==
            dim_degenerate_nn(n, k).exact.value());

  // A degenerate focus winds like the power spiral with alpha = 1/(2nk).
  for (int n : ns)
    for (int k : ks)
      CHECK(dim_power_spiral(Rational(1, 2LL * n * k)).exact.value() ==
            dim_degenerate_nn(n, k).exact.value());

  // Equal-exponent spatial spirals collapse to planar power spirals.
  for (auto p : {Rational(1, 2), Rational(1, 6), Rational(3, 7)})
    CHECK(dim_elliptical(p, p).exact.value() ==
          dim_power_spiral(p).exact.value());

  // Spatial exponents (1/(2mk), 1/(2nk)) reproduce the m != n conjecture.
  for (int k : {1, 2, 3})
    for (auto mn : std::vector<std::array<int, 2>>{{3, 1}, {5, 3}, {11, 3}})
      CHECK(dim_elliptical(Rational(1, 2LL * mn[0] * k),
                           Rational(1, 2LL * mn[1] * k))
                .exact.value() ==
            dim_conjecture_mn(mn[0], mn[1], k).exact.value());
}

TEST_CASE("power spiral and chirp") {
  CHECK(dim_power_spiral(Rational(1, 2)).exact.value() == Rational(4, 3));
  CHECK(dim_power_spiral(0.5).value == doctest::Approx(4.0 / 3.0));
  CHECK(dim_power_spiral(Rational(2, 1)).exact.value() ==
        Rational::integer(1));
  CHECK(dim_power_spiral(7.0).value == 1.0);

  CHECK(dim_chirp(Rational(1, 2), Rational(1, 1)).exact.value() ==
        Rational(5, 4));
  CHECK(dim_chirp(0.5, 1.0).value == doctest::Approx(1.25));
  // d1 >= d2 is rectifiable.
  CHECK(dim_chirp(Rational(3, 2), Rational(1, 1)).exact.value() ==
        Rational::integer(1));

  CHECK_THROWS_AS(dim_power_spiral(0.0), DomainError);
  CHECK_THROWS_AS(dim_chirp(-0.5, 1.0), DomainError);
}

TEST_CASE("spatial spiral dimensions") {
  CHECK(dim_elliptical(Rational(1, 2), Rational(1, 2)).exact.value() ==
        Rational(4, 3));
  CHECK(dim_elliptical(Rational(1, 2), Rational(3, 4)).exact.value() ==
        Rational(2, 1) - Rational(5, 4) / Rational(7, 4));
  CHECK(dim_elliptical(Rational(1, 1), Rational(2, 1)).exact.value() ==
        Rational::integer(1));
  CHECK_THROWS_AS(dim_elliptical(0.5, 0.25), DomainError);
  CHECK_THROWS_AS(dim_elliptical(Rational(0, 1), Rational(1, 2)),
                  DomainError);
}

TEST_CASE("slow-fast exponents") {
  const auto a = dims_slowfast(1, 1);
  CHECK(a.orbit_dim == Rational(1, 3));
  CHECK(a.chirp_dim == Rational(3, 3) + Rational(0, 1));
  CHECK(a.chirp_dim == Rational::integer(1));
  CHECK(a.level_decay == Rational::integer(2));
  CHECK(a.gap_decay == Rational::integer(3));
  CHECK(a.delta1 == Rational(1, 2));
  CHECK(a.delta2 == Rational(1, 2));

  const auto b = dims_slowfast(1, 2);
  CHECK(b.orbit_dim == Rational(3, 5));
  CHECK(b.chirp_dim == Rational(7, 5));
  CHECK(b.level_decay == Rational(2, 3));
  CHECK(b.gap_decay == Rational(5, 3));
  CHECK(b.delta2 == Rational(3, 2));

  // The chirp attached to the cycle family has the catalog chirp dimension,
  // and the orbit dimension is the reciprocal gap decay.
  for (int n : {1, 3})
    for (int k : {3, 5, 8}) {
      const auto d = dims_slowfast(n, k);
      CHECK(d.chirp_dim == dim_chirp(d.delta1, d.delta2).exact.value());
      CHECK(d.orbit_dim == Rational::integer(1) / d.gap_decay);
      CHECK(d.level_decay ==
            Rational(2LL * n, 1) / (Rational(2LL * k + 1, 1) * d.orbit_dim));
    }

  CHECK_THROWS_AS(dims_slowfast(2, 1), DomainError);
  CHECK_THROWS_AS(dims_slowfast(0, 1), DomainError);
}

TEST_CASE("json rendering") {
  const auto j = nlohmann::json::parse(to_json(dim_degenerate_nn(3, 2)));
  CHECK(j["value"].get<double>() == doctest::Approx(24.0 / 13.0));
  CHECK(j["value_exact"].get<std::string>() == "24/13");
  CHECK(j["method"].get<std::string>() == "analytic");
  CHECK(j["family"].get<std::string>() == "degenerate-focus");
  const auto jc = nlohmann::json::parse(to_json(dim_chirp(0.5, 1.0)));
  CHECK(!jc.contains("value_exact"));
  CHECK(jc["value"].get<double>() == doctest::Approx(1.25));
}
