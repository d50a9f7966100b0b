#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <random>

#include "plasmaflow/kinetics.hpp"
#include "test_support.hpp"

using namespace plasmaflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const ModelConfiguration va_typ{EcmoMode::VA, PortMode::Typical, ModelKind::DDE};
const ModelConfiguration va_sw{EcmoMode::VA, PortMode::Switched, ModelKind::DDE};
const ModelConfiguration vv_typ{EcmoMode::VV, PortMode::Typical, ModelKind::DDE};
}  // namespace

TEST_CASE("nominal parameters validate") {
  const ModelParameters p = nominal_parameters();
  const ModelParameters& r = validate_parameters(p);
  CHECK(&r == &p);
}

TEST_CASE("flow constraint rejects an oversized device draw") {
  ModelParameters p = nominal_parameters();
  p.Q1 = 100.0;  // > alpha*Q = 81.69
  REQUIRE_THROWS_AS(validate_parameters(p), FlowConstraintViolated);
  try {
    validate_parameters(p);
  } catch (const FlowConstraintViolated& e) {
    CHECK(e.q1() == 100.0);
    CHECK_THAT(e.alpha_q(), WithinRel(81.69, 1e-12));
    CHECK(e.q() == 116.7);
  }
}

TEST_CASE("nonpositive parameters are rejected by name") {
  auto expect_field = [](ModelParameters p, double ModelParameters::* member, const char* name) {
    p.*member = name[0] == 'V' ? -1.0 : 0.0;
    try {
      validate_parameters(p);
      FAIL("expected NonPositiveParameter for " << name);
    } catch (const NonPositiveParameter& e) {
      CHECK(e.field() == name);
    }
  };
  expect_field(nominal_parameters(), &ModelParameters::Q, "Q");
  expect_field(nominal_parameters(), &ModelParameters::Q1, "Q1");
  expect_field(nominal_parameters(), &ModelParameters::alpha, "alpha");
  expect_field(nominal_parameters(), &ModelParameters::s1, "s1");
  expect_field(nominal_parameters(), &ModelParameters::s2, "s2");
  expect_field(nominal_parameters(), &ModelParameters::V3, "V3");

  ModelParameters p = nominal_parameters();
  p.Q = -1.0;
  REQUIRE_THROWS_AS(validate_parameters(p), NonPositiveParameter);
}

TEST_CASE("alpha bounds") {
  ModelParameters p = nominal_parameters();
  p.alpha = 1.0;  // degenerate heart/lung compartment in VA mode
  REQUIRE_THROWS_AS(validate_parameters(p), FlowConstraintViolated);
  p.alpha = 0.0;
  REQUIRE_THROWS_AS(validate_parameters(p), NonPositiveParameter);
}

TEST_CASE("V3 = 0 is the accepted degenerate limit") {
  ModelParameters p = nominal_parameters();
  p.V3 = 0.0;
  REQUIRE_NOTHROW(validate_parameters(p));
  const DerivedQuantities q = derive_quantities(p, vv_typ, 0.01);
  CHECK(q.s3_steps == 0);
  CHECK(q.da_steps == q.db_steps);
}

TEST_CASE("derived quantities at nominal VA") {
  const DerivedQuantities q = derive_quantities(nominal_parameters(), va_typ, 0.01);
  CHECK_THAT(q.s3, WithinRel(6.12, 1e-12));  // 500/81.69 = 6.1207 snapped down
  CHECK(q.s3_steps == 612);
  CHECK_THAT(q.v1, WithinRel(455.13, 1e-12));
  CHECK_THAT(q.v2, WithinRel(4551.3, 1e-12));
  CHECK(q.da_steps == 4512);  // s2 + s3
  CHECK(q.db_steps == 5200);  // s1 + s2
  CHECK(q.window_steps == 5812);
  CHECK_FALSE(q.s1_snapped);
  CHECK_FALSE(q.s2_snapped);
}

TEST_CASE("derived quantities at nominal VV") {
  const DerivedQuantities q = derive_quantities(nominal_parameters(), vv_typ, 0.01);
  CHECK_THAT(q.v1, WithinRel(1517.1, 1e-12));
  CHECK_THAT(q.v2, WithinRel(4551.3, 1e-12));
  CHECK(q.da_steps == 5812);  // s1 + s2 + s3
  CHECK(q.db_steps == 5200);
}

TEST_CASE("device coefficients, typical and switched") {
  const DerivedQuantities typ = derive_quantities(nominal_parameters(), va_typ, 0.01);
  CHECK(typ.b == 1.5);
  CHECK_THAT(typ.c, WithinRel(80.19, 1e-12));
  CHECK_THAT(typ.k, WithinRel(0.012853470437017995, 1e-12));

  const DerivedQuantities sw = derive_quantities(nominal_parameters(), va_sw, 0.01);
  CHECK_THAT(sw.b, WithinRel(1.4729534799855752, 1e-12));
  CHECK_THAT(sw.c, WithinRel(80.21704652001442, 1e-12));
  CHECK_THAT(sw.k, WithinRel(0.012621709340064912, 1e-12));

  CHECK_THAT(typ.b + typ.c, WithinRel(81.69, 1e-12));
  CHECK_THAT(sw.b + sw.c, WithinRel(81.69, 1e-12));
}

TEST_CASE("coefficient identities over randomized parameters") {
  std::mt19937 rng(7001);
  for (int i = 0; i < 2000; ++i) {
    const ModelParameters p = pf_test::random_valid_parameters(rng);
    for (PortMode port : {PortMode::Typical, PortMode::Switched}) {
      const DerivedQuantities q =
          derive_quantities(p, {EcmoMode::VA, port, ModelKind::DDE}, 0.01);
      const double aq = p.alpha * p.Q;
      CHECK_THAT(q.b + q.c, WithinRel(aq, 1e-12));
      CHECK_THAT(q.k, WithinRel(q.b / p.Q, 1e-12));
      CHECK(q.k > 0.0);
      CHECK(q.k < p.alpha);
    }
    // switched never exchanges faster than typical
    const double k_typ =
        derive_quantities(p, {EcmoMode::VA, PortMode::Typical, ModelKind::DDE}, 0.01).k;
    const double k_sw =
        derive_quantities(p, {EcmoMode::VA, PortMode::Switched, ModelKind::DDE}, 0.01).k;
    CHECK(k_sw < k_typ);
  }
}

TEST_CASE("lag snapping moves each lag by at most dt/2") {
  std::mt19937 rng(7002);
  std::uniform_real_distribution<double> dts(0.004, 0.05);
  for (int i = 0; i < 2000; ++i) {
    ModelParameters p = pf_test::random_valid_parameters(rng);
    // un-snap the transit times
    p.s1 += std::uniform_real_distribution<double>(0.0, 0.01)(rng);
    p.s2 += std::uniform_real_distribution<double>(0.0, 0.01)(rng);
    const double dt = dts(rng);
    const DerivedQuantities q = derive_quantities(p, va_typ, dt);
    CHECK(std::abs(q.s1 - p.s1) <= dt / 2 * (1 + 1e-9));
    CHECK(std::abs(q.s2 - p.s2) <= dt / 2 * (1 + 1e-9));
    CHECK(std::abs(q.s3 - p.V3 / (p.alpha * p.Q)) <= dt / 2 * (1 + 1e-9));
  }
}

TEST_CASE("snapping is round-half-up and flagged") {
  ModelParameters p = nominal_parameters();
  p.s1 = 0.015;
  p.s2 = 39.004;
  const DerivedQuantities q = derive_quantities(p, va_typ, 0.01);
  CHECK(q.s1_steps == 2);  // 1.5 steps rounds up
  CHECK(q.s2_steps == 3900);
  CHECK(q.s1_snapped);
  CHECK(q.s2_snapped);
}

TEST_CASE("a positive lag must survive rounding") {
  ModelParameters p = nominal_parameters();
  p.V3 = 0.1;  // s3 = 0.0012 s, rounds to zero steps of 0.01
  REQUIRE_THROWS_AS(derive_quantities(p, va_typ, 0.01), ZeroLagAfterRounding);
  p = nominal_parameters();
  REQUIRE_THROWS_AS(derive_quantities(p, va_typ, 100.0), ZeroLagAfterRounding);
}

TEST_CASE("derive_quantities is deterministic") {
  std::mt19937 rng(7003);
  for (int i = 0; i < 50; ++i) {
    const ModelParameters p = pf_test::random_valid_parameters(rng);
    const DerivedQuantities a = derive_quantities(p, va_sw, 0.01);
    const DerivedQuantities b = derive_quantities(p, va_sw, 0.01);
    // bitwise-identical outputs, field by field
    CHECK(std::memcmp(&a.v1, &b.v1, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.v2, &b.v2, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.b, &b.b, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.c, &b.c, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.k, &b.k, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.d_a, &b.d_a, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.d_b, &b.d_b, sizeof(double)) == 0);
    CHECK(a.s3_steps == b.s3_steps);
    CHECK(a.window_steps == b.window_steps);
  }
}
