#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "plasmaflow/ade.hpp"
#include "test_support.hpp"

using namespace plasmaflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kNominalTypicalK = 0.012853470437017995;  // Q1/Q

ModelConfiguration ade_cfg(EcmoMode e, PortMode m) { return {e, m, ModelKind::ADE}; }

bool nondecreasing(const std::vector<double>& v, double slack = 1e-15) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] - slack) return false;
  return true;
}

bool bounded01(const std::vector<double>& v, double slack = 1e-12) {
  for (double x : v)
    if (x < -slack || x > 1.0 + slack) return false;
  return true;
}

}  // namespace

TEST_CASE("first stepped value from zero history is k") {
  const ModelParameters p = nominal_parameters();
  const auto cfg = ade_cfg(EcmoMode::VA, PortMode::Typical);
  const DerivedQuantities q = derive_quantities(p, cfg, 0.01);

  AdeState state = make_ade_state(p, q, 0.01);
  CHECK_THAT(ade_step(state), WithinRel(kNominalTypicalK, 1e-12));
}

TEST_CASE("all-ones history is an exact fixed point") {
  const ModelParameters p = nominal_parameters();
  for (EcmoMode e : {EcmoMode::VA, EcmoMode::VV})
    for (PortMode m : {PortMode::Typical, PortMode::Switched}) {
      const DerivedQuantities q = derive_quantities(p, ade_cfg(e, m), 0.01);
      AdeState state = make_ade_state(p, q, 0.01, 1.0);
      for (int i = 0; i < 1000; ++i) REQUIRE(ade_step(state) == 1.0);
    }
}

TEST_CASE("shortest legal run has exactly one stepped value") {
  const ModelParameters p = nominal_parameters();
  const auto cfg = ade_cfg(EcmoMode::VA, PortMode::Typical);
  const DerivedQuantities q = derive_quantities(p, cfg, 0.01);
  const double window = q.window();  // 58.12 s

  const TimeSeries ts = simulate_ade(p, cfg, window + 0.01, 0.01);
  REQUIRE(ts.size() == 5814);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) CHECK(ts.gamma1[i] == 0.0);
  CHECK_THAT(ts.gamma1.back(), WithinRel(kNominalTypicalK, 1e-12));
  CHECK_FALSE(ts.has_gamma2());

  REQUIRE_THROWS_AS(simulate_ade(p, cfg, window, 0.01), std::invalid_argument);
}

TEST_CASE("model kind is enforced") {
  const ModelParameters p = nominal_parameters();
  REQUIRE_THROWS_AS(
      simulate_ade(p, {EcmoMode::VA, PortMode::Typical, ModelKind::DDE}, 600.0, 0.01),
      std::invalid_argument);
}

TEST_CASE("trajectories from zero history are monotone and bounded") {
  const ModelParameters nom = nominal_parameters();
  for (EcmoMode e : {EcmoMode::VA, EcmoMode::VV})
    for (PortMode m : {PortMode::Typical, PortMode::Switched}) {
      const TimeSeries ts = simulate_ade(nom, ade_cfg(e, m), 900.0, 0.01);
      CHECK(nondecreasing(ts.gamma1));
      CHECK(bounded01(ts.gamma1));
    }

  std::mt19937 rng(9101);
  for (int i = 0; i < 50; ++i) {
    const ModelParameters p = pf_test::random_valid_parameters(rng);
    const auto cfg = ade_cfg(i % 2 ? EcmoMode::VA : EcmoMode::VV,
                             i % 3 ? PortMode::Typical : PortMode::Switched);
    const DerivedQuantities q = derive_quantities(p, cfg, 0.01);
    const TimeSeries ts = simulate_ade(p, cfg, q.window() + 600.0, 0.01);
    CHECK(nondecreasing(ts.gamma1));
    CHECK(bounded01(ts.gamma1));
  }
}

TEST_CASE("gamma1 approaches 1 over hours") {
  const ModelParameters p = nominal_parameters();
  const auto cfg = ade_cfg(EcmoMode::VV, PortMode::Typical);
  const TimeSeries ts = simulate_ade(p, cfg, 4.0 * 3600.0, 0.01);

  auto at_hours = [&](double h) {
    return ts.gamma1[static_cast<std::size_t>(std::llround(h * 3600.0 / 0.01))];
  };
  CHECK(at_hours(4.0) > at_hours(2.0));
  CHECK(at_hours(2.0) > at_hours(1.0));
  CHECK(1.0 - at_hours(4.0) < 0.05);
}

TEST_CASE("larger device flow exchanges faster") {
  ModelParameters fast = nominal_parameters();
  fast.Q1 = 81.0;  // just under alpha*Q = 81.69
  REQUIRE_NOTHROW(validate_parameters(fast));

  const auto cfg = ade_cfg(EcmoMode::VA, PortMode::Typical);
  const TimeSeries slow_ts = simulate_ade(nominal_parameters(), cfg, 2000.0, 0.01);
  const TimeSeries fast_ts = simulate_ade(fast, cfg, 2000.0, 0.01);
  const std::size_t at = slow_ts.size() - 1;
  CHECK(fast_ts.gamma1[at] > slow_ts.gamma1[at]);
}

TEST_CASE("VV typical with V3 = 0 is bitwise independent of alpha") {
  ModelParameters a = nominal_parameters();
  a.V3 = 0.0;
  a.alpha = 0.3;
  ModelParameters b = a;
  b.alpha = 0.7;

  const auto cfg = ade_cfg(EcmoMode::VV, PortMode::Typical);
  const TimeSeries ta = simulate_ade(a, cfg, 3600.0, 0.01);
  const TimeSeries tb = simulate_ade(b, cfg, 3600.0, 0.01);
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) REQUIRE(ta.gamma1[i] == tb.gamma1[i]);
}
