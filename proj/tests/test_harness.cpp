#include <doctest.h>

#include "mobenv/errors.hpp"
#include "mobenv/harness.hpp"

using namespace mobenv;

TEST_CASE("summaries") {
  const EvalResult one = summarize_returns({42.0});
  CHECK(one.mean == 42.0);
  CHECK(one.std == 0.0);
  CHECK(one.sem == 0.0);

  const EvalResult two = summarize_returns({1.0, 3.0, 5.0, 7.0});
  CHECK(two.mean == 4.0);
  CHECK(two.std == doctest::Approx(std::sqrt(5.0)));
  CHECK(two.sem == doctest::Approx(std::sqrt(5.0) / 2.0));

  const EvalResult e = evaluate(NetworkConfig::defaults(), PolicySpec::random(), 1, 3);
  CHECK(e.returns.size() == 1);
  CHECK(e.std == 0.0);
  CHECK_THROWS_AS(evaluate(NetworkConfig::defaults(), PolicySpec::random(), 0), InvalidInput);
}

TEST_CASE("a frozen deterministic scenario gives identical returns on every seed") {
  NetworkConfig cfg = NetworkConfig::defaults();
  cfg.mobility.variant = MobilityVariant::Limited;
  cfg.mobility.speed = 0.0;
  cfg.mobility.init_radius = 0.0;  // users sit on their fixed anchors
  const EvalResult r = evaluate(cfg, PolicySpec::expert(), 5, 100);
  for (double x : r.returns) CHECK(x == r.returns[0]);
  CHECK(r.std == 0.0);
}

TEST_CASE("evaluation is reproducible and worker-independent") {
  const NetworkConfig cfg = NetworkConfig::defaults();
  const EvalResult a = evaluate(cfg, PolicySpec::medium(), 8, 11, 1);
  const EvalResult b = evaluate(cfg, PolicySpec::medium(), 8, 11, 3);
  CHECK(a.returns == b.returns);
}

TEST_CASE("rescaled score") {
  CHECK(rescale(50.0, 80.0, 50.0) == 0.0);
  CHECK(rescale(80.0, 80.0, 50.0) == 100.0);
  CHECK(rescale(65.0, 80.0, 50.0) == doctest::Approx(50.0));
  CHECK(rescale(90.0, 80.0, 50.0) == doctest::Approx(133.333333333));
  CHECK(rescale(40.0, 80.0, 50.0) < 0.0);
  CHECK_THROWS_AS(rescale(1.0, 2.0, 2.0), InvalidInput);

  // Invariant under a common affine change of the return scale.
  RngStream rng(4);
  for (int k = 0; k < 1000; ++k) {
    const double m = rng.uniform(0, 100), e = rng.uniform(50, 100), r = rng.uniform(0, 40);
    const double a = rng.uniform(0.1, 10), b = rng.uniform(-50, 50);
    REQUIRE(rescale(a * m + b, a * e + b, a * r + b) == doctest::Approx(rescale(m, e, r)));
  }
}

TEST_CASE("fading sweep") {
  const NetworkConfig cfg = NetworkConfig::defaults();
  const std::vector<FadingModel> models{FadingModel::rayleigh(), FadingModel::rician(3.0),
                                        FadingModel::rician(10.0), FadingModel::none()};
  const SweepReport rep = fading_sweep(cfg, PolicySpec::expert(), models, 20, 0);
  REQUIRE(rep.rows.size() == 4);
  REQUIRE(rep.checks.size() == 3);
  CHECK(rep.checks[0].lower == "rayleigh");
  CHECK(rep.checks[2].higher == "none");
  for (const OrderingCheck& c : rep.checks) {
    CHECK(c.sigma >= 0.0);
    CHECK(c.ok == (c.gap >= -2.0 * c.sigma));
  }
  CHECK(rep.ordered());
  CHECK(rep.rows[0].result.mean < rep.rows[3].result.mean);

  SUBCASE("the same model twice is trivially ordered") {
    const SweepReport same =
        fading_sweep(cfg, PolicySpec::random(), {FadingModel::none(), FadingModel::none()}, 5, 0);
    CHECK(same.checks[0].gap == 0.0);
    CHECK(same.checks[0].sigma == 0.0);
    CHECK(same.ordered());
  }
  SUBCASE("listing the models backwards is flagged") {
    const SweepReport back =
        fading_sweep(cfg, PolicySpec::expert(), {FadingModel::none(), FadingModel::rayleigh()}, 20, 0);
    CHECK_FALSE(back.ordered());
  }
  CHECK_THROWS_AS(fading_sweep(cfg, PolicySpec::expert(), {FadingModel::none()}, 5), InvalidInput);
}

TEST_CASE("CSV report") {
  const std::vector<ReportRow> rows{{"expert", "none", "full", 30, 75.5, 1.25, 0.25, 100.0},
                                    {"random", "rayleigh", "limited", 30, 55.0, 2.0, 0.5, std::nullopt}};
  const std::string csv = format_csv(rows);
  CHECK(csv ==
        "policy_id,fading,mobility_variant,n_episodes,mean,std,sem,score\n"
        "expert,none,full,30,75.5,1.25,0.25,100\n"
        "random,rayleigh,limited,30,55,2,0.5,\n");
}
