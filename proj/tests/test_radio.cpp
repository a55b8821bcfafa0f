#include <doctest.h>

#include <cmath>
#include <vector>

#include "mobenv/errors.hpp"
#include "mobenv/radio.hpp"
#include "oracles.hpp"

using namespace mobenv;

namespace {

RadioParams budget_only() {
  RadioParams p;
  p.snr_lower_ref = 1.0;
  p.snr_upper_ref = 1e8;
  return p;
}

std::vector<double> draw(const FadingModel& m, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> out(n);
  for (double& h : out) h = sample_fading(m, rng);
  return out;
}

double mean_power(const std::vector<double>& h) {
  double s = 0.0;
  for (double v : h) s += v * v;
  return s / static_cast<double>(h.size());
}

}  // namespace

TEST_CASE("raw_snr follows the log-distance law") {
  RadioParams p = budget_only();
  const Position bs{0.0, 0.0};

  SUBCASE("reference point") {
    CHECK(raw_snr_db(bs, {1.0, 0.0}, p) == doctest::Approx(30.0 + 90.0 - 40.0));
  }
  SUBCASE("inside the reference distance is clamped") {
    CHECK(raw_snr_db(bs, {0.2, 0.0}, p) == raw_snr_db(bs, {1.0, 0.0}, p));
  }
  SUBCASE("doubling distance with exponent 2 costs 20 log10 2 dB") {
    p.pathloss_exponent = 2.0;
    const double drop = raw_snr_db(bs, {10.0, 0.0}, p) - raw_snr_db(bs, {20.0, 0.0}, p);
    CHECK(drop == doctest::Approx(6.0206).epsilon(1e-4));
  }
  SUBCASE("defaults at 100 m give 20 dB") {
    CHECK(raw_snr_db(bs, {100.0, 0.0}, p) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(raw_snr(bs, {0.0, 100.0}, p) == doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("non-finite coordinates") {
    CHECK_THROWS_AS(raw_snr(bs, {NAN, 0.0}, p), InvalidInput);
    CHECK_THROWS_AS(raw_snr({INFINITY, 0.0}, {1.0, 1.0}, p), InvalidInput);
  }
}

TEST_CASE("raw_snr is strictly decreasing beyond the reference distance") {
  const RadioParams p = budget_only();
  RngStream rng(3);
  for (int k = 0; k < 10'000; ++k) {
    const double d1 = rng.uniform(1.0, 300.0);
    const double d2 = d1 + rng.uniform(1e-6, 50.0);
    REQUIRE(raw_snr({0, 0}, {d1, 0}, p) > raw_snr({0, 0}, {d2, 0}, p));
  }
}

TEST_CASE("default references bracket 1 m and half the map diagonal") {
  const RadioParams p = RadioParams::with_default_refs(200.0, 200.0);
  CHECK(p.snr_upper_ref == doctest::Approx(1e8));
  const double half_diag = std::hypot(200.0, 200.0) / 2.0;
  CHECK(10.0 * std::log10(p.snr_lower_ref) ==
        doctest::Approx(80.0 - 30.0 * std::log10(half_diag)));
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("normalize_snr") {
  RadioParams p = budget_only();
  p.snr_lower_ref = 10.0;
  p.snr_upper_ref = 1000.0;

  SUBCASE("linear scale") {
    p.scale = SnrScale::Linear;
    CHECK(normalize_snr(10.0, p) == 0.0);
    CHECK(normalize_snr(1000.0, p) == 1.0);
    CHECK(normalize_snr(505.0, p) == doctest::Approx(0.5));
  }
  SUBCASE("decibel scale: geometric midpoint maps to 0.5") {
    CHECK(normalize_snr(10.0, p) == 0.0);
    CHECK(normalize_snr(1000.0, p) == 1.0);
    CHECK(normalize_snr(100.0, p) == doctest::Approx(0.5));
  }
  SUBCASE("clipping and endpoint idempotence") {
    for (SnrScale s : {SnrScale::Linear, SnrScale::Decibel}) {
      p.scale = s;
      CHECK(normalize_snr(0.0, p) == 0.0);
      CHECK(normalize_snr(5.0, p) == 0.0);
      CHECK(normalize_snr(1e9, p) == 1.0);
      CHECK(normalize_snr(0.0, p) == normalize_snr(normalize_snr(0.0, p), p));
    }
  }
  SUBCASE("monotone") {
    RngStream rng(11);
    for (SnrScale s : {SnrScale::Linear, SnrScale::Decibel}) {
      p.scale = s;
      for (int k = 0; k < 5'000; ++k) {
        const double a = rng.uniform(0.0, 1200.0);
        const double b = a + rng.uniform(0.0, 100.0);
        REQUIRE(normalize_snr(a, p) <= normalize_snr(b, p));
      }
    }
  }
  SUBCASE("negative raw SNR") { CHECK_THROWS_AS(normalize_snr(-1.0, p), InvalidInput); }
}

TEST_CASE("fading model parsing and validation") {
  CHECK(FadingModel::parse("none") == FadingModel::none());
  CHECK(FadingModel::parse("rayleigh") == FadingModel::rayleigh());
  CHECK(FadingModel::parse("rician:3") == FadingModel::rician(3.0));
  CHECK(FadingModel::parse("rician:3").label() == "rician:3");
  CHECK_THROWS_AS(FadingModel::parse("rician:-1"), InvalidInput);
  CHECK_THROWS_AS(FadingModel::parse("rician:x"), InvalidInput);
  CHECK_THROWS_AS(FadingModel::parse("nakagami"), InvalidInput);

  RngStream rng(1);
  CHECK_THROWS_AS(sample_fading(FadingModel::rician(-0.5), rng), InvalidInput);
  CHECK_THROWS_AS(sample_fading(FadingModel::rayleigh(0.0), rng), InvalidInput);
}

TEST_CASE("no fading is the identity") {
  RngStream rng(5);
  for (int k = 0; k < 100; ++k) CHECK(sample_fading(FadingModel::none(), rng) == 1.0);
}

TEST_CASE("Rayleigh power has unit mean and the stated CDF") {
  const std::vector<double> h = draw(FadingModel::rayleigh(), 1'000'000, 21);
  CHECK(mean_power(h) == doctest::Approx(1.0).epsilon(0.005));

  const std::vector<double> subset(h.begin(), h.begin() + 100'000);
  const double d = oracle::ks_statistic(subset, [](double x) { return 1.0 - std::exp(-x * x); });
  CHECK(d < oracle::ks_critical_001(1e5));
}

TEST_CASE("Rician power mean equals omega for K in {0, 3, 10}") {
  for (double k : {0.0, 3.0, 10.0}) {
    CAPTURE(k);
    CHECK(mean_power(draw(FadingModel::rician(k), 1'000'000, 31)) == doctest::Approx(1.0).epsilon(0.01));
  }
  CHECK(mean_power(draw(FadingModel::rician(3.0, 2.5), 200'000, 32)) ==
        doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("Rician K=0 matches Rayleigh in distribution") {
  const double d = oracle::ks_two_sample(draw(FadingModel::rician(0.0), 100'000, 41),
                                         draw(FadingModel::rayleigh(), 100'000, 42));
  CHECK(d < oracle::ks_critical_001(1e5 * 1e5 / 2e5));
}

TEST_CASE("Rician samples follow the Bessel-form pdf") {
  for (double k : {3.0, 10.0}) {
    CAPTURE(k);
    const oracle::RicianCdfTable cdf(k, 1.0);
    const double d = oracle::ks_statistic(draw(FadingModel::rician(k), 100'000, 51), cdf);
    CHECK(d < oracle::ks_critical_001(1e5));
  }
}

TEST_CASE("Rician with a dominant LoS path is nearly deterministic") {
  const std::vector<double> h = draw(FadingModel::rician(1e6), 100'000, 61);
  double m = 0.0;
  for (double v : h) m += v;
  m /= static_cast<double>(h.size());
  double ss = 0.0;
  for (double v : h) ss += (v - m) * (v - m);
  CHECK(std::sqrt(ss / static_cast<double>(h.size())) < 1e-2);
  CHECK(m == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("fade_matrix") {
  SnrMatrix snr(3, 5);
  RngStream fill(2);
  for (double& v : snr.values()) v = fill.uniform();

  SUBCASE("no fading returns the input bit-exactly") {
    RngStream rng(1);
    const RngStream before = rng;
    CHECK(fade_matrix(snr, FadingModel::none(), rng) == snr);
    CHECK(rng == before);
  }
  SUBCASE("entries scale by |H|^2 and are not clipped") {
    SnrMatrix one(1, 1, 0.5);
    bool saw_above_one = false;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      RngStream a(seed), b(seed);
      const double h = sample_fading(FadingModel::rayleigh(), a);
      const double faded = fade_matrix(one, FadingModel::rayleigh(), b)(0, 0);
      REQUIRE(faded == 0.5 * h * h);
      saw_above_one = saw_above_one || faded > 1.0;
    }
    CHECK(saw_above_one);
    CHECK(clip_unit(SnrMatrix(1, 1, 2.0))(0, 0) == 1.0);
  }
  SUBCASE("Monte-Carlo mean preserves every entry") {
    RngStream rng(9);
    SnrMatrix acc(3, 5, 0.0);
    const int n = 100'000;
    for (int k = 0; k < n; ++k) {
      const SnrMatrix f = fade_matrix(snr, FadingModel::rayleigh(), rng);
      for (std::size_t e = 0; e < acc.size(); ++e) acc.values()[e] += f.values()[e];
    }
    for (std::size_t e = 0; e < acc.size(); ++e) {
      CHECK(acc.values()[e] / n == doctest::Approx(snr.values()[e]).epsilon(0.01));
    }
  }
}

TEST_CASE("rng streams are reproducible and independent") {
  RngStream a = RngStream::derive(7, 1), b = RngStream::derive(7, 1), c = RngStream::derive(7, 2);
  for (int k = 0; k < 10; ++k) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  RngStream u(4);
  std::vector<int> counts(27, 0);
  for (int k = 0; k < 27'000; ++k) ++counts[u.uniform_index(27)];
  double chi2 = 0.0;
  for (int c27 : counts) chi2 += (c27 - 1000.0) * (c27 - 1000.0) / 1000.0;
  CHECK(chi2 < oracle::kChi2_099_df26);
}
