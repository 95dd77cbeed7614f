#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tmd/model.hpp"
#include "tmd/oracle.hpp"

using namespace tmd;

namespace {

TmdConfig ideal_with_stages(unsigned b, double eta_ex = 1.0) {
  TmdConfig cfg;
  cfg.stages = b;
  cfg.eta_ex = eta_ex;
  return cfg.ideal_geometry();
}

} // namespace

TEST_CASE("loss_matrix limiting cases") {
  {
    const LossMatrix lm = loss_matrix(1.0, 5);
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= 5; ++k) CHECK(lm.m.at(n, k) == (n == k ? 1.0 : 0.0));
  }
  {
    const LossMatrix lm = loss_matrix(0.0, 5);
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= 5; ++k) CHECK(lm.m.at(n, k) == (k == 0 ? 1.0 : 0.0));
  }
  {
    const LossMatrix lm = loss_matrix(0.5, 2);
    CHECK_THAT(lm.m.at(2, 0), Catch::Matchers::WithinAbs(0.25, 1e-15));
    CHECK_THAT(lm.m.at(2, 1), Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(lm.m.at(2, 2), Catch::Matchers::WithinAbs(0.25, 1e-15));
  }
  CHECK_THROWS_AS(loss_matrix(1.5, 3), std::domain_error);
  CHECK_THROWS_AS(loss_matrix(-0.1, 3), std::domain_error);
  CHECK_THROWS_AS(loss_matrix(0.5, -1), std::domain_error);
}

TEST_CASE("loss_matrix rows are stochastic with zero upper triangle") {
  for (const double eta : {0.0, 0.3, 0.5, 0.85, 1.0}) {
    const LossMatrix lm = loss_matrix(eta, 30);
    for (int n = 0; n <= 30; ++n) {
      double sum = 0.0;
      for (int k = 0; k <= 30; ++k) {
        CHECK(lm.m.at(n, k) >= 0.0);
        if (k > n) CHECK(lm.m.at(n, k) == 0.0);
        sum += lm.m.at(n, k);
      }
      CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("binomial loss channels compose as a semigroup") {
  // L(eta1) L(eta2) = L(eta1 eta2)
  const int n_max = 30;
  const double etas[] = {0.3, 0.5, 0.85, 1.0};
  for (const double e1 : etas) {
    for (const double e2 : etas) {
      const LossMatrix a = loss_matrix(e1, n_max);
      const LossMatrix b = loss_matrix(e2, n_max);
      const LossMatrix c = loss_matrix(e1 * e2, n_max);
      for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= n_max; ++k) {
          double prod = 0.0;
          for (int m = 0; m <= n_max; ++m) prod += a.m.at(n, m) * b.m.at(m, k);
          CHECK_THAT(prod, Catch::Matchers::WithinAbs(c.m.at(n, k), 1e-12));
        }
      }
    }
  }
}

TEST_CASE("convolution_matrix rows are occupancy rows") {
  const ConvolutionMatrix cm = convolution_matrix(4, 6);
  CHECK(cm.m.n_rows == 7);
  CHECK(cm.m.n_cols == 5);  // k capped at n_bins
  for (int n = 0; n <= 6; ++n) {
    const ClickDistribution row = occupancy_row(n, 4);
    double sum = 0.0;
    for (std::size_t k = 0; k < cm.m.n_cols; ++k) {
      const double expected = k < row.probabilities.size() ? row.probabilities[k] : 0.0;
      CHECK(cm.m.at(n, k) == expected);
      sum += cm.m.at(n, k);
    }
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("tmd_efficiency reproduces the dB budget by hand") {
  TmdConfig cfg;
  cfg.stages = 0;
  CHECK(tmd_efficiency(cfg) == 1.0);

  // b = 8: 255 bins of delay at 10 ns and 2e8 m/s is 510 m, so
  // 8 * 0.05 dB + 0.51 km * 0.2 dB/km = 0.502 dB.
  cfg.stages = 8;
  CHECK_THAT(tmd_efficiency(cfg),
             Catch::Matchers::WithinRel(std::pow(10.0, -0.502 / 10.0), 1e-14));
  CHECK_THAT(tmd_efficiency(cfg), Catch::Matchers::WithinAbs(0.8908, 1e-4));

  // b = 10: 1023 * 10 ns * 2e8 m/s = 2.046 km -> 0.5 + 0.4092 dB.
  cfg.stages = 10;
  CHECK_THAT(tmd_efficiency(cfg),
             Catch::Matchers::WithinRel(std::pow(10.0, -0.9092 / 10.0), 1e-14));
  CHECK_THAT(tmd_efficiency(cfg), Catch::Matchers::WithinAbs(0.8112, 2e-4));
}

TEST_CASE("TmdConfig validation") {
  TmdConfig cfg;
  cfg.stages = 21;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = TmdConfig{};
  cfg.eta_ex = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = TmdConfig{};
  cfg.splitter_loss_db = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = TmdConfig{};
  cfg.dead_time_s = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("click_statistics hand-checked cases") {
  {
    // vacuum in, vacuum clicks out, whatever the geometry
    TmdConfig cfg;
    cfg.stages = 5;
    cfg.eta_ex = 0.7;
    const ClickDistribution d = click_statistics(PhotonStatistics::fock(0), cfg);
    REQUIRE(d.probabilities.size() == 1);
    CHECK(d.probabilities[0] == 1.0);
  }
  {
    // single photon surviving a 50 % channel, one undivided bin
    const ClickDistribution d = fock_click_statistics(1, ideal_with_stages(0, 0.5));
    REQUIRE(d.probabilities.size() == 2);
    CHECK_THAT(d.probabilities[0], Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(d.probabilities[1], Catch::Matchers::WithinAbs(0.5, 1e-15));
  }
  {
    // two photons, no loss, two bins: both in one bin half the time
    const ClickDistribution d = fock_click_statistics(2, ideal_with_stages(1));
    REQUIRE(d.probabilities.size() == 3);
    CHECK(d.probabilities[0] == 0.0);
    CHECK_THAT(d.probabilities[1], Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(d.probabilities[2], Catch::Matchers::WithinAbs(0.5, 1e-15));
    const ClickDistribution exact = oracle::enumerate_click_distribution(2, 2);
    for (std::size_t k = 0; k < 3; ++k)
      CHECK_THAT(d.probabilities[k],
                 Catch::Matchers::WithinAbs(exact.probabilities[k], 1e-15));
  }
  {
    // |2> through a 50 % total channel onto two bins, composed by hand:
    // 1/4 (1,0,0) + 1/2 (0,1,0) + 1/4 (0,1/2,1/2) = (1/4, 5/8, 1/8)
    const ClickDistribution d = fock_click_statistics(2, ideal_with_stages(1, 0.5));
    REQUIRE(d.probabilities.size() == 3);
    CHECK_THAT(d.probabilities[0], Catch::Matchers::WithinAbs(0.25, 1e-15));
    CHECK_THAT(d.probabilities[1], Catch::Matchers::WithinAbs(0.625, 1e-15));
    CHECK_THAT(d.probabilities[2], Catch::Matchers::WithinAbs(0.125, 1e-15));
  }
}

TEST_CASE("fock_click_statistics reduces to pure convolution without loss") {
  const ClickDistribution d = fock_click_statistics(20, ideal_with_stages(8));
  const ClickDistribution occ = occupancy_row(20, 256);
  REQUIRE(d.probabilities.size() == occ.probabilities.size());
  for (std::size_t k = 0; k < d.probabilities.size(); ++k)
    CHECK(d.probabilities[k] == occ.probabilities[k]);
}

TEST_CASE("click_statistics rejects unnormalized input") {
  CHECK_THROWS_AS(PhotonStatistics({0.5, 0.2}), std::domain_error);
  CHECK_THROWS_AS(PhotonStatistics({1.2, -0.2}), std::domain_error);
  PhotonStatistics p = PhotonStatistics::fock(1);
  p.probabilities = {0.5, 0.9};  // corrupted after construction
  TmdConfig cfg;
  cfg.stages = 2;
  CHECK_THROWS_AS(click_statistics(p, cfg), std::domain_error);
}

TEST_CASE("single undivided bin saturates at one click") {
  // b = 0, eta = 1: identity on {0,1} photons, one click for any n >= 1
  const TmdConfig cfg = ideal_with_stages(0);
  CHECK(fock_click_statistics(0, cfg).probabilities == std::vector<double>{1.0});
  CHECK(fock_click_statistics(1, cfg).probabilities == std::vector<double>{0.0, 1.0});
  for (const int n : {2, 5, 17}) {
    const ClickDistribution d = fock_click_statistics(n, cfg);
    REQUIRE(d.probabilities.size() == 2);
    CHECK(d.probabilities[0] == 0.0);
    CHECK_THAT(d.probabilities[1], Catch::Matchers::WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("mean clicks never exceed the mean surviving photon number") {
  for (const int n : {1, 5, 10, 20}) {
    for (const unsigned b : {0u, 1u, 3u, 8u}) {
      for (const double eta : {0.5, 0.85, 1.0}) {
        const ClickDistribution d = fock_click_statistics(n, ideal_with_stages(b, eta));
        CHECK(d.mean_clicks() <= eta * n + 1e-12);
      }
    }
  }
}

TEST_CASE("pipeline outputs stay valid over randomized inputs") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_int_distribution<unsigned> stages(0, 12);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> weights(static_cast<std::size_t>(size(gen)));
    double sum = 0.0;
    for (double& w : weights) {
      w = -std::log(1.0 - uniform(gen));
      sum += w;
    }
    for (double& w : weights) w /= sum;
    TmdConfig cfg;
    cfg.stages = stages(gen);
    cfg.eta_ex = uniform(gen);
    const ClickDistribution d = click_statistics(PhotonStatistics(weights), cfg);
    double total = 0.0;
    for (const double p : d.probabilities) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}
