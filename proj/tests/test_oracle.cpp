#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tmd/core_math.hpp"
#include "tmd/model.hpp"
#include "tmd/oracle.hpp"

using namespace tmd;
using oracle::enumerate_click_distribution;
using oracle::mc_click_distribution;
using oracle::McConfig;

TEST_CASE("enumeration over small assignments") {
  {
    const ClickDistribution d = enumerate_click_distribution(2, 2);
    REQUIRE(d.probabilities.size() == 3);
    CHECK(d.probabilities[0] == 0.0);
    CHECK(d.probabilities[1] == 0.5);
    CHECK(d.probabilities[2] == 0.5);
  }
  {
    // 81 assignments of 4 photons onto 3 bins: 3 all-in-one, 42 on two bins,
    // 36 surjections
    const ClickDistribution d = enumerate_click_distribution(4, 3);
    REQUIRE(d.probabilities.size() == 4);
    CHECK(d.probabilities[0] == 0.0);
    CHECK_THAT(d.probabilities[1], Catch::Matchers::WithinAbs(3.0 / 81.0, 1e-15));
    CHECK_THAT(d.probabilities[2], Catch::Matchers::WithinAbs(42.0 / 81.0, 1e-15));
    CHECK_THAT(d.probabilities[3], Catch::Matchers::WithinAbs(36.0 / 81.0, 1e-15));
  }
  CHECK(enumerate_click_distribution(0, 7).probabilities == std::vector<double>{1.0});
  CHECK(enumerate_click_distribution(1, 1).probabilities == std::vector<double>({0.0, 1.0}));
}

TEST_CASE("enumeration guard") {
  CHECK_THROWS_AS(enumerate_click_distribution(30, 3), std::domain_error);
  CHECK_THROWS_AS(enumerate_click_distribution(2, 0), std::domain_error);
  CHECK_THROWS_AS(enumerate_click_distribution(-1, 2), std::domain_error);
  CHECK_NOTHROW(enumerate_click_distribution(8, 8));
}

TEST_CASE("enumeration certifies the occupancy recurrence") {
  for (const auto [n, bins] : {std::pair{5, 3ull}, {8, 8ull}, {6, 4ull}, {7, 2ull}}) {
    const ClickDistribution exact = enumerate_click_distribution(n, bins);
    const ClickDistribution fast = occupancy_row(n, bins);
    REQUIRE(exact.probabilities.size() == fast.probabilities.size());
    for (std::size_t k = 0; k < exact.probabilities.size(); ++k)
      CHECK_THAT(fast.probabilities[k],
                 Catch::Matchers::WithinAbs(exact.probabilities[k], 1e-12));
  }
}

TEST_CASE("Monte Carlo trivial channels") {
  McConfig cfg;
  cfg.samples = 10'000;
  cfg.seed = 1;
  cfg.n_photons = 6;
  cfg.n_bins = 8;
  cfg.eta = 0.0;
  const ClickDistribution d = mc_click_distribution(cfg);
  CHECK(d.probabilities[0] == 1.0);
}

TEST_CASE("Monte Carlo single-photon Bernoulli rate") {
  McConfig cfg;
  cfg.samples = 1'000'000;
  cfg.seed = 7;
  cfg.n_photons = 1;
  cfg.n_bins = 2;
  cfg.eta = 0.5;
  const ClickDistribution d = mc_click_distribution(cfg);
  CHECK_THAT(d.probabilities[1], Catch::Matchers::WithinAbs(0.5, 0.002));
}

TEST_CASE("Monte Carlo agrees with the analytic pipeline") {
  McConfig cfg;
  cfg.samples = 1'000'000;
  cfg.seed = 2024;
  cfg.n_photons = 10;
  cfg.n_bins = 16;
  cfg.eta = 0.85;
  const ClickDistribution empirical = mc_click_distribution(cfg);

  TmdConfig analytic_cfg;
  analytic_cfg.stages = 4;
  analytic_cfg.eta_ex = 0.85;
  analytic_cfg = analytic_cfg.ideal_geometry();
  const ClickDistribution analytic = fock_click_statistics(10, analytic_cfg);

  CHECK(total_variation(empirical.probabilities, analytic.probabilities) <= 0.005);
}

TEST_CASE("identical configs give bit-identical empirical counts") {
  McConfig cfg;
  cfg.samples = 50'000;
  cfg.seed = 555;
  cfg.n_photons = 7;
  cfg.n_bins = 8;
  cfg.eta = 0.6;
  const ClickDistribution a = mc_click_distribution(cfg);
  const ClickDistribution b = mc_click_distribution(cfg);
  REQUIRE(a.probabilities.size() == b.probabilities.size());
  for (std::size_t k = 0; k < a.probabilities.size(); ++k)
    CHECK(a.probabilities[k] == b.probabilities[k]);
}

TEST_CASE("sampling error shrinks like one over root samples") {
  TmdConfig analytic_cfg;
  analytic_cfg.stages = 3;
  analytic_cfg.eta_ex = 0.7;
  analytic_cfg = analytic_cfg.ideal_geometry();
  const ClickDistribution analytic = fock_click_statistics(6, analytic_cfg);

  McConfig cfg;
  cfg.seed = 31337;
  cfg.n_photons = 6;
  cfg.n_bins = 8;
  cfg.eta = 0.7;

  cfg.samples = 10'000;
  const double tv_small =
      total_variation(mc_click_distribution(cfg).probabilities, analytic.probabilities);
  cfg.samples = 1'000'000;
  const double tv_large =
      total_variation(mc_click_distribution(cfg).probabilities, analytic.probabilities);
  // a factor 100 in samples is a factor 10 in expected error; allow a wide margin
  CHECK(tv_large <= 0.5 * tv_small);
}

TEST_CASE("McConfig validation") {
  McConfig cfg;
  cfg.samples = 0;
  CHECK_THROWS_AS(mc_click_distribution(cfg), std::domain_error);
  cfg = McConfig{};
  cfg.eta = 1.5;
  CHECK_THROWS_AS(mc_click_distribution(cfg), std::domain_error);
  cfg = McConfig{};
  cfg.n_bins = 0;
  CHECK_THROWS_AS(mc_click_distribution(cfg), std::domain_error);
}
