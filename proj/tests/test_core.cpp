#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wsn/core.hpp"

using Catch::Approx;
using namespace wsn;

TEST_CASE("distance identity and Pythagorean triple") {
  CHECK(distance({0, 0}, {0, 0}) == 0.0);
  CHECK(distance({0, 0}, {3, 4}) == 5.0);
}

TEST_CASE("distance matches coordinate recomputation and is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  for (int i = 0; i < 200; ++i) {
    const Position a{u(rng), u(rng)};
    const Position b{u(rng), u(rng)};
    const double expected = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
    CHECK(distance(a, b) == Approx(expected).epsilon(1e-14));
    CHECK(distance(a, b) == distance(b, a));
  }
}

TEST_CASE("transmit energy follows the first-order radio law") {
  RadioEnergyModel m;
  m.e_elec = 50e-9;
  m.eps_amp = 100e-12;
  CHECK(tx_energy(m, 1000, 0.0) == Approx(5.0e-5).epsilon(1e-12));
  // 1000 * (50e-9 + 100e-12 * 100^2) = 1000 * 1.05e-6
  CHECK(tx_energy(m, 1000, 100.0) == Approx(1.05e-3).epsilon(1e-12));

  const double amp_d = tx_energy(m, 1000, 37.0) - tx_energy(m, 1000, 0.0);
  const double amp_2d = tx_energy(m, 1000, 74.0) - tx_energy(m, 1000, 0.0);
  CHECK(amp_2d == Approx(4.0 * amp_d).epsilon(1e-12));

  CHECK(tx_energy(m, 1000, 10.0) < tx_energy(m, 1000, 10.5));
  CHECK_THROWS_AS(tx_energy(m, 1000, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(tx_energy(m, 0, 1.0), std::invalid_argument);
}

TEST_CASE("receive energy") {
  RadioEnergyModel m;
  CHECK_THROWS_AS(rx_energy(m, 0), std::invalid_argument);
  CHECK(rx_energy(m, 1) == m.e_elec);
  CHECK(rx_energy(m, 1000) == Approx(5.0e-5).epsilon(1e-12));
  CHECK(rx_energy(m, 777) == tx_energy(m, 777, 0.0));
}

TEST_CASE("debit floor leaves a dead node at exactly zero") {
  SensorNode n;
  n.initial_energy = n.residual_energy = 1.0;
  CHECK(n.debit(0.25) == 0.25);
  CHECK(n.residual_energy == 0.75);
  CHECK(n.alive());
  CHECK(n.debit(5.0) == 0.75);
  CHECK(n.residual_energy == 0.0);
  CHECK_FALSE(n.alive());
  CHECK(n.debit(1.0) == 0.0);
  CHECK(n.residual_energy == 0.0);
}

TEST_CASE("rating weights") {
  RatingWeights w;
  CHECK_NOTHROW(w.validate());
  w.energy = 0.5;
  CHECK_THROWS_AS(w.validate(), ConfigError);
  const auto n = RatingWeights::normalized(2, 2, 2, 2);
  CHECK(n.energy == 0.25);
  CHECK_NOTHROW(n.validate());
}

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.total_nodes() == 100);
  CHECK(c.coordinator_position() == Position{50, 50});

  SimConfig bad_r = c;
  bad_r.r = 0.51;
  CHECK_THROWS_AS(bad_r.validate(), ConfigError);
  SimConfig edge_r = c;
  edge_r.r = 0.5;
  CHECK_NOTHROW(edge_r.validate());

  SimConfig bad_counts = c;
  bad_counts.nodes_per_cluster = {50, 50};
  CHECK_THROWS_AS(bad_counts.validate(), ConfigError);
}

TEST_CASE("population variance") {
  CHECK(population_variance({}) == 0.0);
  CHECK(population_variance({3.0, 3.0}) == 0.0);
  CHECK(population_variance({1.0, 3.0}) == 1.0);
}
