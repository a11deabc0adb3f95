#include <cmath>
#include <vector>

#include "doctest.h"
#include "maxdissent/problems.hpp"
#include "maxdissent/rng.hpp"
#include "support/oracles.hpp"

using namespace maxdissent;

namespace {

std::vector<double> random_point(int d, Rng& rng) {
  std::vector<double> w(d);
  for (double& v : w) v = rng.normal();
  return w;
}

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

TEST_CASE("ml subgradient: 2(w - c)/sigma^2") {
  const auto p = make_ml_problem({2.0}, {1.0});
  CHECK(subgradient(p, 1, std::vector<double>{3.0})[0] == doctest::Approx(2.0));
}

TEST_CASE("constant problem has zero subgradient everywhere") {
  const auto p = make_constant_problem(3, 4);
  Rng rng(40);
  const auto g = subgradient(p, 2, random_point(4, rng));
  for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("logistic gradient matches central finite differences") {
  Rng rng(41);
  const auto p = generate_logistic_instance(3, 8, 5, 12345);
  REQUIRE(p.d == 6);
  for (int trial = 0; trial < 20; ++trial) {
    const int agent = 1 + rng.uniform_index(3);
    const auto w = random_point(p.d, rng);
    const auto grad = subgradient(p, agent, w);
    const auto fd = oracles::finite_difference_gradient(
        [&](std::span<const double> point) { return local_loss(p, agent, point); }, w);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < p.d; ++k) {
      num += (grad[k] - fd[k]) * (grad[k] - fd[k]);
      den += fd[k] * fd[k];
    }
    CHECK(std::sqrt(num) <= 1e-5 * std::max(1.0, std::sqrt(den)));
  }
}

TEST_CASE("ml optimum closed form") {
  CHECK((*optimum(make_ml_problem({0, 2}, {1, 1})))[0] == doctest::Approx(1.0));
  CHECK((*optimum(make_ml_problem({0, 3}, {1, 0.5})))[0] == doctest::Approx(2.0));
  CHECK(!optimum(make_constant_problem(3)).has_value());
  CHECK(!optimum(generate_logistic_instance(2, 3, 2, 1)).has_value());
}

TEST_CASE("ml optimum minimizes F against local perturbations") {
  const auto p = generate_ml_instance(50, 4.0, 777);
  const double w_star = (*optimum(p))[0];
  const double f_star = global_loss(p, std::vector<double>{w_star});
  CHECK(f_star <= global_loss(p, std::vector<double>{w_star + 1e-3}));
  CHECK(f_star <= global_loss(p, std::vector<double>{w_star - 1e-3}));
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const double w = w_star + 10.0 * rng.normal();
    CHECK(f_star <= global_loss(p, std::vector<double>{w}) + 1e-12);
  }
}

TEST_CASE("ml instance generation is reproducible and respects the variance bounds") {
  const auto a = generate_ml_instance(100, 2.5, 9);
  const auto b = generate_ml_instance(100, 2.5, 9);
  CHECK(a.c == b.c);
  CHECK(a.sigma_sq == b.sigma_sq);
  for (double s : a.sigma_sq) {
    CHECK(s > 0.0);
    CHECK(1.0 / s > 0.0);
    CHECK(1.0 / s < 1.0);
  }
}

TEST_CASE("1/sigma^2 has the uniform(0,1) mean") {
  const auto p = generate_ml_instance(100000, 0.0, 4242);
  double mean = 0.0;
  for (double s : p.sigma_sq) mean += 1.0 / s;
  mean /= p.n;
  CHECK(std::abs(mean - 0.5) < 0.005);
}

TEST_CASE("logistic sharding arithmetic") {
  const auto p = generate_logistic_instance(4, 10, 3, 5);
  CHECK(p.total_samples == 40);
  for (int i = 1; i <= 4; ++i) CHECK(p.shards[i].size() == 10);
  CHECK(p.regularization == doctest::Approx(1.0 / 80.0));
}

TEST_CASE("logistic loss at the origin is log 2 per sample") {
  const auto p = generate_logistic_instance(4, 10, 3, 6);
  const std::vector<double> zero(p.d, 0.0);
  CHECK(global_loss(p, zero) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("sum of shard losses equals the pooled central loss") {
  Rng rng(43);
  const auto p = generate_logistic_instance(5, 7, 4, 77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = random_point(p.d, rng);
    // central recomputation over the pooled samples
    double pooled = 0.0;
    for (int i = 1; i <= p.n; ++i)
      for (const auto& s : p.shards[i]) {
        double z = w[p.d - 1];
        for (std::size_t k = 0; k < s.features.size(); ++k) z += s.features[k] * w[k];
        const double pos = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        pooled += pos - s.label * z;
      }
    pooled /= p.total_samples;
    double sq = 0.0;
    for (double v : w) sq += v * v;
    pooled += p.regularization * sq;
    CHECK(global_loss(p, w) == doctest::Approx(pooled).epsilon(1e-12));
  }
}

TEST_CASE("convexity spot-check for every kind") {
  Rng rng(44);
  const ProblemSpec problems[] = {make_constant_problem(2, 3),
                                  generate_ml_instance(4, 1.0, 10),
                                  generate_logistic_instance(3, 5, 3, 11)};
  for (const auto& p : problems) {
    for (int trial = 0; trial < 50; ++trial) {
      const int agent = 1 + rng.uniform_index(p.n);
      const auto u = random_point(p.d, rng);
      const auto v = random_point(p.d, rng);
      std::vector<double> mid(p.d);
      for (int k = 0; k < p.d; ++k) mid[k] = 0.5 * (u[k] + v[k]);
      CHECK(local_loss(p, agent, mid) <=
            0.5 * local_loss(p, agent, u) + 0.5 * local_loss(p, agent, v) + 1e-10);
    }
  }
}

TEST_CASE("subgradient inequality f(w) >= f(w0) + <g, w - w0>") {
  Rng rng(45);
  const ProblemSpec problems[] = {generate_ml_instance(4, 1.0, 12),
                                  generate_logistic_instance(3, 5, 3, 13)};
  for (const auto& p : problems) {
    for (int trial = 0; trial < 50; ++trial) {
      const int agent = 1 + rng.uniform_index(p.n);
      const auto w0 = random_point(p.d, rng);
      const auto w = random_point(p.d, rng);
      const auto g = subgradient(p, agent, w0);
      std::vector<double> diff(p.d);
      for (int k = 0; k < p.d; ++k) diff[k] = w[k] - w0[k];
      CHECK(local_loss(p, agent, w) >= local_loss(p, agent, w0) + inner(g, diff) - 1e-10);
    }
  }
}

TEST_CASE("subgradient bound reporting") {
  CHECK(subgradient_bound(make_constant_problem(2)) == 0.0);
  CHECK(!subgradient_bound(generate_ml_instance(4, 0.0, 1)).has_value());  // unbounded
  CHECK(!subgradient_bound(generate_logistic_instance(2, 3, 2, 1)).has_value());

  auto p = generate_logistic_instance(2, 3, 2, 1);
  p = make_logistic_problem(std::move(p.shards), 0.0);
  const auto bound = subgradient_bound(p);
  REQUIRE(bound.has_value());
  Rng rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = subgradient(p, 1 + rng.uniform_index(2), random_point(p.d, rng));
    CHECK(std::sqrt(inner(g, g)) <= *bound + 1e-12);
  }
}

TEST_CASE("instances round-trip through JSON") {
  const auto ml = generate_ml_instance(6, 3.0, 21);
  const auto ml_back = problem_from_json(problem_to_json(ml));
  CHECK(ml_back.kind == ml.kind);
  CHECK(ml_back.c == ml.c);
  CHECK(ml_back.sigma_sq == ml.sigma_sq);

  const auto lg = generate_logistic_instance(3, 4, 2, 22);
  const auto lg_back = problem_from_json(problem_to_json(lg));
  CHECK(lg_back.total_samples == lg.total_samples);
  CHECK(lg_back.regularization == lg.regularization);
  CHECK(lg_back.d == lg.d);
  Rng rng(47);
  const auto w = random_point(lg.d, rng);
  CHECK(global_loss(lg_back, w) == global_loss(lg, w));

  const auto ct = make_constant_problem(4, 2);
  const auto ct_back = problem_from_json(problem_to_json(ct));
  CHECK(ct_back.n == 4);
  CHECK(ct_back.d == 2);
}

TEST_CASE("dimension mismatches are rejected") {
  const auto p = generate_ml_instance(4, 0.0, 2);
  CHECK_THROWS_AS(subgradient(p, 1, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(subgradient(p, 9, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_ml_problem({1.0}, {0.0}), std::invalid_argument);
}
