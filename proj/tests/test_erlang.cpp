#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "retainer/erlang.hpp"

using namespace retainer;

TEST_CASE("erlang_loss matches the small closed-form cases") {
  CHECK(erlang_loss(0.5, 0) == 1.0);
  CHECK(erlang_loss(0.0, 3) == 0.0);
  CHECK(erlang_loss(1.0, 3) == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(erlang_loss(0.5, 3) == doctest::Approx(0.0126582278481).epsilon(1e-10));
  CHECK(erlang_loss(0.0, 0) == 1.0); // empty pool of size zero is empty
}

TEST_CASE("recurrence equals the factorial-sum evaluation to 1e-12") {
  for (double rho : {0.1, 0.5, 1.0, 2.0, 6.0, 10.0})
    for (long long c = 0; c <= 20; ++c) {
      const double direct = oracles::erlang_loss_direct(rho, c);
      const double rec = erlang_loss(rho, c);
      CHECK(std::abs(rec - direct) <= 1e-12 * std::max(direct, 1e-300));
    }
}

TEST_CASE("erlang_loss monotonicity") {
  for (double rho : {0.3, 1.0, 4.0, 9.0})
    for (long long c = 0; c < 30; ++c)
      CHECK(erlang_loss(rho, c + 1) < erlang_loss(rho, c));
  for (long long c : {1LL, 3LL, 10LL}) {
    double prev = erlang_loss(0.1, c);
    for (double rho : {0.2, 0.5, 1.0, 3.0, 8.0}) {
      const double cur = erlang_loss(rho, c);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("erlang_loss depends only on the ratio lambda/mu") {
  for (double t : {0.001, 0.1, 7.0, 1234.0})
    CHECK(erlang_loss(3.0 * t / (2.0 * t), 4) ==
          doctest::Approx(erlang_loss(1.5, 4)).epsilon(1e-15));
}

TEST_CASE("no overflow or NaN at scale") {
  const double big = erlang_loss(1e5, 1000000);
  CHECK(std::isfinite(big));
  CHECK(big >= 0.0);
  CHECK(big <= 1.0);
  const double loaded = erlang_loss(1e5, 100000); // c < rho: pool mostly empty
  CHECK(std::isfinite(loaded));
  CHECK(loaded > 0.0);
  CHECK(std::isfinite(approx_loss(1e5, 1000000)));
}

TEST_CASE("erlang_loss rejects bad domains") {
  CHECK_THROWS_AS(erlang_loss(-0.5, 3), std::domain_error);
  CHECK_THROWS_AS(erlang_loss(1.0, -1), std::domain_error);
}

TEST_CASE("busy_distribution") {
  const auto rest = busy_distribution(0.0, 2);
  CHECK(rest == std::vector<double>{1.0, 0.0, 0.0});

  const auto half = busy_distribution(1.0, 1);
  CHECK(half[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto d = busy_distribution(1.0, 3);
  const std::vector<double> expect = {0.375, 0.375, 0.1875, 0.0625};
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(d[i] == doctest::Approx(expect[i]).epsilon(1e-12));

  for (double rho : {0.1, 0.5, 1.0, 2.0, 6.0, 10.0})
    for (long long c : {1LL, 4LL, 12LL, 20LL}) {
      const auto dist = busy_distribution(rho, c);
      double sum = 0.0, mean = 0.0;
      for (size_t i = 0; i < dist.size(); ++i) {
        CHECK(dist[i] >= 0.0);
        sum += dist[i];
        mean += static_cast<double>(i) * dist[i];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(mean == doctest::Approx(expected_busy(rho, c)).epsilon(1e-11));
      const auto direct = oracles::busy_distribution_direct(rho, c);
      for (size_t i = 0; i < dist.size(); ++i)
        CHECK(dist[i] == doctest::Approx(direct[i]).epsilon(1e-11));
    }
}

TEST_CASE("expected_busy") {
  CHECK(expected_busy(0.0, 5) == 0.0);
  CHECK(expected_busy(1.0, 3) == doctest::Approx(0.9375).epsilon(1e-12));
  // rho -> infinity: all three slots stay busy, none idle
  CHECK(expected_busy(1e9, 3) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(3.0 - expected_busy(1e9, 3) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("expected_wait") {
  CHECK(expected_wait(0.0, 1.0, 2) == 0.0);
  CHECK(expected_wait(1.0, 1.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expected_wait(1.0, 1.0 / 6.0, 0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(expected_wait(1.0, 0.0, 2), std::domain_error);
}

TEST_CASE("retainer_cost_rate") {
  CHECK(retainer_cost_rate(2.5, 0.0, 4) == doctest::Approx(10.0));
  CHECK(retainer_cost_rate(1.0, 1.0, 3) == doctest::Approx(2.0625).epsilon(1e-12));
  // half a cent per minute keeps one idle worker at 0.30 currency/hour
  const double s_per_sec = 0.005 / 60.0;
  CHECK(retainer_cost_rate(s_per_sec, 0.0, 1) * 3600.0 ==
        doctest::Approx(0.30).epsilon(1e-12));
}

TEST_CASE("total_cost") {
  RetainerParams p;
  p.lambda = 1.0;
  p.mu = 1.0;
  p.wage = 1.0;

  p.task_cost = 0.0;
  CHECK(total_cost(p, 3) == doctest::Approx(2.0625).epsilon(1e-12));
  p.task_cost = 10.0;
  CHECK(total_cost(p, 0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(total_cost(p, 3) == doctest::Approx(2.6875).epsilon(1e-12));
  // per-time variant weights the miss term by lambda; identical at lambda=1
  CHECK(total_cost(p, 3, CostConvention::PerTime) ==
        doctest::Approx(2.6875).epsilon(1e-12));
  p.lambda = 2.0;
  p.mu = 2.0;
  CHECK(total_cost(p, 3, CostConvention::PerTime) ==
        doctest::Approx(2.0 * 10.0 * 0.0625 + 2.0625).epsilon(1e-12));
}

TEST_CASE("approx_loss") {
  CHECK(approx_loss(1.0, 1) ==
        doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  // a coarse estimate, not a bound: it tracks the exponential decay in c
  // but carries a polynomial prefactor, so only order-of-magnitude checks
  double prev = approx_loss(10.0, 20);
  for (long long c : {25LL, 30LL, 40LL, 60LL}) {
    const double cur = approx_loss(10.0, c);
    CHECK(cur > 0.0);
    CHECK(cur < prev);
    prev = cur;
  }
  // same exponent as the exact loss: log-ratio stays bounded as c grows
  for (long long c : {30LL, 40LL, 60LL}) {
    const double log_gap =
        std::log(approx_loss(10.0, c)) - std::log(erlang_loss(10.0, c));
    CHECK(log_gap > 0.0);
    CHECK(log_gap < std::log(2.0 * M_PI * static_cast<double>(c)) + 1.0);
  }
  // log-space evaluation survives extreme sizes without overflow
  const double extreme = approx_loss(1e5, 200000);
  CHECK(std::isfinite(extreme));
  CHECK(extreme >= 0.0);
  // k = 1 combined-pool approximation degenerates to this formula
  CHECK(combined_pool_loss(10.0, 20, 1).approx ==
        doctest::Approx(approx_loss(10.0, 20)).epsilon(1e-12));
  CHECK_THROWS_AS(approx_loss(0.0, 3), std::domain_error);
}

TEST_CASE("combined_pool_loss") {
  CHECK(combined_pool_loss(1.0, 2, 1).exact == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(combined_pool_loss(1.0, 2, 2).exact ==
        doctest::Approx(oracles::erlang_loss_direct(2.0, 4)).epsilon(1e-12));
  // merging never hurts, and keeps helping as k grows
  double prev = erlang_loss(1.0, 2);
  for (long long k : {2LL, 3LL, 5LL, 9LL, 17LL}) {
    const double merged = combined_pool_loss(1.0, 2, k).exact;
    CHECK(merged < prev);
    prev = merged;
  }
  for (double rho : {0.5, 2.0, 7.0})
    for (long long c : {1LL, 3LL, 9LL})
      for (long long k : {2LL, 4LL, 8LL})
        CHECK(combined_pool_loss(rho, c, k).exact < erlang_loss(rho, c));
}

TEST_CASE("chernoff_loss_estimate") {
  const auto est = chernoff_loss_estimate(0.5, 12.0);
  CHECK(est.simplified == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // independent arithmetic: (e^0.5 / 1.5^1.5)^12
  const double direct = std::pow(std::exp(0.5) / std::pow(1.5, 1.5), 12.0);
  CHECK(est.exact == doctest::Approx(direct).epsilon(1e-12));
  CHECK(est.exact == doctest::Approx(0.2729757).epsilon(1e-6));

  const auto tiny = chernoff_loss_estimate(1e-9, 10.0);
  CHECK(tiny.exact == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(tiny.simplified == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(chernoff_loss_estimate(0.0, 10.0), std::domain_error);
}

TEST_CASE("abandonment_adjusted_loss") {
  CHECK(abandonment_adjusted_loss(0.0, 1.0, 3) ==
        doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(abandonment_adjusted_loss(0.15, 1.0, 3) ==
        doctest::Approx(0.2125).epsilon(1e-12));
  CHECK(abandonment_adjusted_loss(1.0, 0.0, 5) == 1.0);
  CHECK_THROWS_AS(abandonment_adjusted_loss(1.5, 1.0, 3), std::domain_error);
}

TEST_CASE("pool_metrics ties the pieces together") {
  RetainerParams p;
  p.lambda = 1.0;
  p.mu = 1.0;
  p.wage = 1.0;
  p.task_cost = 10.0;
  const PoolMetrics m = pool_metrics(p, 3);
  CHECK(m.busy_dist.back() == m.loss_prob);
  CHECK(m.expected_idle == doctest::Approx(3.0 - m.expected_busy).epsilon(1e-15));
  CHECK(m.expected_wait == doctest::Approx(m.loss_prob / p.mu).epsilon(1e-15));
  CHECK(m.total_cost == doctest::Approx(2.6875).epsilon(1e-12));
}
