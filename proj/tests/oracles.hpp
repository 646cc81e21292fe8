// Independent oracles for test expectations. Everything here evaluates the
// defining formulas directly (factorial sums, exhaustive scans, subset
// enumeration) and never calls the implementation paths under test.
#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "retainer/routing.hpp"

namespace oracles {

// Erlang loss straight from the factorial-sum definition. Valid for c <= 170.
inline double erlang_loss_direct(double rho, long long c) {
  double numer = 1.0, denom = 1.0, term = 1.0;
  for (long long i = 1; i <= c; ++i) {
    term *= rho / static_cast<double>(i);
    denom += term;
  }
  numer = term; // rho^c / c!
  if (c == 0)
    numer = 1.0;
  return numer / denom;
}

inline std::vector<double> busy_distribution_direct(double rho, long long c) {
  std::vector<double> terms(static_cast<size_t>(c) + 1);
  terms[0] = 1.0;
  double sum = 1.0;
  for (long long i = 1; i <= c; ++i) {
    terms[static_cast<size_t>(i)] =
        terms[static_cast<size_t>(i - 1)] * rho / static_cast<double>(i);
    sum += terms[static_cast<size_t>(i)];
  }
  for (double &t : terms)
    t /= sum;
  return terms;
}

// Exhaustive total-cost scan over c in [0, c_max].
inline long long best_pool_exhaustive(double rho, double wage, double task_cost,
                                      long long c_max, double *best_obj = nullptr) {
  long long best_c = 0;
  double best = std::numeric_limits<double>::infinity();
  for (long long c = 0; c <= c_max; ++c) {
    const double loss = erlang_loss_direct(rho, c);
    const double obj =
        task_cost * loss + wage * (static_cast<double>(c) - rho * (1.0 - loss));
    if (obj < best) {
      best = obj;
      best_c = c;
    }
  }
  if (best_obj)
    *best_obj = best;
  return best_c;
}

// Smallest c with pi <= p_max by linear scan from zero.
inline long long min_pool_linear(double rho, double p_max) {
  long long c = 0;
  while (erlang_loss_direct(rho, c) > p_max)
    ++c;
  return c;
}

// Exact optimum of the min-max intensity program by enumerating task subsets:
// by LP duality the optimum equals max over nonempty S of
// lambda(S) / mu(groups able to serve anything in S).
inline double min_max_rho_bruteforce(const retainer::RoutingInstance &inst) {
  const size_t n = inst.tasks.size();
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double lam = 0.0;
    for (size_t j = 0; j < n; ++j)
      if (mask & (1u << j))
        lam += inst.tasks[j].lambda;
    double mu = 0.0;
    for (const auto &g : inst.groups) {
      bool touches = false;
      for (const auto &cap : g.capabilities)
        for (size_t j = 0; j < n; ++j)
          if ((mask & (1u << j)) && inst.tasks[j].id == cap)
            touches = true;
      if (touches)
        mu += g.mu;
    }
    best = std::max(best, lam / mu);
  }
  return best;
}

} // namespace oracles
