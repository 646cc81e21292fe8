#include "retainer/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <queue>

#include "retainer/optimizer.hpp"
#include "retainer/rng.hpp"

namespace retainer {

namespace {

// Per-purpose RNG substreams; replication r uses stream r*kStreamStride + tag.
enum Stream : uint64_t {
  kArrivalStream = 0,
  kRecruitStream = 1,
  kDivertStream = 2,
  kAbandonStream = 3,
  kLatencyStream = 4,
  kRespondStream = 5,
  kPrecruitStream = 6,
};
constexpr uint64_t kStreamStride = 16;

enum class Outcome : uint8_t { Served, Diverted, Missed, Unmatched, Pending };

struct TaskRecord {
  double t = 0.0;    // arrival time
  double wait = 0.0; // valid unless Pending
  Outcome outcome = Outcome::Pending;
  int alerts = 0;
  bool unmatched = false; // precruitment: arrived with no worker waiting
};

struct Event {
  double t;
  int type;
  long long a; // payload (task index, tier, worker id)
  long long b;
  uint64_t seq;
};
struct EventLater {
  bool operator()(const Event &x, const Event &y) const {
    if (x.t != y.t)
      return x.t > y.t;
    return x.seq > y.seq;
  }
};
using EventQueue = std::priority_queue<Event, std::vector<Event>, EventLater>;

// Piecewise-constant count over time, for time-averaged statistics.
struct StepTrace {
  std::vector<std::pair<double, double>> steps; // (time, new value)

  void set(double t, double v) {
    if (!steps.empty() && steps.back().first == t)
      steps.back().second = v;
    else
      steps.emplace_back(t, v);
  }
  double value_before(size_t idx) const {
    return idx == 0 ? 0.0 : steps[idx - 1].second;
  }
  // Integral over [a, b].
  double integrate(double a, double b) const {
    if (steps.empty() || b <= a)
      return 0.0;
    auto it = std::upper_bound(
        steps.begin(), steps.end(), a,
        [](double t, const std::pair<double, double> &s) { return t < s.first; });
    size_t i = it == steps.begin() ? 0 : static_cast<size_t>(it - steps.begin()) - 1;
    double acc = 0.0;
    for (; i < steps.size() && steps[i].first < b; ++i) {
      const double seg_start = std::max(a, steps[i].first);
      const double seg_end =
          std::min(b, i + 1 < steps.size() ? steps[i + 1].first : b);
      if (seg_end > seg_start)
        acc += steps[i].second * (seg_end - seg_start);
    }
    return acc;
  }
};

Stat batch_stat(const std::vector<double> &batch_means, double point) {
  Stat s;
  s.mean = point;
  const size_t n = batch_means.size();
  if (n >= 2) {
    double m = std::accumulate(batch_means.begin(), batch_means.end(), 0.0) /
               static_cast<double>(n);
    double var = 0.0;
    for (double b : batch_means)
      var += (b - m) * (b - m);
    var /= static_cast<double>(n - 1);
    s.se = std::sqrt(var / static_cast<double>(n));
  }
  return s;
}

constexpr int kBatches = 20;

// Batch-means statistics over the post-warmup window: event data are
// autocorrelated, so SEs come from 20 contiguous batches.
// Returns the warmup cut time so mode-specific reporting (e.g. per-tier
// idle averages) can use the identical measurement window.
double fill_report_stats(const SimConfig &cfg, const std::vector<TaskRecord> &tasks,
                         const StepTrace &idle, double t_end, SimReport &rep) {
  size_t first_post = 0;
  double t_cut = 0.0;
  if (cfg.horizon.kind == Horizon::Kind::Tasks) {
    first_post = static_cast<size_t>(cfg.warmup * static_cast<double>(tasks.size()));
    t_cut = first_post > 0 && first_post <= tasks.size() && first_post > 0
                ? tasks[first_post - 1].t
                : 0.0;
  } else {
    t_cut = cfg.warmup * cfg.horizon.value;
    while (first_post < tasks.size() && tasks[first_post].t < t_cut)
      ++first_post;
  }
  const size_t post = tasks.size() - first_post;
  const double window = t_end - t_cut;
  // All reported counts cover the post-warmup window only, so the
  // conservation identity arrived == served + diverted + missed holds
  // directly on the report.
  rep.tasks_arrived = static_cast<long long>(post);

  for (size_t i = first_post; i < tasks.size(); ++i) {
    switch (tasks[i].outcome) {
    case Outcome::Served:
      ++rep.served;
      break;
    case Outcome::Diverted:
      ++rep.diverted;
      break;
    case Outcome::Missed:
      ++rep.missed;
      break;
    case Outcome::Unmatched: // precruitment: served late
      ++rep.served;
      break;
    case Outcome::Pending:
      break;
    }
  }

  const int nb = post > 0 ? std::min<int>(kBatches, static_cast<int>(post)) : 1;
  std::vector<double> b_arrived(static_cast<size_t>(nb), 0.0);
  std::vector<double> b_diverted(static_cast<size_t>(nb), 0.0);
  std::vector<double> b_unmatched(static_cast<size_t>(nb), 0.0);
  std::vector<double> b_wait(static_cast<size_t>(nb), 0.0);
  std::vector<double> b_waited(static_cast<size_t>(nb), 0.0);
  std::vector<double> b_alerts(static_cast<size_t>(nb), 0.0);
  std::vector<double> b_served(static_cast<size_t>(nb), 0.0);

  double total_wait = 0.0, total_alerts = 0.0;
  long long waited = 0, unmatched = 0;
  const double width = window > 0 ? window / nb : 1.0;
  for (size_t i = first_post; i < tasks.size(); ++i) {
    const TaskRecord &tr = tasks[i];
    int b = window > 0 ? static_cast<int>((tr.t - t_cut) / width) : 0;
    b = std::clamp(b, 0, nb - 1);
    const size_t bi = static_cast<size_t>(b);
    b_arrived[bi] += 1.0;
    if (tr.outcome == Outcome::Diverted)
      b_diverted[bi] += 1.0;
    if (tr.unmatched) {
      b_unmatched[bi] += 1.0;
      ++unmatched;
    }
    if (tr.outcome != Outcome::Pending) {
      total_wait += tr.wait;
      b_wait[bi] += tr.wait;
      b_waited[bi] += 1.0;
      ++waited;
    }
    if (tr.outcome == Outcome::Served || tr.outcome == Outcome::Unmatched) {
      total_alerts += tr.alerts;
      b_alerts[bi] += tr.alerts;
      b_served[bi] += 1.0;
    }
  }

  auto ratio_batches = [&](const std::vector<double> &num,
                           const std::vector<double> &den) {
    std::vector<double> out;
    for (size_t i = 0; i < num.size(); ++i)
      if (den[i] > 0)
        out.push_back(num[i] / den[i]);
    return out;
  };

  const double posts = static_cast<double>(post);
  rep.empty_pool_fraction = batch_stat(
      ratio_batches(b_diverted, b_arrived),
      post > 0 ? static_cast<double>(rep.diverted) / posts : 0.0);
  rep.unmatched_fraction =
      batch_stat(ratio_batches(b_unmatched, b_arrived),
                 post > 0 ? static_cast<double>(unmatched) / posts : 0.0);
  rep.mean_wait = batch_stat(ratio_batches(b_wait, b_waited),
                             waited > 0 ? total_wait / waited : 0.0);
  const double served_n =
      std::accumulate(b_served.begin(), b_served.end(), 0.0);
  rep.alerts_per_task = batch_stat(ratio_batches(b_alerts, b_served),
                                   served_n > 0 ? total_alerts / served_n : 0.0);

  if (window > 0) {
    std::vector<double> b_idle;
    for (int b = 0; b < nb; ++b) {
      const double a = t_cut + b * width;
      const double z = b + 1 == nb ? t_end : a + width;
      b_idle.push_back(idle.integrate(a, z) / (z - a));
    }
    rep.mean_idle_workers =
        batch_stat(b_idle, idle.integrate(t_cut, t_end) / window);
  } else {
    rep.mean_idle_workers = Stat{idle.steps.empty() ? 0.0 : idle.steps.back().second, 0.0};
  }
  rep.cost_rate = cfg.params.wage * rep.mean_idle_workers.mean;
  rep.sim_end_time = t_end;
  return t_cut;
}

double draw_latency(const LatencySpec &spec, double fallback_mean, Rng &rng) {
  const double mean = spec.explicitly_set ? spec.effective_mean() : fallback_mean;
  switch (spec.kind) {
  case LatencySpec::Kind::PointMass:
    return mean;
  case LatencySpec::Kind::Exponential:
    return rng.exponential(1.0 / mean);
  case LatencySpec::Kind::Empirical: {
    const size_t i = static_cast<size_t>(rng.uniform() *
                                         static_cast<double>(spec.samples.size()));
    return spec.samples[std::min(i, spec.samples.size() - 1)];
  }
  }
  return mean;
}

struct Driver {
  const SimConfig &cfg;
  uint64_t rep_index;
  EventQueue queue;
  uint64_t seq = 0;

  explicit Driver(const SimConfig &c, uint64_t rep) : cfg(c), rep_index(rep) {}

  Rng stream(uint64_t tag) const {
    return Rng(cfg.seed, rep_index * kStreamStride + tag);
  }
  void schedule(double t, int type, long long a = 0, long long b = 0) {
    queue.push(Event{t, type, a, b, seq++});
  }
  bool task_budget_open(size_t arrived) const {
    return cfg.horizon.kind == Horizon::Kind::Seconds ||
           static_cast<double>(arrived) < cfg.horizon.value;
  }
  bool past_horizon(double t) const {
    return cfg.horizon.kind == Horizon::Kind::Seconds && t > cfg.horizon.value;
  }
};

enum BaselineEvents { kEvArrival = 0, kEvRecruit = 1, kEvRealert = 2 };

// Baseline and abandonment share one loop: a = 0 with an always-on-time
// response reduces the alert chain to the plain M/M/c/c take-and-refill.
SimReport run_pool_sim(const SimConfig &cfg, uint64_t rep_index) {
  const RetainerParams &p = cfg.params;
  const bool abandonment = cfg.mode == SimMode::Abandonment;
  Driver d(cfg, rep_index);
  Rng arr = d.stream(kArrivalStream);
  Rng rec = d.stream(kRecruitStream);
  Rng div = d.stream(kDivertStream);
  Rng aband = d.stream(kAbandonStream);
  Rng lat = d.stream(kLatencyStream);

  std::vector<TaskRecord> tasks;
  if (cfg.horizon.kind == Horizon::Kind::Tasks)
    tasks.reserve(static_cast<size_t>(cfg.horizon.value));
  StepTrace idle;
  long long free_workers = p.c;
  idle.set(0.0, static_cast<double>(free_workers));
  const double timeout = p.alpha * p.r_mean;

  auto recruit_sample = [&]() {
    return cfg.deterministic_recruitment ? 1.0 / p.mu : rec.exponential(p.mu);
  };

  // One alert attempt for task `ti` at time t. Returns events as needed.
  auto attempt = [&](long long ti, int attempt_no, double t) {
    TaskRecord &tr = tasks[static_cast<size_t>(ti)];
    if (free_workers == 0) {
      tr.outcome = Outcome::Diverted;
      tr.wait = (t - tr.t) + div.exponential(p.mu);
      return;
    }
    idle.set(t, static_cast<double>(--free_workers));
    d.schedule(t + recruit_sample(), kEvRecruit);
    tr.alerts = attempt_no;
    if (!abandonment) {
      tr.outcome = Outcome::Served;
      tr.wait = 0.0;
      return;
    }
    const bool abandons = aband.bernoulli(p.abandon);
    if (!abandons) {
      const double latency = draw_latency(cfg.response_latency, p.r_mean, lat);
      if (latency <= timeout) {
        tr.outcome = Outcome::Served;
        tr.wait = (t - tr.t) + latency;
        return;
      }
    }
    if (attempt_no < cfg.max_realerts)
      d.schedule(t + timeout, kEvRealert, ti, attempt_no + 1);
    else {
      tr.outcome = Outcome::Missed;
      tr.wait = t + timeout - tr.t;
    }
  };

  double t_end = cfg.horizon.kind == Horizon::Kind::Seconds ? cfg.horizon.value : 0.0;
  if (p.lambda > 0.0)
    d.schedule(arr.exponential(p.lambda), kEvArrival);
  while (!d.queue.empty()) {
    const Event ev = d.queue.top();
    d.queue.pop();
    if (d.past_horizon(ev.t))
      break;
    switch (ev.type) {
    case kEvArrival: {
      tasks.push_back(TaskRecord{ev.t, 0.0, Outcome::Pending, 0});
      attempt(static_cast<long long>(tasks.size()) - 1, 1, ev.t);
      if (d.task_budget_open(tasks.size()))
        d.schedule(ev.t + arr.exponential(p.lambda), kEvArrival);
      else if (cfg.horizon.kind == Horizon::Kind::Tasks)
        t_end = ev.t; // keep draining re-alert chains below
      break;
    }
    case kEvRecruit:
      if (free_workers < p.c)
        idle.set(ev.t, static_cast<double>(++free_workers));
      break;
    case kEvRealert:
      attempt(ev.a, static_cast<int>(ev.b), ev.t);
      break;
    }
    // Task-count horizon: no new arrivals once the budget is met; the queue
    // drains the remaining recruit/re-alert events so every chain resolves.
  }

  SimReport rep;
  fill_report_stats(cfg, tasks, idle, t_end, rep);
  return rep;
}

enum TieredEvents { kEvTArrival = 0, kEvTRecruit = 1, kEvTAttempt = 2 };

SimReport run_tiered_sim(const SimConfig &cfg, uint64_t rep_index) {
  const RetainerParams &p = cfg.params;
  Driver d(cfg, rep_index);
  Rng arr = d.stream(kArrivalStream);
  Rng rec = d.stream(kRecruitStream);
  Rng div = d.stream(kDivertStream);
  Rng resp = d.stream(kRespondStream);
  Rng lat = d.stream(kLatencyStream);

  const int ntiers = static_cast<int>(cfg.tiers.size());
  std::vector<long long> free_workers(cfg.tiers.begin(), cfg.tiers.end());
  std::vector<StepTrace> tier_idle(static_cast<size_t>(ntiers));
  std::vector<long long> tier_arrivals(static_cast<size_t>(ntiers), 0);
  std::vector<long long> tier_served(static_cast<size_t>(ntiers), 0);
  StepTrace idle;
  auto total_free = [&]() {
    return static_cast<double>(
        std::accumulate(free_workers.begin(), free_workers.end(), 0LL));
  };
  for (int i = 0; i < ntiers; ++i)
    tier_idle[static_cast<size_t>(i)].set(0.0, static_cast<double>(free_workers[static_cast<size_t>(i)]));
  idle.set(0.0, total_free());

  std::vector<TaskRecord> tasks;
  const double timeout = p.alpha * p.r_mean;

  auto attempt = [&](long long ti, int tier, double t) {
    TaskRecord &tr = tasks[static_cast<size_t>(ti)];
    ++tier_arrivals[static_cast<size_t>(tier)];
    if (free_workers[static_cast<size_t>(tier)] == 0) {
      tr.outcome = Outcome::Diverted;
      tr.wait = (t - tr.t) + div.exponential(p.mu);
      return;
    }
    --free_workers[static_cast<size_t>(tier)];
    tier_idle[static_cast<size_t>(tier)].set(
        t, static_cast<double>(free_workers[static_cast<size_t>(tier)]));
    idle.set(t, total_free());
    d.schedule(t + rec.exponential(p.mu), kEvTRecruit, tier);
    if (resp.bernoulli(cfg.respond_fraction)) {
      tr.outcome = Outcome::Served;
      tr.wait = (t - tr.t) + draw_latency(cfg.response_latency, p.r_mean, lat);
      ++tier_served[static_cast<size_t>(tier)];
    } else if (tier + 1 < ntiers) {
      d.schedule(t + timeout, kEvTAttempt, ti, tier + 1);
    } else {
      tr.outcome = Outcome::Missed;
      tr.wait = t + timeout - tr.t;
    }
  };

  double t_end = cfg.horizon.kind == Horizon::Kind::Seconds ? cfg.horizon.value : 0.0;
  if (p.lambda > 0.0)
    d.schedule(arr.exponential(p.lambda), kEvTArrival);
  while (!d.queue.empty()) {
    const Event ev = d.queue.top();
    d.queue.pop();
    if (d.past_horizon(ev.t))
      break;
    switch (ev.type) {
    case kEvTArrival:
      tasks.push_back(TaskRecord{ev.t, 0.0, Outcome::Pending, 0});
      attempt(static_cast<long long>(tasks.size()) - 1, 0, ev.t);
      if (d.task_budget_open(tasks.size()))
        d.schedule(ev.t + arr.exponential(p.lambda), kEvTArrival);
      else if (cfg.horizon.kind == Horizon::Kind::Tasks)
        t_end = ev.t;
      break;
    case kEvTRecruit: {
      const size_t tier = static_cast<size_t>(ev.a);
      if (free_workers[tier] < cfg.tiers[tier]) {
        ++free_workers[tier];
        tier_idle[tier].set(ev.t, static_cast<double>(free_workers[tier]));
        idle.set(ev.t, total_free());
      }
      break;
    }
    case kEvTAttempt:
      attempt(ev.a, static_cast<int>(ev.b), ev.t);
      break;
    }
  }

  SimReport rep;
  const double t_cut = fill_report_stats(cfg, tasks, idle, t_end, rep);
  for (int i = 0; i < ntiers; ++i) {
    TierReport tr;
    tr.arrivals = tier_arrivals[static_cast<size_t>(i)];
    tr.served = tier_served[static_cast<size_t>(i)];
    if (t_end > t_cut)
      tr.mean_idle =
          tier_idle[static_cast<size_t>(i)].integrate(t_cut, t_end) / (t_end - t_cut);
    tr.cost_rate = p.wage * tr.mean_idle;
    rep.per_tier.push_back(tr);
  }
  return rep;
}

enum PrecruitEvents {
  kEvPArrivalTask = 0,
  kEvPArrivalWorker = 1,
  kEvPReady = 2,
  kEvPDismiss = 3,
};

SimReport run_precruit_sim(const SimConfig &cfg, uint64_t rep_index) {
  const RetainerParams &p = cfg.params;
  Driver d(cfg, rep_index);
  Rng arr = d.stream(kArrivalStream);
  Rng pre = d.stream(kPrecruitStream);
  Rng lat = d.stream(kLatencyStream);

  const double precruit = precruit_rate(p.lambda, cfg.beta);

  enum class WState : uint8_t { Pending, Available, Matched, Dismissed };
  std::vector<WState> workers;
  std::deque<long long> available; // worker ids, oldest ready first
  std::deque<long long> waiting;   // task indices not yet matched
  std::vector<TaskRecord> tasks;
  StepTrace idle;
  idle.set(0.0, 0.0);
  long long n_available = 0, n_precruited = 0, n_dismissed = 0;

  auto serve_waiting = [&](double t) {
    // Worker just became ready and a task is queued: match immediately.
    const long long ti = waiting.front();
    waiting.pop_front();
    TaskRecord &tr = tasks[static_cast<size_t>(ti)];
    tr.wait = t - tr.t; // outcome stays Unmatched: arrived to an empty pool
    if (tr.outcome == Outcome::Pending)
      tr.outcome = Outcome::Unmatched;
  };

  double t_end = cfg.horizon.kind == Horizon::Kind::Seconds ? cfg.horizon.value : 0.0;
  if (p.lambda > 0.0)
    d.schedule(arr.exponential(p.lambda), kEvPArrivalTask);
  if (precruit > 0.0)
    d.schedule(pre.exponential(precruit), kEvPArrivalWorker);

  while (!d.queue.empty()) {
    const Event ev = d.queue.top();
    d.queue.pop();
    if (d.past_horizon(ev.t))
      break;
    switch (ev.type) {
    case kEvPArrivalTask: {
      tasks.push_back(TaskRecord{ev.t, 0.0, Outcome::Pending, 0});
      TaskRecord &tr = tasks.back();
      while (!available.empty() &&
             workers[static_cast<size_t>(available.front())] != WState::Available)
        available.pop_front();
      if (!available.empty()) {
        workers[static_cast<size_t>(available.front())] = WState::Matched;
        available.pop_front();
        idle.set(ev.t, static_cast<double>(--n_available));
        tr.outcome = Outcome::Served;
        tr.wait = 0.0;
      } else {
        tr.unmatched = true;
        waiting.push_back(static_cast<long long>(tasks.size()) - 1);
      }
      if (d.task_budget_open(tasks.size()))
        d.schedule(ev.t + arr.exponential(p.lambda), kEvPArrivalTask);
      else if (cfg.horizon.kind == Horizon::Kind::Tasks)
        t_end = ev.t;
      break;
    }
    case kEvPArrivalWorker: {
      ++n_precruited;
      workers.push_back(WState::Pending);
      const long long wid = static_cast<long long>(workers.size()) - 1;
      d.schedule(ev.t + draw_latency(cfg.response_latency, p.r_mean, lat),
                 kEvPReady, wid);
      if (d.task_budget_open(tasks.size()))
        d.schedule(ev.t + pre.exponential(precruit), kEvPArrivalWorker);
      break;
    }
    case kEvPReady: {
      const size_t wid = static_cast<size_t>(ev.a);
      if (!waiting.empty()) {
        workers[wid] = WState::Matched;
        serve_waiting(ev.t);
      } else {
        workers[wid] = WState::Available;
        available.push_back(ev.a);
        idle.set(ev.t, static_cast<double>(++n_available));
        d.schedule(ev.t + cfg.patience, kEvPDismiss, ev.a);
      }
      break;
    }
    case kEvPDismiss: {
      const size_t wid = static_cast<size_t>(ev.a);
      if (workers[wid] == WState::Available) {
        workers[wid] = WState::Dismissed;
        ++n_dismissed;
        idle.set(ev.t, static_cast<double>(--n_available));
      }
      break;
    }
    }
  }

  SimReport rep;
  fill_report_stats(cfg, tasks, idle, t_end, rep);
  rep.precruited = n_precruited;
  rep.dismissed = n_dismissed;
  rep.wasted_worker_fraction =
      Stat{n_precruited > 0 ? static_cast<double>(n_dismissed) /
                                  static_cast<double>(n_precruited)
                            : 0.0,
           0.0};
  return rep;
}

} // namespace

double LatencySpec::effective_mean() const {
  if (kind == Kind::Empirical) {
    double s = 0.0;
    for (double v : samples)
      s += v;
    return samples.empty() ? 0.0 : s / static_cast<double>(samples.size());
  }
  return mean;
}

void LatencySpec::validate() const {
  if (kind == Kind::Empirical) {
    if (samples.empty())
      throw std::invalid_argument("empirical latency needs samples");
    for (double v : samples)
      if (!(v >= 0.0))
        throw std::invalid_argument("latency samples must be >= 0");
  } else if (explicitly_set && !(mean > 0.0)) {
    throw std::invalid_argument("latency mean must be > 0");
  }
}

void SimConfig::validate() const {
  params.validate();
  if (!(horizon.value > 0.0))
    throw std::invalid_argument("horizon must be > 0");
  if (horizon.kind == Horizon::Kind::Tasks && params.lambda == 0.0)
    throw std::invalid_argument("task-count horizon needs lambda > 0");
  if (!(warmup >= 0.0 && warmup < 1.0))
    throw std::invalid_argument("warmup fraction must lie in [0, 1)");
  if ((mode == SimMode::Tiered) != !tiers.empty())
    throw std::invalid_argument("tiers must be given exactly in tiered mode");
  for (long long t : tiers)
    if (t < 1)
      throw std::invalid_argument("tier sizes must be >= 1");
  if (mode == SimMode::Abandonment) {
    if (params.abandon >= 1.0)
      throw std::invalid_argument("abandonment fraction 1 never terminates");
    if (max_realerts < 1)
      throw std::invalid_argument("max_realerts must be >= 1");
  }
  if (mode == SimMode::Precruitment) {
    if (!(patience > 0.0))
      throw std::invalid_argument("patience must be > 0");
    if (!(beta >= 0.0))
      throw std::invalid_argument("beta must be >= 0");
  }
  if (mode == SimMode::Tiered &&
      !(respond_fraction > 0.0 && respond_fraction <= 1.0))
    throw std::invalid_argument("respond_fraction must lie in (0, 1]");
  response_latency.validate();
  if (response_latency.explicitly_set) {
    const double m = response_latency.effective_mean();
    if (std::abs(m - params.r_mean) > 1e-9 * std::max(1.0, params.r_mean))
      throw std::invalid_argument(
          "response latency mean disagrees with r_mean");
  }
}

SimReport simulate(const SimConfig &config) {
  config.validate();
  switch (config.mode) {
  case SimMode::Baseline:
  case SimMode::Abandonment:
    return run_pool_sim(config, 0);
  case SimMode::Tiered:
    return run_tiered_sim(config, 0);
  case SimMode::Precruitment:
    return run_precruit_sim(config, 0);
  }
  throw std::logic_error("unknown mode");
}

namespace {

SimReport run_replication(const SimConfig &cfg, uint64_t rep_index) {
  switch (cfg.mode) {
  case SimMode::Baseline:
  case SimMode::Abandonment:
    return run_pool_sim(cfg, rep_index);
  case SimMode::Tiered:
    return run_tiered_sim(cfg, rep_index);
  case SimMode::Precruitment:
    return run_precruit_sim(cfg, rep_index);
  }
  throw std::logic_error("unknown mode");
}

Stat across(const std::vector<SimReport> &reps, double (*pick)(const SimReport &)) {
  std::vector<double> vals;
  vals.reserve(reps.size());
  for (const auto &r : reps)
    vals.push_back(pick(r));
  const double m = std::accumulate(vals.begin(), vals.end(), 0.0) /
                   static_cast<double>(vals.size());
  double var = 0.0;
  for (double v : vals)
    var += (v - m) * (v - m);
  var /= static_cast<double>(vals.size() - 1);
  return Stat{m, std::sqrt(var / static_cast<double>(vals.size()))};
}

} // namespace

SimReport replicate(const SimConfig &config, int n) {
  if (n < 2)
    throw std::invalid_argument("replicate needs n >= 2");
  config.validate();
  std::vector<SimReport> reps;
  reps.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    reps.push_back(run_replication(config, static_cast<uint64_t>(i)));

  SimReport agg;
  agg.replications = n;
  for (const auto &r : reps) {
    agg.tasks_arrived += r.tasks_arrived;
    agg.served += r.served;
    agg.diverted += r.diverted;
    agg.missed += r.missed;
    agg.precruited += r.precruited;
    agg.dismissed += r.dismissed;
    agg.sim_end_time = std::max(agg.sim_end_time, r.sim_end_time);
  }
  agg.empty_pool_fraction =
      across(reps, [](const SimReport &r) { return r.empty_pool_fraction.mean; });
  agg.mean_wait = across(reps, [](const SimReport &r) { return r.mean_wait.mean; });
  agg.mean_idle_workers =
      across(reps, [](const SimReport &r) { return r.mean_idle_workers.mean; });
  agg.alerts_per_task =
      across(reps, [](const SimReport &r) { return r.alerts_per_task.mean; });
  agg.unmatched_fraction =
      across(reps, [](const SimReport &r) { return r.unmatched_fraction.mean; });
  agg.wasted_worker_fraction = across(
      reps, [](const SimReport &r) { return r.wasted_worker_fraction.mean; });
  agg.cost_rate = config.params.wage * agg.mean_idle_workers.mean;
  if (!reps.front().per_tier.empty()) {
    agg.per_tier.resize(reps.front().per_tier.size());
    for (const auto &r : reps)
      for (size_t i = 0; i < r.per_tier.size(); ++i) {
        agg.per_tier[i].arrivals += r.per_tier[i].arrivals;
        agg.per_tier[i].served += r.per_tier[i].served;
        agg.per_tier[i].mean_idle +=
            r.per_tier[i].mean_idle / static_cast<double>(n);
      }
    for (auto &t : agg.per_tier)
      t.cost_rate = config.params.wage * t.mean_idle;
  }
  return agg;
}

SimReport replicate(const std::vector<SimConfig> &configs) {
  if (configs.size() < 2)
    throw std::invalid_argument("replicate needs n >= 2");
  for (const auto &c : configs)
    if (!(c == configs.front()))
      throw std::invalid_argument("replication configs must be identical");
  return replicate(configs.front(), static_cast<int>(configs.size()));
}

} // namespace retainer
