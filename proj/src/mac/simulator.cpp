#include "cascade/mac/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

#include "cascade/mac/contention.hpp"
#include "cascade/mac/minstrel.hpp"
#include "cascade/mac/topology.hpp"
#include "cascade/util/random.hpp"

namespace cascade::mac {

namespace {

// Stream purposes for derive_seed(seed, node, purpose).
enum Purpose : std::uint64_t { kArrivals = 1, kBackoff = 2, kLookaround = 3 };

// Rank breaks ties between events of one node at one instant.
enum class Kind : int { TxEnd = 0, BackoffEnd = 1, RetryStart = 2, Arrival = 3 };

struct Event {
  double time;
  int node;
  Kind kind;
  std::uint64_t seq;
  std::uint64_t tag;  // backoff version, frame id or stylized attempt number

  bool operator>(const Event& o) const noexcept
  {
    if (time != o.time)
      return time > o.time;
    if (node != o.node)
      return node > o.node;
    if (kind != o.kind)
      return kind > o.kind;
    return seq > o.seq;
  }
};

enum class Phase { Idle, Defer, Access, Transmitting, Gap };

struct Frame {
  int node = 0;
  int attempt = 1;
  double end = 0.0;
  bool corrupted = false;
  int rate = 0;  // index into the node's ladder
};

struct Node {
  RandomStream arrivals;
  RandomStream backoff;
  RandomStream lookaround;
  double base_rate = 0.0;

  Phase phase = Phase::Idle;
  std::uint64_t waiting = 0;  // packets behind the head of line
  bool has_head = false;
  int attempt = 1;
  int slots = 0;
  double access_start = 0.0;
  std::uint64_t version = 0;
  int sensed_busy = 0;
  std::vector<std::uint64_t> active;  // frames on air
  std::deque<int> pending;            // stylized mode: attempt numbers awaiting the channel

  // Minstrel-lite
  RateState rates;
  RetryChain chain{};
  std::array<int, 4> stages{};
  int attempt_limit = 1;  // attempts of the current packet's chain
  double next_rate_update = 0.0;

  NodeStats stats;
  std::uint64_t rate_attempts_measured = 0;
  double rate_sum_measured = 0.0;

  Node(std::uint64_t seed, int index)
      : arrivals(derive_seed(seed, index, kArrivals)),
        backoff(derive_seed(seed, index, kBackoff)),
        lookaround(derive_seed(seed, index, kLookaround)) {}
};

class Simulator {
 public:
  explicit Simulator(const ScenarioSpec& spec)
      : spec_(spec),
        topo_(build_topology(spec.topology, spec.n_pairs)),
        warmup_(spec.effective_warmup()),
        stylized_(spec.access_mode == AccessMode::Stylized),
        minstrel_(spec.policy == RatePolicy::Minstrel)
  {
    const auto rates = resolve_arrival_rates(spec);
    const int n = spec.n_pairs;
    nodes_.reserve(n);
    for (int i = 0; i < n; ++i) {
      nodes_.emplace_back(spec.seed, i);
      nodes_[i].base_rate = rates[i];
      if (minstrel_) {
        RetryTiming timing;
        timing.slot = spec.slot;
        timing.cw1 = spec.cw1;
        timing.cw_max = spec.cw_max;
        timing.overhead = spec.difs + spec.sifs;
        timing.max_retry = spec.retry_limit;
        nodes_[i].rates = make_rate_state(kMinstrelRates, spec.packet_bits(), spec.ewma, timing);
        nodes_[i].next_rate_update = spec.rate_update_interval;
      }
    }
    listeners_.resize(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> s = topo_.sensed[i];
      if (spec.rts_cts) {
        const auto c = topo_.conflicts(i);
        s.insert(s.end(), c.begin(), c.end());
      }
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      for (int k : s)
        listeners_[k].push_back(i);  // i senses k
    }

    n_windows_ = static_cast<std::size_t>(std::ceil(spec.duration / spec.sample_window - 1e-9));
    n_windows_ = std::max<std::size_t>(n_windows_, 1);
    busy_series_.assign(n, std::vector<double>(n_windows_, 0.0));
    bits_series_.assign(n, std::vector<double>(n_windows_, 0.0));
    rate_sum_series_.assign(n, std::vector<double>(n_windows_, 0.0));
    rate_count_series_.assign(n, std::vector<double>(n_windows_, 0.0));
  }

  TrafficStats run()
  {
    for (int i = 0; i < spec_.n_pairs; ++i)
      schedule_arrival(i, 0.0);

    while (!queue_.empty()) {
      const Event ev = queue_.top();
      if (ev.time > spec_.duration)
        break;
      queue_.pop();
      ++events_;
      now_ = ev.time;
      switch (ev.kind) {
        case Kind::Arrival: on_arrival(ev.node); break;
        case Kind::BackoffEnd:
          if (ev.tag == nodes_[ev.node].version)
            start_transmission(ev.node, nodes_[ev.node].attempt);
          break;
        case Kind::TxEnd: on_tx_end(ev.tag); break;
        case Kind::RetryStart: on_retry_start(ev.node, ev.tag); break;
      }
    }
    return collect();
  }

 private:
  void push(double t, int node, Kind kind, std::uint64_t tag)
  {
    queue_.push(Event{t, node, kind, seq_++, tag});
  }

  double arrival_rate(int i, double t) const
  {
    return i == 0 ? attacker_rate_at(spec_, t) : nodes_[i].base_rate;
  }

  // Next change point of node i's arrival rate after t.
  double rate_change_after(int i, double t) const
  {
    if (i != 0 || !spec_.burst_rate)
      return std::numeric_limits<double>::infinity();
    if (t < spec_.burst_start)
      return spec_.burst_start;
    if (t < spec_.burst_end)
      return spec_.burst_end;
    return std::numeric_limits<double>::infinity();
  }

  // Piecewise-constant Poisson process; memorylessness lets each segment
  // redraw independently.
  void schedule_arrival(int i, double from)
  {
    double t = from;
    while (t <= spec_.duration) {
      const double rate = arrival_rate(i, t);
      const double change = rate_change_after(i, t);
      if (rate > 0.0) {
        const double next = t + nodes_[i].arrivals.exponential(rate);
        if (next < change) {
          push(next, i, Kind::Arrival, 0);
          return;
        }
      }
      if (!std::isfinite(change))
        return;
      t = change;
    }
  }

  void on_arrival(int i)
  {
    Node& node = nodes_[i];
    ++node.stats.generated;
    schedule_arrival(i, now_);
    if (stylized_) {
      ++node.stats.queued;
      enqueue_attempt(i, 1);
      return;
    }
    ++node.waiting;
    if (node.phase == Phase::Idle)
      next_packet(i);
  }

  void next_packet(int i)
  {
    Node& node = nodes_[i];
    --node.waiting;
    node.has_head = true;
    node.attempt = 1;
    if (minstrel_) {
      if (now_ >= node.next_rate_update) {
        node.rates = minstrel_update(std::move(node.rates));
        node.next_rate_update = (std::floor(now_ / spec_.rate_update_interval) + 1.0) * spec_.rate_update_interval;
      }
      const bool look = node.lookaround.bernoulli(spec_.lookaround);
      int random_rate = node.rates.best_throughput;
      if (look) {
        const int n = static_cast<int>(node.rates.rates.size());
        random_rate = static_cast<int>(node.lookaround.uniform_int(n - 2));
        if (random_rate >= node.rates.best_throughput)
          ++random_rate;
      }
      node.chain = select_retry_chain(node.rates, look, random_rate);
      node.stages = chain_attempts(node.rates, node.chain);
      node.attempt_limit = node.stages[0] + node.stages[1] + node.stages[2] + node.stages[3];
    }
    begin_backoff(i);
  }

  void begin_backoff(int i)
  {
    Node& node = nodes_[i];
    const int cw = contention_window(node.attempt, spec_.cw1, spec_.cw_max);
    node.slots = static_cast<int>(node.backoff.uniform_int(static_cast<std::uint64_t>(cw)));
    begin_access(i);
  }

  void begin_access(int i)
  {
    Node& node = nodes_[i];
    ++node.version;
    if (node.sensed_busy > 0) {
      node.phase = Phase::Defer;
      return;
    }
    node.phase = Phase::Access;
    node.access_start = now_;
    push(now_ + spec_.difs + node.slots * spec_.slot, i, Kind::BackoffEnd, node.version);
  }

  // A sensed neighbour went on air: freeze the countdown.
  void freeze(int i)
  {
    Node& node = nodes_[i];
    if (node.phase != Phase::Access)
      return;
    const double counted = now_ - node.access_start - spec_.difs;
    if (counted > 0.0) {
      const int consumed = static_cast<int>(std::floor(counted / spec_.slot + 1e-9));
      node.slots = std::max(0, node.slots - consumed);
    }
    ++node.version;
    node.phase = Phase::Defer;
  }

  int rate_index(const Node& node, int attempt) const
  {
    if (!minstrel_)
      return 0;
    const int stage = stage_of_attempt(node.stages, attempt);
    return node.chain[std::max(stage, 0)];
  }

  double bit_rate_of(const Node& node, int rate) const
  {
    return minstrel_ ? node.rates.rates[rate].bit_rate : spec_.bit_rate;
  }

  std::uint64_t allocate_frame()
  {
    if (!free_frames_.empty()) {
      const auto id = free_frames_.back();
      free_frames_.pop_back();
      return id;
    }
    frames_.emplace_back();
    return frames_.size() - 1;
  }

  // Stylized mode: one frame on air per node, attempts served back to back.
  void enqueue_attempt(int i, int attempt)
  {
    Node& node = nodes_[i];
    node.pending.push_back(attempt);
    if (node.active.empty())
      serve_pending(i);
  }

  void serve_pending(int i)
  {
    Node& node = nodes_[i];
    if (node.pending.empty())
      return;
    const int attempt = node.pending.front();
    node.pending.pop_front();
    start_transmission(i, attempt);
  }

  void start_transmission(int i, int attempt)
  {
    const auto id = allocate_frame();
    Node& node = nodes_[i];
    Frame& f = frames_[id];
    f.node = i;
    f.attempt = attempt;
    f.rate = rate_index(node, attempt);
    const double rate = bit_rate_of(node, f.rate);
    f.end = now_ + spec_.packet_bits() / rate;
    f.corrupted = false;

    for (int m : topo_.interferers[i]) {
      if (!nodes_[m].active.empty())
        f.corrupted = true;
    }
    for (int j : topo_.victims[i]) {
      for (auto other : nodes_[j].active)
        frames_[other].corrupted = true;
    }
    node.active.push_back(id);
    ++node.stats.attempts;
    account_busy(i, now_, f.end, rate);

    if (!stylized_) {
      node.phase = Phase::Transmitting;
      for (int k : listeners_[i]) {
        if (nodes_[k].sensed_busy++ == 0)
          freeze(k);
      }
    }
    push(f.end, i, Kind::TxEnd, id);
  }

  void account_busy(int i, double start, double end, double rate)
  {
    Node& node = nodes_[i];
    const double lo = std::max(start, warmup_);
    const double hi = std::min(end, spec_.duration);
    if (hi > lo)
      node.stats.busy_seconds += hi - lo;
    if (start >= warmup_ && start <= spec_.duration) {
      ++node.rate_attempts_measured;
      node.rate_sum_measured += rate;
    }

    const double w = spec_.sample_window;
    auto k = static_cast<std::size_t>(start / w);
    if (k < n_windows_) {
      rate_sum_series_[i][k] += rate;
      rate_count_series_[i][k] += 1.0;
    }
    double t = start;
    const double stop = std::min(end, spec_.duration);
    while (t < stop && k < n_windows_) {
      const double edge = std::min(stop, (k + 1) * w);
      if (edge > t)
        busy_series_[i][k] += edge - t;
      t = edge;
      ++k;
    }
  }

  void on_tx_end(std::uint64_t id)
  {
    const Frame f = frames_[id];
    const int i = f.node;
    Node& node = nodes_[i];
    node.active.erase(std::find(node.active.begin(), node.active.end(), id));
    const bool success = !f.corrupted;
    if (minstrel_)
      record_attempt(node.rates, f.rate, success);

    bool retry = false;
    if (success) {
      ++node.stats.delivered;
      if (now_ >= warmup_)
        ++node.stats.delivered_measured;
      const auto k = static_cast<std::size_t>(now_ / spec_.sample_window);
      if (k < n_windows_)
        bits_series_[i][k] += spec_.packet_bits();
    } else {
      ++node.stats.collided;
      if (f.attempt >= (minstrel_ ? node.attempt_limit : spec_.retry_limit))
        ++node.stats.dropped;
      else
        retry = true;
    }

    free_frames_.push_back(id);
    if (stylized_) {
      if (retry)
        push(now_ + node.backoff.exponential(1.0 / spec_.retry_delay), i, Kind::RetryStart, f.attempt + 1);
      else
        --node.stats.queued;
      serve_pending(i);
      return;
    }

    for (int k : listeners_[i]) {
      if (--nodes_[k].sensed_busy == 0 && nodes_[k].phase == Phase::Defer)
        begin_access(k);
    }
    if (retry) {
      node.attempt = f.attempt + 1;
    } else {
      node.has_head = false;
    }
    node.phase = Phase::Gap;
    push(now_ + spec_.sifs, i, Kind::RetryStart, 0);
  }

  void on_retry_start(int i, std::uint64_t tag)
  {
    if (stylized_) {
      enqueue_attempt(i, static_cast<int>(tag));
      return;
    }
    Node& node = nodes_[i];
    if (node.has_head) {
      begin_backoff(i);
    } else if (node.waiting > 0) {
      next_packet(i);
    } else {
      node.phase = Phase::Idle;
    }
  }

  TrafficStats collect()
  {
    TrafficStats out;
    const double measured = spec_.duration - warmup_;
    out.measured_duration = measured;
    out.events = events_;
    out.series.window = spec_.sample_window;
    const int n = spec_.n_pairs;
    out.nodes.reserve(n);
    out.series.utilization.resize(n);
    out.series.throughput_bps.resize(n);
    out.series.bit_rate.resize(n);
    for (int i = 0; i < n; ++i) {
      Node& node = nodes_[i];
      NodeStats s = node.stats;
      if (!stylized_)
        s.queued = node.waiting + (node.has_head ? 1 : 0);
      s.utilization = std::min(1.0, s.busy_seconds / measured);
      s.throughput_bps = s.delivered_measured * spec_.packet_bits() / measured;
      s.mean_bit_rate = node.rate_attempts_measured > 0 ? node.rate_sum_measured / node.rate_attempts_measured : 0.0;
      out.nodes.push_back(s);

      auto& u = out.series.utilization[i];
      auto& th = out.series.throughput_bps[i];
      auto& br = out.series.bit_rate[i];
      u.resize(n_windows_);
      th.resize(n_windows_);
      br.resize(n_windows_);
      for (std::size_t k = 0; k < n_windows_; ++k) {
        const double width = std::min(spec_.sample_window, spec_.duration - k * spec_.sample_window);
        u[k] = std::min(1.0, busy_series_[i][k] / width);
        th[k] = bits_series_[i][k] / width;
        br[k] = rate_count_series_[i][k] > 0 ? rate_sum_series_[i][k] / rate_count_series_[i][k] : 0.0;
      }
    }
    return out;
  }

  const ScenarioSpec& spec_;
  Topology topo_;
  double warmup_;
  bool stylized_;
  bool minstrel_;
  std::vector<Node> nodes_;
  std::vector<std::vector<int>> listeners_;  // listeners_[k]: nodes that sense k
  std::vector<Frame> frames_;
  std::vector<std::uint64_t> free_frames_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t events_ = 0;
  double now_ = 0.0;

  std::size_t n_windows_ = 1;
  std::vector<std::vector<double>> busy_series_;
  std::vector<std::vector<double>> bits_series_;
  std::vector<std::vector<double>> rate_sum_series_;
  std::vector<std::vector<double>> rate_count_series_;
};

}  // namespace

TrafficStats run_simulation(const ScenarioSpec& spec)
{
  spec.validate();
  Simulator sim(spec);
  return sim.run();
}

}  // namespace cascade::mac
