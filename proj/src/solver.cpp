#include "nmbr9/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

namespace nmbr9 {
namespace {

using Clock = std::chrono::steady_clock;

// Remaining cards as (value, area) candidates. For a fixed deck this is the
// exact suffix; for a free deck it is the whole unplaced pool, of which only
// t = cards-to-come will be drawn.
std::vector<std::pair<int, int>> remaining_pool(const BoardState& state) {
  const Instance& inst = state.instance();
  std::vector<std::pair<int, int>> pool;
  if (state.deck_fixed()) {
    const Deck& deck = state.deck();
    for (size_t i = state.placements().size(); i < deck.size(); ++i) {
      pool.emplace_back(deck[i], inst.shape_area(deck[i]));
    }
  } else {
    for (int d = 0; d <= inst.max_digit(); ++d) {
      int left = inst.copies() - state.placed_copies(d);
      for (int i = 0; i < left; ++i) pool.emplace_back(d, inst.shape_area(d));
    }
  }
  return pool;
}

struct Limits {
  std::optional<std::uint64_t> node_limit;
  std::optional<Clock::time_point> deadline;
};

struct Shared {
  std::atomic<int> incumbent{-1};
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> dead_ends{0};
  std::atomic<bool> stopped{false};

  std::mutex mu;
  std::optional<int> best_score;
  Deck best_deck;
  std::vector<Placement> best_play;

  void record(const BoardState& state) {
    std::lock_guard<std::mutex> lock(mu);
    int sc = state.score();
    if (best_score && sc <= *best_score) return;
    best_score = sc;
    best_deck = state.deck();
    best_play.assign(state.placements().begin(), state.placements().end());
    int cur = incumbent.load();
    while (cur < sc && !incumbent.compare_exchange_weak(cur, sc)) {
    }
  }
};

class Searcher {
 public:
  Searcher(const Instance& inst, const SearchConfig& cfg, Limits limits)
      : inst_(inst), cfg_(cfg), limits_(limits) {
    for (const Cell& cell : spiral_order(inst.grid_side())) spiral_.push_back(cell);
  }

  Shared shared;

  // Enumerates branch moves in search order: levels (descending by default),
  // anchors along the spiral within a level, orientations innermost. Returns
  // false when the visitor stopped the scan.
  template <typename Fn>
  bool for_each_move(const BoardState& state, int digit, Fn&& fn) const {
    auto orients = state.instance().orientations(digit);
    int top = std::min(state.top_level() + 1, inst_.max_levels());
    if (cfg_.first_card_level1 && state.next_card() == 1) top = 1;
    int from = cfg_.levels_descending ? top : 1;
    int step = cfg_.levels_descending ? -1 : 1;
    for (int level = from; level >= 1 && level <= top; level += step) {
      for (const Cell& anchor : spiral_) {
        for (int oi = 0; oi < static_cast<int>(orients.size()); ++oi) {
          Placement p{state.next_card(), digit, state.placed_copies(digit) + 1,
                      oi, anchor.row, anchor.col, level};
          if (!placement_legal(state, p)) continue;
          if (!fn(p)) return false;
        }
      }
    }
    return true;
  }

  void value_dfs(BoardState& state) {
    if (shared.stopped.load(std::memory_order_relaxed)) return;
    if (state.done()) {
      shared.record(state);
      return;
    }
    bool any = false;
    auto expand = [&](const Placement& p) {
      any = true;
      std::uint64_t n = shared.nodes.fetch_add(1) + 1;
      if (limits_.node_limit && n > *limits_.node_limit) {
        shared.nodes.fetch_sub(1);  // the refused push is not a visited node
        shared.stopped.store(true);
        return false;
      }
      if (limits_.deadline && (n & 1023) == 0 && Clock::now() >= *limits_.deadline) {
        shared.stopped.store(true);
        return false;
      }
      state.push(p);
      bool keep = true;
      if (cfg_.prune_upper_bound &&
          upper_bound(state, cfg_.prune_area_monotonic) <= shared.incumbent.load()) {
        // cannot strictly beat the incumbent: prune
      } else {
        value_dfs(state);
        keep = !shared.stopped.load(std::memory_order_relaxed);
      }
      state.pop();
      return keep;
    };
    if (state.deck_fixed()) {
      for_each_move(state, state.next_digit(), expand);
    } else {
      for (int d = 0; d <= inst_.max_digit(); ++d) {
        if (state.placed_copies(d) == inst_.copies()) continue;
        if (!for_each_move(state, d, expand)) break;
      }
    }
    if (!any) shared.dead_ends.fetch_add(1);
  }

  // Lexicographically first play achieving `target`, exploring placements in
  // canonical order. Returns true once captured into `witness`.
  bool witness_dfs(BoardState& state, int target, std::vector<Placement>& witness) {
    if (state.done()) {
      if (state.score() != target) return false;
      witness.assign(state.placements().begin(), state.placements().end());
      return true;
    }
    for (const Placement& p : legal_placements(state, state.next_digit())) {
      shared.nodes.fetch_add(1);
      state.push(p);
      bool found = upper_bound(state, true) >= target && witness_dfs(state, target, witness);
      state.pop();
      if (found) return true;
    }
    return false;
  }

 private:
  const Instance& inst_;
  SearchConfig cfg_;
  Limits limits_;
  std::vector<Cell> spiral_;
};

}  // namespace

std::vector<Cell> spiral_order(int s) {
  if (s < 1) throw std::invalid_argument("grid side must be positive");
  std::vector<Cell> out;
  out.reserve(static_cast<size_t>(s) * s);
  int row = s / 2;
  int col = s / 2;
  auto emit = [&](int r, int c) {
    if (r >= 0 && r < s && c >= 0 && c < s) out.push_back({r, c});
  };
  emit(row, col);
  // Clockwise, run lengths 1,1,2,2,3,3,...: right, down, left, up.
  static constexpr int kir[4] = {0, 1, 0, -1};
  static constexpr int kic[4] = {1, 0, -1, 0};
  int dir = 0;
  int run = 1;
  while (out.size() < static_cast<size_t>(s) * s) {
    for (int leg = 0; leg < 2; ++leg, ++dir) {
      for (int i = 0; i < run; ++i) {
        row += kir[dir % 4];
        col += kic[dir % 4];
        emit(row, col);
      }
    }
    ++run;
  }
  return out;
}

int upper_bound(const BoardState& state, bool area_monotonic) {
  const Instance& inst = state.instance();
  int t = inst.deck_len() - static_cast<int>(state.placements().size());
  if (t == 0) return state.score();
  int l_top = inst.max_levels();
  std::vector<std::pair<int, int>> pool = remaining_pool(state);

  std::vector<int> terms;
  terms.reserve(pool.size());
  if (!area_monotonic) {
    for (const auto& [value, a] : pool) terms.push_back(value * (l_top - 1));
  } else {
    // Fill budget for part i: the area that other drawn parts could add
    // beneath it, at most the (t-1) largest areas of the rest of the pool.
    std::vector<int> areas;
    for (const auto& [value, a] : pool) areas.push_back(a);
    std::sort(areas.begin(), areas.end(), std::greater<>());
    auto top_sum = [&](size_t count) {
      long sum = 0;
      for (size_t i = 0; i < count && i < areas.size(); ++i) sum += areas[i];
      return sum;
    };
    long top_t1 = top_sum(static_cast<size_t>(t) - 1);
    long top_t = top_sum(static_cast<size_t>(t));
    for (const auto& [value, a] : pool) {
      long budget;
      if (t == 1) {
        budget = 0;
      } else if (a >= areas[static_cast<size_t>(t) - 2]) {
        budget = top_t - a;  // i sits among the t-1 largest: swap it out
      } else {
        budget = top_t1;
      }
      // Highest level whose support deficits the budget can still fill.
      int cap = 1;
      long deficit = 0;
      for (int level = 2; level <= l_top; ++level) {
        deficit += std::max(0, a - state.level_area(level - 1));
        if (deficit > budget) break;
        cap = level;
      }
      terms.push_back(value * (cap - 1));
    }
  }
  std::sort(terms.begin(), terms.end(), std::greater<>());
  int bound = state.score();
  for (int i = 0; i < t; ++i) bound += terms[static_cast<size_t>(i)];
  return bound;
}

BoardState greedy_playout(const Instance& instance, std::uint64_t seed) {
  BoardState state = instance.kind() == VariantKind::Known
                         ? BoardState::initial(instance)
                         : BoardState::initial(instance, sample_deck(instance.params(), seed));
  while (!state.done()) {
    auto options = legal_placements(state, state.next_digit());
    if (options.empty()) break;  // dead end: report the stuck state
    int best_level = options.back().level;  // level is the primary sort key
    for (const Placement& p : options) {
      if (p.level == best_level) {
        state.push(p);
        break;
      }
    }
  }
  return state;
}

OptResult solve(const Instance& instance, const SearchConfig& config) {
  if (config.threads < 1) throw std::invalid_argument("thread count must be at least 1");
  if (config.node_limit && *config.node_limit == 0) {
    throw std::invalid_argument("node limit must be positive");
  }
  if (config.time_limit_seconds && *config.time_limit_seconds <= 0) {
    throw std::invalid_argument("time limit must be positive");
  }
  auto start = Clock::now();
  Limits limits;
  limits.node_limit = config.node_limit;
  if (config.time_limit_seconds) {
    limits.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(*config.time_limit_seconds));
  }
  // Limits force a sequential run: node-limited searches then visit a fixed
  // prefix of the tree and stay deterministic.
  int threads = (limits.node_limit || limits.deadline) ? 1 : config.threads;

  Searcher searcher(instance, config, limits);
  BoardState root = BoardState::initial(instance);

  // Seed the incumbent with the greedy baseline where a deck is fixed.
  if (instance.kind() == VariantKind::Known) {
    BoardState greedy = greedy_playout(instance);
    if (greedy.done()) searcher.shared.record(greedy);
  }

  if (threads <= 1) {
    searcher.value_dfs(root);
  } else {
    // Fixed-depth split: every first move becomes a task; workers share only
    // the incumbent score, so the resulting value is schedule-independent.
    std::vector<Placement> tasks;
    auto collect = [&](const Placement& p) {
      tasks.push_back(p);
      return true;
    };
    if (root.deck_fixed()) {
      searcher.for_each_move(root, root.next_digit(), collect);
    } else {
      for (int d = 0; d <= instance.max_digit(); ++d) searcher.for_each_move(root, d, collect);
    }
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      BoardState state = root;
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        searcher.shared.nodes.fetch_add(1);
        state.push(tasks[i]);
        searcher.value_dfs(state);
        state.pop();
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  OptResult result;
  result.proof = searcher.shared.stopped.load() ? ProofStatus::bound_limited : ProofStatus::optimal;
  {
    std::lock_guard<std::mutex> lock(searcher.shared.mu);
    result.best_score = searcher.shared.best_score;
    result.best_deck = searcher.shared.best_deck;
    result.best_play = searcher.shared.best_play;
  }

  // Phase 2: with the optimum proved, rebuild the canonical witness, which
  // pruning and branch order may have skipped during the value search.
  if (result.proof == ProofStatus::optimal && result.best_score) {
    int target = *result.best_score;
    std::vector<Placement> witness;
    if (instance.kind() == VariantKind::Known) {
      BoardState state = BoardState::initial(instance);
      searcher.witness_dfs(state, target, witness);
      result.best_deck = instance.deck();
    } else {
      enumerate_decks(instance, [&](const Deck& deck) {
        BoardState state = BoardState::initial(instance, deck);
        if (upper_bound(state, true) < target) return true;  // deck cannot reach the optimum
        if (searcher.witness_dfs(state, target, witness)) {
          result.best_deck = deck;
          return false;
        }
        return true;
      });
    }
    result.best_play = std::move(witness);
  }

  result.stats.nodes = searcher.shared.nodes.load();
  result.stats.dead_ends = searcher.shared.dead_ends.load();
  result.stats.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace nmbr9
