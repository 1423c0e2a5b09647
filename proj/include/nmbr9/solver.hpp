// Exact branch-and-bound maximization of the play score, plus the search
// ordering helpers it is built from: an admissible upper bound with an
// optional level-area tightening, a center-out spiral over grid cells used
// to order anchors, and a greedy baseline playout.
//
// The search runs in two phases so its output is reproducible bit for bit:
// phase 1 establishes the optimal value (depth-first, optionally over
// several workers sharing only an atomic incumbent score), and phase 2
// re-derives the canonical witness sequentially: the lexicographically
// smallest optimal play, comparing the deck digit by digit first, then the
// placement sequence under the canonical placement order. Phase 2 never
// runs when a limit interrupted phase 1; the incumbent play is returned
// as-is then.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nmbr9/rules.hpp"

namespace nmbr9 {

struct SearchConfig {
  std::optional<std::uint64_t> node_limit;  // placements tried
  std::optional<double> time_limit_seconds;
  int threads = 1;
  // Pruning toggles. Turning any of them off changes statistics only, never
  // the reported optimum or witness.
  bool prune_upper_bound = true;    // cut branches that cannot beat the incumbent
  bool prune_area_monotonic = true; // tighten the bound via level-area feasibility
  bool first_card_level1 = true;    // skip level > 1 scans for the first card
  bool levels_descending = true;    // branch higher levels first
};

enum class ProofStatus { optimal, bound_limited };

struct SearchStats {
  std::uint64_t nodes = 0;      // placements pushed
  std::uint64_t dead_ends = 0;  // states whose due card had no placement
  double elapsed_seconds = 0;
};

struct OptResult {
  // Empty when no complete play exists (proved) or none was found (limited).
  std::optional<int> best_score;
  Deck best_deck;
  std::vector<Placement> best_play;
  ProofStatus proof = ProofStatus::optimal;
  SearchStats stats;
};

// Branch-and-bound maximization. Per card, branching follows the configured
// level order (descending by default), anchors within a level in spiral
// order, orientations last; for F instances the card digits branch in
// ascending order, which explores decks in lexicographic order overall.
// Limits force a single-threaded run so that node-limited results are
// deterministic; a proof of optimality is reported only when no limit hit.
OptResult solve(const Instance& instance, const SearchConfig& config = {});

// Admissible bound on the final score of any completion of `state`: the
// current score plus, for each card still to come, its value times the best
// level the area chain still admits (or l_top - 1 without the tightening).
// Never below the score any completion can reach.
int upper_bound(const BoardState& state, bool area_monotonic = true);

// Center-out clockwise spiral: starts at (s/2, s/2), run lengths
// 1,1,2,2,3,3,... stepping right, down, left, up; off-grid cells are
// skipped. A permutation of all s*s cells.
std::vector<Cell> spiral_order(int s);

// Plays each card at its highest-level legal placement, ties broken by the
// canonical placement order. For F instances the deck is sampled from the
// seed first. The result is terminal unless a card had no legal placement
// (a dead end; inspect done()).
BoardState greedy_playout(const Instance& instance, std::uint64_t seed = 0);

}  // namespace nmbr9
