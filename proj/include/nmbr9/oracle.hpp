// Brute-force reference implementations: exhaustive play enumeration, an
// exact-by-enumeration maximizer, and a from-scratch play validator that
// shares no incremental bookkeeping with the engine in rules.hpp. These
// exist to cross-check the optimizing solver on small instances; their
// running time grows explosively with the deck length.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nmbr9/rules.hpp"

namespace nmbr9 {

struct EnumerationReport {
  std::string instance;  // variant echo, e.g. "K-9-2-3"
  // Best score over complete plays (all k cards placed); empty when no
  // complete play exists within the explored space.
  std::optional<int> best_score;
  std::uint64_t terminal_count = 0;  // complete plays seen
  std::uint64_t optimal_count = 0;   // complete plays achieving best_score
  // The witness: lexicographically smallest optimum, comparing the deck
  // first (digit by digit), then the placement sequence.
  Deck best_deck;
  std::vector<Placement> best_play;
  bool complete = true;     // false once node_cap stopped the enumeration
  std::uint64_t nodes = 0;  // states entered
};

// Enumerates every reachable play state. With node_cap > 0 the enumeration
// stops after that many nodes and reports complete = false; the result is
// then only a lower bound on the optimum.
EnumerationReport best_score_bruteforce(const Instance& instance, std::uint64_t node_cap = 0);

// Visits every complete play (for F instances: over every deck, decks in
// lexicographic order). The visitor returns false to stop early.
void enumerate_terminals(const Instance& instance,
                         const std::function<bool(const BoardState&)>& visit);

// Validates a play prefix from first principles: plain cell sets, no masks,
// no reuse of the engine's incremental state. `play` may cover only the
// first cards of `deck`; `deck` itself must be a full valid deck (and must
// equal the instance deck for K instances). Returns the first violation in
// card order, or empty when the prefix is a legal play.
std::optional<std::string> validate_play(const Instance& instance, const Deck& deck,
                                         std::span<const Placement> play);

}  // namespace nmbr9
