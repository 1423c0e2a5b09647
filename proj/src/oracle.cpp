#include "nmbr9/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nmbr9 {
namespace {

bool play_lex_less(const std::vector<Placement>& a, const std::vector<Placement>& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (canonical_less(a[i], b[i])) return true;
    if (canonical_less(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

struct Search {
  const Instance& instance;
  std::uint64_t node_cap;
  EnumerationReport result;

  void record(const BoardState& state) {
    int sc = state.score();
    ++result.terminal_count;
    if (result.best_score && sc == *result.best_score) {
      ++result.optimal_count;
    } else if (!result.best_score || sc > *result.best_score) {
      result.optimal_count = 1;
    }
    std::vector<Placement> play(state.placements().begin(), state.placements().end());
    bool better = !result.best_score || sc > *result.best_score;
    if (!better && sc == *result.best_score) {
      better = state.deck() < result.best_deck ||
               (state.deck() == result.best_deck && play_lex_less(play, result.best_play));
    }
    if (better) {
      result.best_score = sc;
      result.best_deck = state.deck();
      result.best_play = std::move(play);
    }
  }

  void dfs(BoardState& state) {
    if (!result.complete) return;
    if (state.done()) {
      record(state);
      return;
    }
    std::vector<int> digits;
    if (state.deck_fixed()) {
      digits.push_back(state.next_digit());
    } else {
      for (int d = 0; d <= instance.max_digit(); ++d) {
        if (state.placed_copies(d) < instance.copies()) digits.push_back(d);
      }
    }
    for (int digit : digits) {
      for (const Placement& p : legal_placements(state, digit)) {
        if (node_cap > 0 && result.nodes >= node_cap) {
          result.complete = false;
          return;
        }
        ++result.nodes;
        state.push(p);
        dfs(state);
        state.pop();
      }
    }
  }
};

}  // namespace

EnumerationReport best_score_bruteforce(const Instance& instance, std::uint64_t node_cap) {
  Search search{instance, node_cap, {}};
  search.result.instance = instance.to_string();
  BoardState state = BoardState::initial(instance);
  search.dfs(state);
  return search.result;
}

void enumerate_terminals(const Instance& instance,
                         const std::function<bool(const BoardState&)>& visit) {
  BoardState state = BoardState::initial(instance);
  bool stop = false;
  auto rec = [&](auto&& self) -> void {
    if (stop) return;
    if (state.done()) {
      if (!visit(state)) stop = true;
      return;
    }
    std::vector<int> digits;
    if (state.deck_fixed()) {
      digits.push_back(state.next_digit());
    } else {
      for (int d = 0; d <= instance.max_digit(); ++d) {
        if (state.placed_copies(d) < instance.copies()) digits.push_back(d);
      }
    }
    for (int digit : digits) {
      if (stop) return;
      for (const Placement& p : legal_placements(state, digit)) {
        state.push(p);
        self(self);
        state.pop();
        if (stop) return;
      }
    }
  };
  rec(rec);
}

std::optional<std::string> validate_play(const Instance& instance, const Deck& deck,
                                         std::span<const Placement> play) {
  if (auto bad = validate_deck(deck, instance.params())) return bad;
  if (instance.kind() == VariantKind::Known && deck != instance.deck()) {
    return std::string("deck differs from the instance deck");
  }
  if (play.size() > deck.size()) {
    return "play has more cards than the deck";
  }
  int side = instance.grid_side();
  // level -> cell -> 1-based card index, rebuilt placement by placement.
  std::vector<std::map<Cell, int>> levels(static_cast<size_t>(instance.max_levels()) + 1);
  std::vector<int> copies_seen(static_cast<size_t>(instance.max_digit()) + 1, 0);
  for (size_t i = 0; i < play.size(); ++i) {
    const Placement& p = play[i];
    std::string where = "card " + std::to_string(i + 1) + ": ";
    if (p.card_index != static_cast<int>(i) + 1) return where + "card index mismatch";
    if (p.digit != deck[i]) return where + "digit differs from the deck";
    if (p.copy != ++copies_seen[static_cast<size_t>(p.digit)]) {
      return where + "copy number out of draw order";
    }
    auto orients = instance.orientations(p.digit);
    if (p.orientation < 0 || p.orientation >= static_cast<int>(orients.size())) {
      return where + "no such orientation";
    }
    if (p.level < 1 || p.level > instance.max_levels()) return where + "level out of range";
    const Shape& shape = orients[static_cast<size_t>(p.orientation)].shape;
    std::vector<Cell> cells;
    for (const Cell& c : shape.cells()) cells.push_back({p.row + c.row, p.col + c.col});
    for (const Cell& c : cells) {
      if (c.row < 1 || c.col < 1 || c.row > side - 2 || c.col > side - 2) {
        return where + "cell outside the bordered grid";
      }
      if (levels[static_cast<size_t>(p.level)].count(c)) return where + "overlap on its level";
    }
    if (p.level >= 2) {
      const auto& below = levels[static_cast<size_t>(p.level) - 1];
      std::set<int> under;
      for (const Cell& c : cells) {
        auto it = below.find(c);
        if (it == below.end()) return where + "cell not supported from below";
        under.insert(it->second);
      }
      if (under.size() < 2) return where + "rests on fewer than two parts";
    }
    const auto& same = levels[static_cast<size_t>(p.level)];
    if (!same.empty()) {
      bool touches = false;
      for (const Cell& h : exterior_halo(shape)) {
        if (same.count({p.row + h.row, p.col + h.col})) {
          touches = true;
          break;
        }
      }
      if (!touches) return where + "does not touch its level";
    }
    for (const Cell& c : cells) levels[static_cast<size_t>(p.level)][c] = static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

}  // namespace nmbr9
