// Game semantics for Nmbr9-style stacking instances: variant scheme, decks,
// board state with per-level grids, placement legality, and scoring.
//
// Variant scheme "T-m-c-k": T is F (free deck: the player may choose the
// draw order) or K (known deck: the draw order is given); digits run 0..m
// with c copies each (n = (m+1)*c parts total); k cards are drawn. A drawn
// card must be placed if any legal placement exists; a card with no legal
// placement makes the play a dead end, not a skip.
//
// Placement legality, with s the grid side and levels counted from 1:
//   R1  the part lies inside the s x s grid and never touches the border
//       (bounding box within rows/cols 1..s-2),
//   R2  no overlap with cells already on the same level,
//   R3  level 1 rests on the table; on level l >= 2 every cell must sit
//       above an occupied cell of level l-1 (full support),
//   R4  if the level already holds parts, at least one halo cell of the new
//       part coincides with an existing cell on that level (each level stays
//       4-connected),
//   R5  a part on level l >= 2 must rest on at least two distinct parts.
//
// Score: sum over placed parts of digit * (level - 1).
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmbr9/shapes.hpp"

namespace nmbr9 {

enum class VariantKind { Free, Known };

struct VariantParams {
  VariantKind kind = VariantKind::Free;
  int max_digit = 0;  // m: digits 0..m
  int copies = 0;     // c: copies per digit
  int deck_len = 0;   // k: cards drawn

  int part_count() const { return (max_digit + 1) * copies; }
  std::string to_string() const;
};

class VariantError : public std::runtime_error {
 public:
  explicit VariantError(const std::string& what) : std::runtime_error(what) {}
};

class InstanceError : public std::runtime_error {
 public:
  explicit InstanceError(const std::string& what) : std::runtime_error(what) {}
};

// Parses "F-6-1-5" / "K-9-2-20". Rejects unsupported kinds, out-of-range m,
// c < 1, and k outside 1..(m+1)*c.
VariantParams parse_variant(std::string_view text);

// A deck is the sequence of digits in draw order. Copies of a digit are
// indistinguishable, so decks are digit sequences, not part sequences.
using Deck = std::vector<int>;

std::string deck_to_string(const Deck& deck);
Deck parse_deck(std::string_view text);  // "0,3,3,9"; throws VariantError

// One shape orientation with precomputed geometry for fast legality tests.
// Masks are little-endian in the column index; the halo mask is stored
// relative to origin (-1, -1) so all offsets are non-negative.
struct OrientedShape {
  Shape shape;
  std::vector<Cell> halo;                // shape coordinates, offsets may be -1
  std::vector<std::uint64_t> row_mask;   // [height]
  std::vector<std::uint64_t> halo_mask;  // [height + 2], bit (col + 1)
};

// An immutable, validated problem instance. Construction checks that the
// catalog covers digits 0..m, that every needed shape fits the grid with a
// 1-cell margin, and (for K) that the deck is valid. Safe to share across
// threads.
class Instance {
 public:
  static Instance make(const VariantParams& params, int grid_side, int max_levels,
                       const ShapeCatalog& catalog, std::optional<Deck> deck = std::nullopt);

  const VariantParams& params() const { return params_; }
  VariantKind kind() const { return params_.kind; }
  int max_digit() const { return params_.max_digit; }
  int copies() const { return params_.copies; }
  int deck_len() const { return params_.deck_len; }
  int part_count() const { return params_.part_count(); }
  int grid_side() const { return side_; }
  int max_levels() const { return levels_; }
  const ShapeCatalog& catalog() const { return catalog_; }
  const Deck& deck() const;  // throws std::logic_error for F instances

  // Parts are numbered 1..n, digit-major: part p has digit (p-1)/c and copy
  // (p-1)%c + 1. Decks map to parts with copies assigned in draw order.
  int part_digit(int part) const { return (part - 1) / params_.copies; }
  int part_copy(int part) const { return (part - 1) % params_.copies + 1; }

  std::span<const OrientedShape> orientations(int digit) const;
  int shape_area(int digit) const { return areas_.at(static_cast<size_t>(digit)); }

  std::string to_string() const { return params_.to_string(); }

 private:
  Instance() = default;

  VariantParams params_;
  int side_ = 0;
  int levels_ = 0;
  ShapeCatalog catalog_;
  std::optional<Deck> deck_;
  std::vector<std::vector<OrientedShape>> orients_;  // per digit 0..m
  std::vector<int> areas_;
};

// Empty when the deck is valid for (m, c, k); otherwise one human-readable
// violation naming the offending digit or the length mismatch.
std::optional<std::string> validate_deck(const Deck& deck, const VariantParams& params);

// Visits every valid deck in lexicographic digit order. The visitor returns
// false to stop the enumeration early. Requires an F instance.
void enumerate_decks(const Instance& instance, const std::function<bool(const Deck&)>& visit);

// Uniform shuffle of the full (m+1)*c card multiset truncated to k cards,
// using a fixed-algorithm generator so a seed reproduces everywhere.
Deck sample_deck(const VariantParams& params, std::uint64_t seed);

// One committed card: which card of the deck, what digit/copy, and where it
// went. `orientation` indexes Instance::orientations(digit); (row, col) is
// the top-left of the shape's bounding box; level counts from 1.
struct Placement {
  int card_index = 0;  // 1-based position in the deck
  int digit = 0;
  int copy = 0;  // 1-based among same-digit placements, in draw order
  int orientation = 0;
  int row = 0;
  int col = 0;
  int level = 0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// Canonical placement order: (level, orientation, row, col) ascending.
bool canonical_less(const Placement& a, const Placement& b);

std::string placement_to_string(const Placement& p);

// Board state for one play. A value type: `apply` returns a new state and
// never mutates its input. The in-place push/pop pair exists for search
// drivers that own their state exclusively; both maintain all invariants.
//
// For K instances the deck is the instance's. For F instances the deck is
// either fixed up front (second overload) or grows card by card: push of a
// placement appends its digit, pop removes it, and any digit with remaining
// copies is playable next.
class BoardState {
 public:
  static BoardState initial(const Instance& instance);
  static BoardState initial(const Instance& instance, Deck deck);

  const Instance& instance() const { return *instance_; }
  const Deck& deck() const { return deck_; }
  // True when the digit of every card up to deck_len is already determined.
  bool deck_fixed() const { return fixed_deck_; }
  std::span<const Placement> placements() const { return placements_; }
  int next_card() const { return static_cast<int>(placements_.size()) + 1; }
  bool done() const { return static_cast<int>(placements_.size()) == instance_->deck_len(); }
  int next_digit() const;  // digit of the next card; throws if undetermined
  int placed_copies(int digit) const { return counts_.at(static_cast<size_t>(digit)); }
  int score() const { return score_; }

  int top_level() const { return top_level_; }  // 0 while the board is empty
  int level_area(int level) const;
  int parts_on_level(int level) const;
  // 0 when empty, else the 1-based card index of the covering part.
  int part_at(int level, int row, int col) const;

  // In-place apply of a legal placement for the next card (fully validated;
  // throws std::invalid_argument otherwise).
  void push(const Placement& p);
  // Reverts the most recent push.
  void pop();

  friend bool operator==(const BoardState&, const BoardState&);

 private:
  BoardState() = default;
  bool fits(const OrientedShape& os, int level, int row, int col) const;
  void check_card_fields(const Placement& p) const;
  friend std::vector<Placement> legal_placements(const BoardState&, int digit);
  friend bool placement_legal(const BoardState&, const Placement&);

  std::uint64_t occ(int lvl0, int row) const {
    return occ_[static_cast<size_t>(lvl0) * side_ + row];
  }
  std::uint8_t id(int lvl0, int row, int col) const {
    return ids_[(static_cast<size_t>(lvl0) * side_ + row) * side_ + col];
  }

  const Instance* instance_ = nullptr;
  Deck deck_;
  bool fixed_deck_ = true;
  int side_ = 0;
  std::vector<std::uint64_t> occ_;  // [levels][side] row masks
  std::vector<std::uint8_t> ids_;   // [levels][side][side] card indices
  std::vector<int> area_;           // occupied cells per level
  std::vector<int> parts_;          // parts per level
  std::vector<int> counts_;         // placements per digit
  std::vector<Placement> placements_;
  int top_level_ = 0;
  int score_ = 0;
};

// All legal placements of `digit` as the next card, sorted canonically.
// Empty when the card cannot be placed anywhere (a dead end if it is due).
// Throws std::invalid_argument if `digit` cannot be the next card (wrong
// digit for a fixed deck, or no copies left).
std::vector<Placement> legal_placements(const BoardState& state, int digit);

// True when the placement would be accepted by push on this state.
bool placement_legal(const BoardState& state, const Placement& p);

// Value-semantic apply; throws std::invalid_argument on an illegal placement.
BoardState apply(const BoardState& state, const Placement& p);

inline int score(const BoardState& state) { return state.score(); }

}  // namespace nmbr9
