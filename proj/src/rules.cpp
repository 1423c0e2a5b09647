#include "nmbr9/rules.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

namespace nmbr9 {
namespace {

int parse_int_field(std::string_view text, std::string_view what) {
  int value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw VariantError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

constexpr int kMaxSide = 62;    // row masks are 64-bit
constexpr int kMaxParts = 254;  // part ids are stored in one byte, 0 = empty
constexpr int kMaxLevels = 64;

}  // namespace

std::string VariantParams::to_string() const {
  std::string out(1, kind == VariantKind::Free ? 'F' : 'K');
  out += '-';
  out += std::to_string(max_digit);
  out += '-';
  out += std::to_string(copies);
  out += '-';
  out += std::to_string(deck_len);
  return out;
}

VariantParams parse_variant(std::string_view text) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t dash = text.find('-', start);
    if (dash == std::string_view::npos) {
      fields.push_back(text.substr(start));
      break;
    }
    fields.push_back(text.substr(start, dash - start));
    start = dash + 1;
  }
  if (fields.size() != 4) {
    throw VariantError("variant '" + std::string(text) + "' is not of the form T-m-c-k");
  }
  VariantParams params;
  if (fields[0] == "F") {
    params.kind = VariantKind::Free;
  } else if (fields[0] == "K") {
    params.kind = VariantKind::Known;
  } else {
    throw VariantError("unsupported variant kind '" + std::string(fields[0]) + "'");
  }
  params.max_digit = parse_int_field(fields[1], "max digit");
  params.copies = parse_int_field(fields[2], "copy count");
  params.deck_len = parse_int_field(fields[3], "deck length");
  if (params.max_digit < 0 || params.max_digit > 9) {
    throw VariantError("max digit " + std::to_string(params.max_digit) + " outside 0..9");
  }
  if (params.copies < 1) {
    throw VariantError("copy count " + std::to_string(params.copies) + " must be at least 1");
  }
  if (params.deck_len < 1) {
    throw VariantError("deck length " + std::to_string(params.deck_len) + " must be at least 1");
  }
  if (params.deck_len > params.part_count()) {
    throw VariantError("deck length " + std::to_string(params.deck_len) + " exceeds part count " +
                       std::to_string(params.part_count()));
  }
  return params;
}

std::string deck_to_string(const Deck& deck) {
  std::string out;
  for (size_t i = 0; i < deck.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(deck[i]);
  }
  return out;
}

Deck parse_deck(std::string_view text) {
  if (text.empty()) throw VariantError("empty deck string");
  Deck deck;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string_view field = text.substr(start, end - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    try {
      deck.push_back(parse_int_field(field, "deck digit"));
    } catch (const VariantError&) {
      throw VariantError("malformed deck digit '" + std::string(field) + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return deck;
}

std::optional<std::string> validate_deck(const Deck& deck, const VariantParams& params) {
  if (static_cast<int>(deck.size()) != params.deck_len) {
    return "deck has " + std::to_string(deck.size()) + " cards, expected " +
           std::to_string(params.deck_len);
  }
  std::vector<int> counts(static_cast<size_t>(params.max_digit) + 1, 0);
  for (int digit : deck) {
    if (digit < 0 || digit > params.max_digit) {
      return "deck digit " + std::to_string(digit) + " outside 0.." +
             std::to_string(params.max_digit);
    }
    if (++counts[static_cast<size_t>(digit)] > params.copies) {
      return "digit " + std::to_string(digit) + " appears more than " +
             std::to_string(params.copies) + " times";
    }
  }
  return std::nullopt;
}

Instance Instance::make(const VariantParams& params, int grid_side, int max_levels,
                        const ShapeCatalog& catalog, std::optional<Deck> deck) {
  if (params.max_digit < 0 || params.max_digit > 9) {
    throw InstanceError("max digit " + std::to_string(params.max_digit) + " outside 0..9");
  }
  if (params.copies < 1) throw InstanceError("copy count must be at least 1");
  if (params.deck_len < 1 || params.deck_len > params.part_count()) {
    throw InstanceError("deck length " + std::to_string(params.deck_len) + " outside 1.." +
                        std::to_string(params.part_count()));
  }
  if (params.part_count() > kMaxParts) {
    throw InstanceError("part count " + std::to_string(params.part_count()) + " exceeds " +
                        std::to_string(kMaxParts));
  }
  if (max_levels < 1 || max_levels > kMaxLevels) {
    throw InstanceError("level count " + std::to_string(max_levels) + " outside 1.." +
                        std::to_string(kMaxLevels));
  }
  if (grid_side < 3 || grid_side > kMaxSide) {
    throw InstanceError("grid side " + std::to_string(grid_side) + " outside 3.." +
                        std::to_string(kMaxSide));
  }
  Instance inst;
  inst.params_ = params;
  inst.side_ = grid_side;
  inst.levels_ = max_levels;
  inst.catalog_ = catalog;
  for (int digit = 0; digit <= params.max_digit; ++digit) {
    if (!catalog.has(digit)) {
      throw InstanceError("catalog has no shape for digit " + std::to_string(digit));
    }
    const Shape& base = catalog.shape(digit);
    int need = std::max(base.height(), base.width()) + 2;
    if (grid_side < need) {
      throw InstanceError("grid side " + std::to_string(grid_side) + " too small for digit " +
                          std::to_string(digit) + " (needs at least " + std::to_string(need) + ")");
    }
    std::vector<OrientedShape> orients;
    for (const Shape& shape : distinct_orientations(base)) {
      OrientedShape os;
      os.shape = shape;
      os.halo = exterior_halo(shape);
      os.row_mask.assign(static_cast<size_t>(shape.height()), 0);
      for (const Cell& cell : shape.cells()) {
        os.row_mask[static_cast<size_t>(cell.row)] |= std::uint64_t{1} << cell.col;
      }
      os.halo_mask.assign(static_cast<size_t>(shape.height()) + 2, 0);
      for (const Cell& cell : os.halo) {
        os.halo_mask[static_cast<size_t>(cell.row + 1)] |= std::uint64_t{1} << (cell.col + 1);
      }
      orients.push_back(std::move(os));
    }
    inst.orients_.push_back(std::move(orients));
    inst.areas_.push_back(base.area());
  }
  if (params.kind == VariantKind::Known) {
    if (!deck) throw InstanceError("known-deck instance requires a deck");
    if (auto violation = validate_deck(*deck, params)) throw InstanceError(*violation);
    inst.deck_ = std::move(deck);
  } else if (deck) {
    throw InstanceError("free-deck instance must not fix a deck");
  }
  return inst;
}

const Deck& Instance::deck() const {
  if (!deck_) throw std::logic_error("instance has no fixed deck");
  return *deck_;
}

std::span<const OrientedShape> Instance::orientations(int digit) const {
  return orients_.at(static_cast<size_t>(digit));
}

void enumerate_decks(const Instance& instance, const std::function<bool(const Deck&)>& visit) {
  if (instance.kind() != VariantKind::Free) {
    throw std::logic_error("deck enumeration needs a free-deck instance");
  }
  int m = instance.max_digit();
  int c = instance.copies();
  int k = instance.deck_len();
  Deck deck;
  deck.reserve(static_cast<size_t>(k));
  std::vector<int> used(static_cast<size_t>(m) + 1, 0);
  bool stop = false;
  auto rec = [&](auto&& self) -> void {
    if (stop) return;
    if (static_cast<int>(deck.size()) == k) {
      if (!visit(deck)) stop = true;
      return;
    }
    for (int digit = 0; digit <= m && !stop; ++digit) {
      if (used[static_cast<size_t>(digit)] == c) continue;
      ++used[static_cast<size_t>(digit)];
      deck.push_back(digit);
      self(self);
      deck.pop_back();
      --used[static_cast<size_t>(digit)];
    }
  };
  rec(rec);
}

Deck sample_deck(const VariantParams& params, std::uint64_t seed) {
  Deck pool;
  pool.reserve(static_cast<size_t>(params.part_count()));
  for (int digit = 0; digit <= params.max_digit; ++digit) {
    pool.insert(pool.end(), static_cast<size_t>(params.copies), digit);
  }
  // Fisher-Yates with mt19937_64, whose output stream the standard pins down,
  // so a seed reproduces across platforms (unlike uniform_int_distribution).
  std::mt19937_64 gen(seed);
  for (size_t i = pool.size() - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(gen() % (i + 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<size_t>(params.deck_len));
  return pool;
}

bool canonical_less(const Placement& a, const Placement& b) {
  return std::tie(a.level, a.orientation, a.row, a.col) <
         std::tie(b.level, b.orientation, b.row, b.col);
}

std::string placement_to_string(const Placement& p) {
  std::ostringstream out;
  out << "card " << p.card_index << " digit " << p.digit << " copy " << p.copy << " orient "
      << p.orientation << " at (" << p.row << "," << p.col << ") level " << p.level;
  return out.str();
}

BoardState BoardState::initial(const Instance& instance) {
  BoardState state;
  state.instance_ = &instance;
  state.side_ = instance.grid_side();
  if (instance.kind() == VariantKind::Known) {
    state.deck_ = instance.deck();
    state.fixed_deck_ = true;
  } else {
    state.fixed_deck_ = false;
  }
  size_t levels = static_cast<size_t>(instance.max_levels());
  size_t side = static_cast<size_t>(state.side_);
  state.occ_.assign(levels * side, 0);
  state.ids_.assign(levels * side * side, 0);
  state.area_.assign(levels, 0);
  state.parts_.assign(levels, 0);
  state.counts_.assign(static_cast<size_t>(instance.max_digit()) + 1, 0);
  state.placements_.reserve(static_cast<size_t>(instance.deck_len()));
  return state;
}

BoardState BoardState::initial(const Instance& instance, Deck deck) {
  if (instance.kind() == VariantKind::Known) {
    throw std::logic_error("known-deck instance already fixes its deck");
  }
  if (auto violation = validate_deck(deck, instance.params())) {
    throw std::invalid_argument(*violation);
  }
  BoardState state = initial(instance);
  state.deck_ = std::move(deck);
  state.fixed_deck_ = true;
  return state;
}

int BoardState::next_digit() const {
  if (done()) throw std::logic_error("all cards are placed");
  if (!fixed_deck_) throw std::logic_error("next digit is not determined yet");
  return deck_[placements_.size()];
}

int BoardState::level_area(int level) const {
  return area_.at(static_cast<size_t>(level) - 1);
}

int BoardState::parts_on_level(int level) const {
  return parts_.at(static_cast<size_t>(level) - 1);
}

int BoardState::part_at(int level, int row, int col) const {
  if (level < 1 || level > instance_->max_levels() || row < 0 || row >= side_ || col < 0 ||
      col >= side_) {
    throw std::out_of_range("cell outside the board");
  }
  return id(level - 1, row, col);
}

// All five placement rules for the given geometry; card bookkeeping (digit,
// copy, card index) is checked separately.
bool BoardState::fits(const OrientedShape& os, int level, int row, int col) const {
  if (level < 1 || level > instance_->max_levels()) return false;
  // A level above top_level_+1 would sit on empty cells and fail R3 anyway.
  if (level > top_level_ + 1) return false;
  int h = os.shape.height();
  int w = os.shape.width();
  if (row < 1 || col < 1 || row + h - 1 > side_ - 2 || col + w - 1 > side_ - 2) return false;  // R1
  int lvl = level - 1;
  for (int i = 0; i < h; ++i) {
    std::uint64_t cells = os.row_mask[static_cast<size_t>(i)] << col;
    if (occ(lvl, row + i) & cells) return false;  // R2
    if (lvl > 0 && (cells & ~occ(lvl - 1, row + i))) return false;  // R3
  }
  if (parts_[static_cast<size_t>(lvl)] > 0) {  // R4
    bool touches = false;
    for (int i = 0; i < h + 2 && !touches; ++i) {
      touches = (occ(lvl, row - 1 + i) & (os.halo_mask[static_cast<size_t>(i)] << (col - 1))) != 0;
    }
    if (!touches) return false;
  }
  if (lvl > 0) {  // R5
    int first = 0;
    bool two = false;
    for (const Cell& cell : os.shape.cells()) {
      int under = id(lvl - 1, row + cell.row, col + cell.col);
      if (first == 0) {
        first = under;
      } else if (under != first) {
        two = true;
        break;
      }
    }
    if (!two) return false;
  }
  return true;
}

void BoardState::check_card_fields(const Placement& p) const {
  if (done()) throw std::invalid_argument("all cards are already placed");
  if (p.card_index != next_card()) {
    throw std::invalid_argument("placement is for card " + std::to_string(p.card_index) +
                                ", expected card " + std::to_string(next_card()));
  }
  if (p.digit < 0 || p.digit > instance_->max_digit()) {
    throw std::invalid_argument("digit " + std::to_string(p.digit) + " outside 0.." +
                                std::to_string(instance_->max_digit()));
  }
  if (fixed_deck_) {
    if (p.digit != next_digit()) {
      throw std::invalid_argument("card " + std::to_string(p.card_index) + " has digit " +
                                  std::to_string(next_digit()) + ", not " +
                                  std::to_string(p.digit));
    }
  } else if (placed_copies(p.digit) == instance_->copies()) {
    throw std::invalid_argument("no copies of digit " + std::to_string(p.digit) + " remain");
  }
  if (p.copy != placed_copies(p.digit) + 1) {
    throw std::invalid_argument("copy " + std::to_string(p.copy) + " of digit " +
                                std::to_string(p.digit) + " is out of draw order");
  }
  auto orients = instance_->orientations(p.digit);
  if (p.orientation < 0 || p.orientation >= static_cast<int>(orients.size())) {
    throw std::invalid_argument("digit " + std::to_string(p.digit) + " has no orientation " +
                                std::to_string(p.orientation));
  }
}

void BoardState::push(const Placement& p) {
  check_card_fields(p);
  const OrientedShape& os = instance_->orientations(p.digit)[static_cast<size_t>(p.orientation)];
  if (!fits(os, p.level, p.row, p.col)) {
    throw std::invalid_argument("illegal placement: " + placement_to_string(p));
  }
  int lvl = p.level - 1;
  int h = os.shape.height();
  std::uint8_t card = static_cast<std::uint8_t>(p.card_index);
  for (int i = 0; i < h; ++i) {
    occ_[static_cast<size_t>(lvl) * side_ + p.row + i] |=
        os.row_mask[static_cast<size_t>(i)] << p.col;
  }
  for (const Cell& cell : os.shape.cells()) {
    ids_[(static_cast<size_t>(lvl) * side_ + p.row + cell.row) * side_ + p.col + cell.col] = card;
  }
  area_[static_cast<size_t>(lvl)] += os.shape.area();
  parts_[static_cast<size_t>(lvl)] += 1;
  counts_[static_cast<size_t>(p.digit)] += 1;
  top_level_ = std::max(top_level_, p.level);
  score_ += p.digit * (p.level - 1);
  if (!fixed_deck_) deck_.push_back(p.digit);
  placements_.push_back(p);
}

void BoardState::pop() {
  if (placements_.empty()) throw std::logic_error("no placement to revert");
  const Placement p = placements_.back();
  placements_.pop_back();
  if (!fixed_deck_) deck_.pop_back();
  const OrientedShape& os = instance_->orientations(p.digit)[static_cast<size_t>(p.orientation)];
  int lvl = p.level - 1;
  int h = os.shape.height();
  for (int i = 0; i < h; ++i) {
    occ_[static_cast<size_t>(lvl) * side_ + p.row + i] &=
        ~(os.row_mask[static_cast<size_t>(i)] << p.col);
  }
  for (const Cell& cell : os.shape.cells()) {
    ids_[(static_cast<size_t>(lvl) * side_ + p.row + cell.row) * side_ + p.col + cell.col] = 0;
  }
  area_[static_cast<size_t>(lvl)] -= os.shape.area();
  parts_[static_cast<size_t>(lvl)] -= 1;
  counts_[static_cast<size_t>(p.digit)] -= 1;
  while (top_level_ > 0 && parts_[static_cast<size_t>(top_level_) - 1] == 0) --top_level_;
  score_ -= p.digit * (p.level - 1);
}

bool operator==(const BoardState& a, const BoardState& b) {
  return a.instance_ == b.instance_ && a.deck_ == b.deck_ && a.fixed_deck_ == b.fixed_deck_ &&
         a.occ_ == b.occ_ && a.ids_ == b.ids_ && a.placements_ == b.placements_ &&
         a.top_level_ == b.top_level_ && a.score_ == b.score_;
}

std::vector<Placement> legal_placements(const BoardState& state, int digit) {
  if (state.done()) throw std::invalid_argument("all cards are already placed");
  if (digit < 0 || digit > state.instance_->max_digit()) {
    throw std::invalid_argument("digit " + std::to_string(digit) + " outside 0.." +
                                std::to_string(state.instance_->max_digit()));
  }
  if (state.fixed_deck_) {
    if (digit != state.next_digit()) {
      throw std::invalid_argument("next card has digit " + std::to_string(state.next_digit()) +
                                  ", not " + std::to_string(digit));
    }
  } else if (state.placed_copies(digit) == state.instance_->copies()) {
    throw std::invalid_argument("no copies of digit " + std::to_string(digit) + " remain");
  }
  std::vector<Placement> out;
  auto orients = state.instance_->orientations(digit);
  int side = state.side_;
  int max_level = std::min(state.top_level_ + 1, state.instance_->max_levels());
  for (int level = 1; level <= max_level; ++level) {
    for (int oi = 0; oi < static_cast<int>(orients.size()); ++oi) {
      const OrientedShape& os = orients[static_cast<size_t>(oi)];
      int h = os.shape.height();
      int w = os.shape.width();
      for (int row = 1; row + h - 1 <= side - 2; ++row) {
        for (int col = 1; col + w - 1 <= side - 2; ++col) {
          if (!state.fits(os, level, row, col)) continue;
          out.push_back(Placement{state.next_card(), digit, state.placed_copies(digit) + 1, oi,
                                  row, col, level});
        }
      }
    }
  }
  return out;
}

bool placement_legal(const BoardState& state, const Placement& p) {
  try {
    state.check_card_fields(p);
  } catch (const std::invalid_argument&) {
    return false;
  }
  const OrientedShape& os =
      state.instance_->orientations(p.digit)[static_cast<size_t>(p.orientation)];
  return state.fits(os, p.level, p.row, p.col);
}

BoardState apply(const BoardState& state, const Placement& p) {
  BoardState next = state;
  next.push(p);
  return next;
}

}  // namespace nmbr9
