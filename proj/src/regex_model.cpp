#include "nmbr9/regex_model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

#include "nmbr9/solver.hpp"

namespace nmbr9 {

namespace {

void check_symbol(int sym) {
  if (sym < 0 || sym > 2) throw ModelError("regex symbol " + std::to_string(sym) + " outside 0..2");
}

}  // namespace

Regex Regex::symbol(int sym) {
  check_symbol(sym);
  Regex r;
  r.kind = Kind::sym;
  r.sym = sym;
  return r;
}

Regex Regex::run(int sym, int count) {
  if (count < 1) throw ModelError("run count must be at least 1");
  if (count == 1) return symbol(sym);
  return repeat(symbol(sym), count, count);
}

Regex Regex::between(int sym, int lo, int hi) {
  if (lo == hi) return run(sym, lo);
  return repeat(symbol(sym), lo, hi);
}

Regex Regex::star(int sym) { return repeat(symbol(sym), 0, -1); }

Regex Regex::sequence(std::vector<Regex> parts) {
  if (parts.empty()) throw ModelError("empty sequence");
  if (parts.size() == 1) return std::move(parts.front());
  Regex r;
  r.kind = Kind::seq;
  for (auto& p : parts) {  // flatten nested sequences for one canonical form
    if (p.kind == Kind::seq)
      for (auto& c : p.children) r.children.push_back(std::move(c));
    else
      r.children.push_back(std::move(p));
  }
  return r;
}

Regex Regex::any_of(std::vector<Regex> choices) {
  if (choices.empty()) throw ModelError("empty alternation");
  if (choices.size() == 1) return std::move(choices.front());
  Regex r;
  r.kind = Kind::alt;
  r.children = std::move(choices);
  return r;
}

Regex Regex::repeat(Regex child, int lo, int hi) {
  if (lo < 0 || (hi != -1 && hi < lo) || (hi == 0))
    throw ModelError("bad repeat bounds {" + std::to_string(lo) + "," + std::to_string(hi) + "}");
  Regex r;
  r.kind = Kind::rep;
  r.children.push_back(std::move(child));
  r.rep_min = lo;
  r.rep_max = hi;
  return r;
}

std::string regex_to_text(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::sym:
      return std::string(1, static_cast<char>('0' + r.sym));
    case Regex::Kind::seq: {
      std::string out;
      for (const auto& c : r.children) {
        if (!out.empty()) out += ' ';
        if (c.kind == Regex::Kind::alt)
          out += "( " + regex_to_text(c) + " )";
        else
          out += regex_to_text(c);
      }
      return out;
    }
    case Regex::Kind::alt: {
      std::string out;
      for (const auto& c : r.children) {
        if (!out.empty()) out += " | ";
        out += regex_to_text(c);
      }
      return out;
    }
    case Regex::Kind::rep: {
      const Regex& c = r.children.front();
      std::string base = c.kind == Regex::Kind::sym ? regex_to_text(c)
                                                    : "(" + regex_to_text(c) + ")";
      if (r.rep_min == 0 && r.rep_max == -1) return base + "*";
      if (r.rep_min == r.rep_max)
        return r.rep_min == 1 ? base : base + "^" + std::to_string(r.rep_min);
      return base + "^{" + std::to_string(r.rep_min) + "," + std::to_string(r.rep_max) + "}";
    }
  }
  throw ModelError("corrupt regex node");
}

namespace {

// 0 = empty, 1 = part cell, 2 = exterior halo, over the stamp box covering
// the shape plus its one-cell fringe; stamp (r, c) = shape (r - 1, c - 1).
std::vector<std::vector<int>> stamp_grid(const Shape& sh) {
  std::vector<std::vector<int>> g(static_cast<size_t>(sh.height()) + 2,
                                  std::vector<int>(static_cast<size_t>(sh.width()) + 2, 0));
  for (Cell c : sh.cells()) g[static_cast<size_t>(c.row) + 1][static_cast<size_t>(c.col) + 1] = 1;
  for (Cell c : exterior_halo(sh))
    g[static_cast<size_t>(c.row) + 1][static_cast<size_t>(c.col) + 1] = 2;
  return g;
}

void push_token(std::vector<std::pair<int, int>>& runs, int sym, int count) {
  if (count <= 0) return;
  if (!runs.empty() && runs.back().first == sym)
    runs.back().second += count;
  else
    runs.emplace_back(sym, count);
}

// The stamp written row-major with board row stride s: symbols from the
// first nonzero stamp cell to the last, interior empties (holes and halo
// notches) as explicit 0s, inter-row jumps as 0-runs of the skipped cells.
std::vector<std::pair<int, int>> body_runs(const std::vector<std::vector<int>>& stamp, int s) {
  std::vector<std::pair<int, int>> runs;
  long long prev = -1;  // flat position of the previous nonzero symbol
  for (size_t r = 0; r < stamp.size(); ++r) {
    for (size_t c = 0; c < stamp[r].size(); ++c) {
      if (stamp[r][c] == 0) continue;
      long long pos = static_cast<long long>(r) * s + static_cast<long long>(c);
      if (prev >= 0) push_token(runs, 0, static_cast<int>(pos - prev - 1));
      push_token(runs, stamp[r][c], 1);
      prev = pos;
    }
  }
  return runs;
}

}  // namespace

PlacementRegex build_regex(const OrientationSet& orientations, int grid_side, int digit) {
  if (digit < 0 || digit > 9) throw ModelError("digit " + std::to_string(digit) + " outside 0..9");
  if (grid_side < 1) throw ModelError("grid side must be positive");

  std::vector<Regex> alts;
  for (const Shape& sh : orientations) {
    int rows = grid_side - sh.height() - 1;  // legal anchor rows 1..rows
    int cols = grid_side - sh.width() - 1;   // legal anchor cols 1..cols
    if (rows < 1 || cols < 1) continue;      // cannot respect the margin

    auto stamp = stamp_grid(sh);
    int first_col = 0;  // stamp column of the first symbol (top halo row)
    while (stamp[0][static_cast<size_t>(first_col)] == 0) ++first_col;

    std::vector<Regex> parts;
    // Alignment prefix: whole empty rows above, then the offset of the
    // first stamp symbol inside its row, one choice per legal anchor.
    if (rows >= 2) parts.push_back(Regex::repeat(Regex::run(0, grid_side), 0, rows - 1));
    parts.push_back(Regex::between(0, first_col, first_col + cols - 1));
    for (auto [sym, count] : body_runs(stamp, grid_side)) parts.push_back(Regex::run(sym, count));
    alts.push_back(Regex::sequence(std::move(parts)));
  }

  PlacementRegex out;
  out.digit = digit;
  out.grid_side = grid_side;
  Regex empty_word = Regex::sequence({Regex::symbol(0), Regex::star(0)});
  if (alts.empty()) {
    out.root = std::move(empty_word);
    return out;
  }
  Regex body = Regex::any_of(std::move(alts));
  out.root = Regex::any_of(
      {Regex::sequence({Regex::symbol(1), std::move(body), Regex::star(0)}), std::move(empty_word)});
  return out;
}

namespace {

// Thompson construction: one epsilon-NFA per regex, fresh states per use so
// bounded repeats can simply re-instantiate their child.
struct Nfa {
  struct State {
    std::array<std::vector<int>, 3> edges;
    std::vector<int> eps;
  };
  std::vector<State> states;

  int fresh() {
    states.emplace_back();
    return static_cast<int>(states.size()) - 1;
  }
  void eps(int from, int to) { states[static_cast<size_t>(from)].eps.push_back(to); }
  void edge(int from, int sym, int to) {
    states[static_cast<size_t>(from)].edges[static_cast<size_t>(sym)].push_back(to);
  }

  // Emits `r` and returns its (start, end) fragment.
  std::pair<int, int> emit(const Regex& r) {
    switch (r.kind) {
      case Regex::Kind::sym: {
        int a = fresh(), b = fresh();
        edge(a, r.sym, b);
        return {a, b};
      }
      case Regex::Kind::seq: {
        int start = -1, end = -1;
        for (const auto& c : r.children) {
          auto [s, e] = emit(c);
          if (start < 0)
            start = s;
          else
            eps(end, s);
          end = e;
        }
        return {start, end};
      }
      case Regex::Kind::alt: {
        int a = fresh(), b = fresh();
        for (const auto& c : r.children) {
          auto [s, e] = emit(c);
          eps(a, s);
          eps(e, b);
        }
        return {a, b};
      }
      case Regex::Kind::rep: {
        const Regex& c = r.children.front();
        int start = fresh(), end = start;
        for (int i = 0; i < r.rep_min; ++i) {
          auto [s, e] = emit(c);
          eps(end, s);
          end = e;
        }
        if (r.rep_max == -1) {  // trailing star
          auto [s, e] = emit(c);
          int out = fresh();
          eps(end, s);
          eps(end, out);
          eps(e, s);
          eps(e, out);
          end = out;
        } else {
          for (int i = r.rep_min; i < r.rep_max; ++i) {  // optional copies
            auto [s, e] = emit(c);
            int out = fresh();
            eps(end, s);
            eps(end, out);
            eps(e, out);
            end = out;
          }
        }
        return {start, end};
      }
    }
    throw ModelError("corrupt regex node");
  }
};

std::vector<int> eps_closure(const Nfa& nfa, std::vector<int> seed) {
  std::vector<char> in(nfa.states.size(), 0);
  std::vector<int> stack = seed;
  for (int q : seed) in[static_cast<size_t>(q)] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int to : nfa.states[static_cast<size_t>(q)].eps)
      if (!in[static_cast<size_t>(to)]) {
        in[static_cast<size_t>(to)] = 1;
        stack.push_back(to);
      }
  }
  std::vector<int> out;
  for (size_t q = 0; q < in.size(); ++q)
    if (in[q]) out.push_back(static_cast<int>(q));
  return out;
}

struct RawDfa {
  std::vector<std::array<int, 3>> next;
  std::vector<std::uint8_t> accepting;
  int start = 0;
};

RawDfa determinize(const Nfa& nfa, int nfa_start, int nfa_accept) {
  RawDfa dfa;
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> sets;
  auto intern = [&](std::vector<int> set) {
    auto [it, fresh] = ids.emplace(std::move(set), static_cast<int>(sets.size()));
    if (fresh) {
      sets.push_back(it->first);
      dfa.next.push_back({-1, -1, -1});
      dfa.accepting.push_back(
          std::binary_search(it->first.begin(), it->first.end(), nfa_accept) ? 1 : 0);
    }
    return it->second;
  };
  dfa.start = intern(eps_closure(nfa, {nfa_start}));
  for (int q = 0; q < static_cast<int>(sets.size()); ++q) {
    for (int sym = 0; sym < 3; ++sym) {
      std::vector<int> move;
      for (int st : sets[static_cast<size_t>(q)])
        for (int to : nfa.states[static_cast<size_t>(st)].edges[static_cast<size_t>(sym)])
          move.push_back(to);
      if (move.empty()) continue;
      std::sort(move.begin(), move.end());
      move.erase(std::unique(move.begin(), move.end()), move.end());
      dfa.next[static_cast<size_t>(q)][static_cast<size_t>(sym)] = intern(eps_closure(nfa, move));
    }
  }
  return dfa;
}

// Drops states that cannot reach an accepting state (the implicit reject
// sink absorbs their transitions).
void trim(RawDfa& dfa) {
  size_t n = dfa.next.size();
  std::vector<std::vector<int>> rev(n);
  for (size_t q = 0; q < n; ++q)
    for (int sym = 0; sym < 3; ++sym)
      if (int to = dfa.next[q][static_cast<size_t>(sym)]; to >= 0)
        rev[static_cast<size_t>(to)].push_back(static_cast<int>(q));
  std::vector<char> live(n, 0);
  std::vector<int> stack;
  for (size_t q = 0; q < n; ++q)
    if (dfa.accepting[q]) {
      live[q] = 1;
      stack.push_back(static_cast<int>(q));
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int from : rev[static_cast<size_t>(q)])
      if (!live[static_cast<size_t>(from)]) {
        live[static_cast<size_t>(from)] = 1;
        stack.push_back(from);
      }
  }
  std::vector<int> remap(n, -1);
  int kept = 0;
  for (size_t q = 0; q < n; ++q)
    if (live[q]) remap[q] = kept++;
  if (remap[static_cast<size_t>(dfa.start)] < 0) {  // empty language
    dfa.next = {{-1, -1, -1}};
    dfa.accepting = {0};
    dfa.start = 0;
    return;
  }
  RawDfa out;
  out.next.resize(static_cast<size_t>(kept), {-1, -1, -1});
  out.accepting.resize(static_cast<size_t>(kept), 0);
  for (size_t q = 0; q < n; ++q) {
    if (remap[q] < 0) continue;
    out.accepting[static_cast<size_t>(remap[q])] = dfa.accepting[q];
    for (int sym = 0; sym < 3; ++sym) {
      int to = dfa.next[q][static_cast<size_t>(sym)];
      out.next[static_cast<size_t>(remap[q])][static_cast<size_t>(sym)] = to < 0 ? -1 : remap[static_cast<size_t>(to)];
    }
  }
  out.start = remap[static_cast<size_t>(dfa.start)];
  dfa = std::move(out);
}

// Moore partition refinement; the missing-transition sink is its own
// implicit class throughout.
void minimize(RawDfa& dfa) {
  size_t n = dfa.next.size();
  std::vector<int> cls(n);
  for (size_t q = 0; q < n; ++q) cls[q] = dfa.accepting[q] ? 1 : 0;
  while (true) {
    std::map<std::array<int, 4>, int> sig_ids;
    std::vector<int> next_cls(n);
    for (size_t q = 0; q < n; ++q) {
      std::array<int, 4> sig;
      sig[0] = cls[q];
      for (int sym = 0; sym < 3; ++sym) {
        int to = dfa.next[q][static_cast<size_t>(sym)];
        sig[static_cast<size_t>(sym) + 1] = to < 0 ? -1 : cls[static_cast<size_t>(to)];
      }
      auto [it, fresh] = sig_ids.emplace(sig, static_cast<int>(sig_ids.size()));
      (void)fresh;
      next_cls[q] = it->second;
    }
    if (next_cls == cls) break;
    cls = std::move(next_cls);
  }
  int classes = *std::max_element(cls.begin(), cls.end()) + 1;
  RawDfa out;
  out.next.resize(static_cast<size_t>(classes), {-1, -1, -1});
  out.accepting.resize(static_cast<size_t>(classes), 0);
  for (size_t q = 0; q < n; ++q) {
    int c = cls[q];
    out.accepting[static_cast<size_t>(c)] = dfa.accepting[q];
    for (int sym = 0; sym < 3; ++sym) {
      int to = dfa.next[q][static_cast<size_t>(sym)];
      out.next[static_cast<size_t>(c)][static_cast<size_t>(sym)] = to < 0 ? -1 : cls[static_cast<size_t>(to)];
    }
  }
  out.start = cls[static_cast<size_t>(dfa.start)];
  dfa = std::move(out);
}

// Stable state numbering: breadth-first from the start, symbols ascending.
Dfa renumber(const RawDfa& dfa) {
  std::vector<int> order(dfa.next.size(), -1);
  std::vector<int> bfs{dfa.start};
  order[static_cast<size_t>(dfa.start)] = 0;
  for (size_t head = 0; head < bfs.size(); ++head) {
    int q = bfs[head];
    for (int sym = 0; sym < 3; ++sym) {
      int to = dfa.next[static_cast<size_t>(q)][static_cast<size_t>(sym)];
      if (to >= 0 && order[static_cast<size_t>(to)] < 0) {
        order[static_cast<size_t>(to)] = static_cast<int>(bfs.size());
        bfs.push_back(to);
      }
    }
  }
  Dfa out;
  out.state_count = static_cast<int>(bfs.size());
  out.start = 0;
  out.accepting.resize(static_cast<size_t>(out.state_count), 0);
  out.next.resize(static_cast<size_t>(out.state_count), {-1, -1, -1});
  for (int q : bfs) {
    int nq = order[static_cast<size_t>(q)];
    out.accepting[static_cast<size_t>(nq)] = dfa.accepting[static_cast<size_t>(q)];
    for (int sym = 0; sym < 3; ++sym) {
      int to = dfa.next[static_cast<size_t>(q)][static_cast<size_t>(sym)];
      out.next[static_cast<size_t>(nq)][static_cast<size_t>(sym)] =
          to < 0 ? -1 : order[static_cast<size_t>(to)];
    }
  }
  return out;
}

}  // namespace

bool Dfa::accepts(std::span<const int> word) const {
  int q = start;
  for (int sym : word) {
    if (sym < 0 || sym > 2) return false;
    q = next[static_cast<size_t>(q)][static_cast<size_t>(sym)];
    if (q < 0) return false;
  }
  return accepting[static_cast<size_t>(q)] != 0;
}

Dfa compile(const PlacementRegex& regex) {
  Nfa nfa;
  auto [start, accept] = nfa.emit(regex.root);
  RawDfa dfa = determinize(nfa, start, accept);
  trim(dfa);
  minimize(dfa);
  return renumber(dfa);
}

BigInt count_accepted(const Dfa& dfa, int length) {
  if (length < 0) throw ModelError("word length must be non-negative");
  std::vector<BigInt> cur(static_cast<size_t>(dfa.state_count));
  cur[static_cast<size_t>(dfa.start)] = 1;
  for (int step = 0; step < length; ++step) {
    std::vector<BigInt> next_cnt(static_cast<size_t>(dfa.state_count));
    for (int q = 0; q < dfa.state_count; ++q) {
      if (cur[static_cast<size_t>(q)] == 0) continue;
      for (int sym = 0; sym < 3; ++sym) {
        int to = dfa.next[static_cast<size_t>(q)][static_cast<size_t>(sym)];
        if (to >= 0) next_cnt[static_cast<size_t>(to)] += cur[static_cast<size_t>(q)];
      }
    }
    cur = std::move(next_cnt);
  }
  BigInt total = 0;
  for (int q = 0; q < dfa.state_count; ++q)
    if (dfa.accepting[static_cast<size_t>(q)]) total += cur[static_cast<size_t>(q)];
  return total;
}

namespace {

// Deck slots as part indices, copies numbered in draw order.
std::vector<int> deck_slot_parts(const Instance& inst, const Deck& deck) {
  if (static_cast<int>(deck.size()) != inst.deck_len())
    throw ModelError("deck length " + std::to_string(deck.size()) + " differs from k=" +
                     std::to_string(inst.deck_len()));
  std::vector<int> seen(static_cast<size_t>(inst.max_digit()) + 1, 0);
  std::vector<int> slots(deck.size());
  for (size_t t = 0; t < deck.size(); ++t) {
    int d = deck[t];
    if (d < 0 || d > inst.max_digit())
      throw ModelError("deck digit " + std::to_string(d) + " outside 0.." +
                       std::to_string(inst.max_digit()));
    if (++seen[static_cast<size_t>(d)] > inst.copies())
      throw ModelError("deck uses digit " + std::to_string(d) + " more than " +
                       std::to_string(inst.copies()) + " times");
    slots[t] = d * inst.copies() + seen[static_cast<size_t>(d)];
  }
  return slots;
}

long long model_score_max(const Instance& inst) {
  if (inst.max_levels() <= 1) return 0;
  std::vector<int> values;
  if (inst.kind() == VariantKind::Known) {
    for (int d : inst.deck())
      values.push_back(d);
  } else {
    for (int d = inst.max_digit(); d >= 0 && static_cast<int>(values.size()) < inst.deck_len(); --d)
      for (int cpy = 0; cpy < inst.copies() && static_cast<int>(values.size()) < inst.deck_len(); ++cpy)
        values.push_back(d);
  }
  long long sum = 0;
  for (int v : values) sum += v;
  return sum * (inst.max_levels() - 1);
}

}  // namespace

ModelExport export_model(const Instance& inst) {
  ModelExport m;
  m.n = inst.part_count();
  m.k = inst.deck_len();
  m.s = inst.grid_side();
  m.l_top = inst.max_levels();
  m.part_digit.assign(static_cast<size_t>(m.n) + 1, 0);
  for (int p = 1; p <= m.n; ++p) m.part_digit[static_cast<size_t>(p)] = inst.part_digit(p);
  m.score_max = model_score_max(inst);

  m.instance_echo = inst.to_string() + " s=" + std::to_string(m.s) +
                    " levels=" + std::to_string(m.l_top);
  if (inst.kind() == VariantKind::Known) m.instance_echo += " deck=" + deck_to_string(inst.deck());

  auto add_var = [&](std::string name, std::vector<std::pair<int, int>> ranges, int lo, int hi,
                     std::pair<int, int> distinct = {-1, -1}, bool border = false) {
    VarDecl v;
    v.name = std::move(name);
    v.ranges = std::move(ranges);
    v.lo = lo;
    v.hi = hi;
    v.distinct_dims = distinct;
    v.border_zero = border;
    m.variables.push_back(std::move(v));
  };

  add_var("D", {{1, m.k}}, 1, m.n);
  if (inst.kind() == VariantKind::Known) {
    auto slots = deck_slot_parts(inst, inst.deck());
    for (int t = 1; t <= m.k; ++t)
      m.fixes.emplace_back(var_key("D", {t}), slots[static_cast<size_t>(t - 1)]);
  }
  add_var("O", {{1, m.n}}, 1, m.n);
  if (m.k < m.n) add_var("E", {{m.k + 1, m.n}}, 1, m.n);
  if (m.n >= 2) add_var("B", {{1, m.n}, {1, m.n}}, 0, 1, {0, 1});
  add_var("G", {{1, m.l_top}, {1, m.s}, {1, m.s}}, 0, m.n, {-1, -1}, true);
  add_var("Gp", {{1, m.l_top}, {1, m.n}, {1, m.s}, {1, m.s}}, 0, 2);
  add_var("G1", {{1, m.l_top}, {1, m.n}, {1, m.s}, {1, m.s}}, 0, 1);
  add_var("G2", {{1, m.l_top}, {1, m.n}, {1, m.s}, {1, m.s}}, 0, 1);
  add_var("Lpl", {{1, m.n}, {1, m.l_top}}, 0, 1);
  add_var("L", {{1, m.n}}, 0, m.l_top);
  add_var("Y", {{1, m.n}}, 0, 1);
  add_var("N", {{1, m.n}}, 0, 1);
  add_var("H", {{1, m.n}, {1, m.l_top}}, 0, 1);
  add_var("W", {{1, m.l_top}, {1, m.n}, {1, m.s}, {1, m.s}}, 0, 1);
  if (m.n >= 2 && m.l_top >= 2) add_var("T", {{1, m.n}, {2, m.l_top}, {1, m.n}}, 0, 1, {0, 2});
  add_var("S", {}, 0, static_cast<int>(m.score_max));

  auto rec = [&](int no, const char* kind, const char* form, std::vector<int> idx,
                 int automaton_digit = -1, int scope_len = 0) {
    ConstraintRecord r;
    r.no = no;
    r.kind = kind;
    r.form = form;
    r.idx = std::move(idx);
    r.automaton_digit = automaton_digit;
    r.scope_len = scope_len;
    m.constraints.push_back(std::move(r));
  };

  rec(1, "cardinality", "deck-count", {});
  for (int p = 1; p <= m.n; ++p)
    for (int l = 1; l <= m.l_top; ++l)
      rec(2, "regular", "placement-word", {p, l}, m.part_digit[static_cast<size_t>(p)],
          1 + m.s * m.s);
  rec(3, "inverse", "slot-inverse", {});
  for (int p = 1; p <= m.n; ++p)
    for (int q = 1; q <= m.n; ++q)
      if (q != p) rec(4, "order-channel", "pair-order", {p, q});
  for (int p = 1; p <= m.n; ++p) rec(4, "order-channel", "drawn-at", {p});
  for (int p = 1; p <= m.n; ++p) rec(5, "int-bool-channel", "level-indicator", {p});
  for (int p = 1; p <= m.n; ++p) rec(6, "iff", "placed-iff", {p});
  for (int l = 1; l <= m.l_top; ++l)
    for (int p = 1; p <= m.n; ++p) rec(7, "iff", "aspect", {l, p});
  for (int l = 1; l <= m.l_top; ++l)
    for (int p = 1; p <= m.n; ++p) rec(8, "iff", "grid-owner", {l, p});
  for (int l = 1; l <= m.l_top; ++l)
    for (int p = 1; p <= m.n; ++p) rec(9, "iff", "earlier-union", {l, p});
  for (int p = 1; p <= m.n; ++p)
    for (int l = 1; l <= m.l_top; ++l) rec(9, "iff", "earlier-on-level", {p, l});
  for (int p = 1; p <= m.n; ++p)
    for (int l = 1; l <= m.l_top; ++l) rec(9, "implication", "halo-contact", {p, l});
  for (int p = 1; p <= m.n; ++p)
    for (int l = 2; l <= m.l_top; ++l) rec(10, "implication", "support-below", {p, l});
  for (int p = 1; p <= m.n; ++p)
    for (int l = 2; l <= m.l_top; ++l)
      for (int q = 1; q <= m.n; ++q)
        if (q != p) rec(11, "iff", "rest-pair", {p, l, q});
  for (int p = 1; p <= m.n; ++p)
    for (int l = 2; l <= m.l_top; ++l) rec(11, "at-least-two-sum", "rest-count", {p, l});
  rec(12, "linear-objective", "score", {});

  for (int d = 0; d <= inst.max_digit(); ++d) {
    AutomatonEntry entry;
    entry.digit = d;
    PlacementRegex rx = build_regex(distinct_orientations(inst.catalog().shape(d)), m.s, d);
    entry.regex_text = rx.text();
    entry.dfa = compile(rx);
    m.automata.push_back(std::move(entry));
  }

  m.search_cells = spiral_order(m.s);
  return m;
}

std::string var_key(std::string_view name, std::span<const int> idx) {
  std::string key(name);
  for (int i : idx) {
    key += '[';
    key += std::to_string(i);
    key += ']';
  }
  return key;
}

std::string var_key(std::string_view name, std::initializer_list<int> idx) {
  return var_key(name, std::span<const int>(idx.begin(), idx.size()));
}

namespace {

// Formula text shown in the export; purely descriptive.
std::string record_formula(const ModelExport& m, const ConstraintRecord& c) {
  auto num = [](int v) { return std::to_string(v); };
  if (c.form == "deck-count")
    return "every part p occurs Y[p] times among D[1.." + num(m.k) + "]";
  if (c.form == "placement-word")
    return "word (Lpl[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "] then Gp[" + num(c.idx[1]) +
           "][" + num(c.idx[0]) + "] row-major) in L(A" + num(c.automaton_digit) + ")";
  if (c.form == "slot-inverse")
    return m.k < m.n ? "O[p] = t <-> slot t = p, slots (D[1.." + num(m.k) + "], E[" + num(m.k + 1) +
                           ".." + num(m.n) + "])"
                     : "O[p] = t <-> slot t = p, slots D[1.." + num(m.k) + "]";
  if (c.form == "pair-order")
    return "B[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "] <-> O[" + num(c.idx[0]) + "] < O[" +
           num(c.idx[1]) + "]";
  if (c.form == "drawn-at")
    return "O[" + num(c.idx[0]) + "] <= " + num(m.k) + " <-> Y[" + num(c.idx[0]) + "] = 1";
  if (c.form == "level-indicator")
    return "(N[" + num(c.idx[0]) + "], Lpl[" + num(c.idx[0]) + "][1.." + num(m.l_top) +
           "]) indicate L[" + num(c.idx[0]) + "] = 0, 1, ..";
  if (c.form == "placed-iff") return "Y[" + num(c.idx[0]) + "] = 1 - N[" + num(c.idx[0]) + "]";
  if (c.form == "aspect")
    return "G1[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "][i][j] = [Gp = 1], G2[" + num(c.idx[0]) +
           "][" + num(c.idx[1]) + "][i][j] = [Gp = 2]";
  if (c.form == "grid-owner")
    return "G[" + num(c.idx[0]) + "][i][j] = " + num(c.idx[1]) + " <-> Gp[" + num(c.idx[0]) + "][" +
           num(c.idx[1]) + "][i][j] = 1";
  if (c.form == "earlier-union")
    return "W[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "][i][j] = OR_q (B[q][" + num(c.idx[1]) +
           "] and G1[" + num(c.idx[0]) + "][q][i][j])";
  if (c.form == "earlier-on-level")
    return "H[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "] = OR_q (B[q][" + num(c.idx[0]) +
           "] and Lpl[q][" + num(c.idx[1]) + "])";
  if (c.form == "halo-contact")
    return "Lpl[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "] and H[" + num(c.idx[0]) + "][" +
           num(c.idx[1]) + "] -> EX i,j: G2[" + num(c.idx[1]) + "][" + num(c.idx[0]) +
           "][i][j] and W[" + num(c.idx[1]) + "][" + num(c.idx[0]) + "][i][j]";
  if (c.form == "support-below")
    return "G1[" + num(c.idx[1]) + "][" + num(c.idx[0]) + "][i][j] -> W[" + num(c.idx[1] - 1) +
           "][" + num(c.idx[0]) + "][i][j]";
  if (c.form == "rest-pair")
    return "T[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "][" + num(c.idx[2]) + "] = B[" +
           num(c.idx[2]) + "][" + num(c.idx[0]) + "] and EX i,j: G1[" + num(c.idx[1]) + "][" +
           num(c.idx[0]) + "][i][j] and G1[" + num(c.idx[1] - 1) + "][" + num(c.idx[2]) +
           "][i][j]";
  if (c.form == "rest-count")
    return "Lpl[" + num(c.idx[0]) + "][" + num(c.idx[1]) + "] -> SUM_q T[" + num(c.idx[0]) + "][" +
           num(c.idx[1]) + "][q] >= 2";
  if (c.form == "score") return "S = SUM_p (L[p] - Y[p]) * value(p)";
  throw ModelError("unknown constraint form " + c.form);
}

std::string record_indices(const ConstraintRecord& c) {
  auto num = [](int v) { return std::to_string(v); };
  if (c.form == "placement-word" || c.form == "earlier-on-level" || c.form == "halo-contact" ||
      c.form == "support-below" || c.form == "rest-count")
    return " part=" + num(c.idx[0]) + " level=" + num(c.idx[1]);
  if (c.form == "aspect" || c.form == "grid-owner" || c.form == "earlier-union")
    return " level=" + num(c.idx[0]) + " part=" + num(c.idx[1]);
  if (c.form == "pair-order") return " part=" + num(c.idx[0]) + " other=" + num(c.idx[1]);
  if (c.form == "rest-pair")
    return " part=" + num(c.idx[0]) + " level=" + num(c.idx[1]) + " other=" + num(c.idx[2]);
  if (c.form == "drawn-at" || c.form == "level-indicator" || c.form == "placed-iff")
    return " part=" + num(c.idx[0]);
  return "";
}

}  // namespace

std::string model_to_text(const ModelExport& m) {
  std::string out;
  out += "nmbr9-model 1\n";
  out += "instance " + m.instance_echo + "\n";
  out += "parts " + std::to_string(m.n) + "\n";
  for (int p = 1; p <= m.n; ++p)
    out += "part " + std::to_string(p) + " digit=" +
           std::to_string(m.part_digit[static_cast<size_t>(p)]) + "\n";

  out += "[variables]\n";
  for (const auto& v : m.variables) {
    out += "var " + v.name;
    for (auto [lo, hi] : v.ranges)
      out += "[" + std::to_string(lo) + ".." + std::to_string(hi) + "]";
    out += " in " + std::to_string(v.lo) + ".." + std::to_string(v.hi);
    if (v.distinct_dims.first >= 0)
      out += " distinct dims " + std::to_string(v.distinct_dims.first + 1) + "," +
             std::to_string(v.distinct_dims.second + 1);
    if (v.border_zero) out += " border=0";
    out += "\n";
    if (v.name == "D")
      for (const auto& [key, value] : m.fixes)
        out += "fix " + key + "=" + std::to_string(value) + "\n";
  }

  out += "[constraints]\n";
  int seq = 0;
  for (const auto& c : m.constraints) {
    out += "con " + std::to_string(++seq) + " no=" + std::to_string(c.no) + " kind=" + c.kind +
           " form=" + c.form + record_indices(c);
    if (c.form == "placement-word")
      out += " automaton=A" + std::to_string(c.automaton_digit) +
             " scope_len=" + std::to_string(c.scope_len);
    out += " : " + record_formula(m, c) + "\n";
  }

  out += "[automata]\n";
  for (const auto& a : m.automata) {
    std::string name = "A" + std::to_string(a.digit);
    out += "automaton " + name + " states=" + std::to_string(a.dfa.state_count) +
           " start=" + std::to_string(a.dfa.start) + " accepting=";
    bool first = true;
    for (int q = 0; q < a.dfa.state_count; ++q)
      if (a.dfa.accepting[static_cast<size_t>(q)]) {
        if (!first) out += ",";
        out += std::to_string(q);
        first = false;
      }
    out += "\n";
    out += "regex " + name + " " + a.regex_text + "\n";
    for (int q = 0; q < a.dfa.state_count; ++q)
      for (int sym = 0; sym < 3; ++sym)
        if (int to = a.dfa.next[static_cast<size_t>(q)][static_cast<size_t>(sym)]; to >= 0)
          out += "trans " + name + " " + std::to_string(q) + " " + std::to_string(sym) + " " +
                 std::to_string(to) + "\n";
  }

  out += "[search]\n";
  out += "decisions deck levels placements\n";
  out += "spiral";
  for (Cell cell : m.search_cells)
    out += " " + std::to_string(cell.row + 1) + "," + std::to_string(cell.col + 1);
  out += "\n";
  return out;
}

namespace {

struct Eval {
  const ModelExport& m;
  const Assignment& a;

  long long get(const std::string& key) const {
    auto it = a.find(key);
    if (it == a.end()) throw ModelError("missing value for " + key);
    return it->second;
  }
  long long v1(std::string_view name, int i) const { return get(var_key(name, {i})); }
  long long v2(std::string_view name, int i, int j) const { return get(var_key(name, {i, j})); }
  long long v3(std::string_view name, int i, int j, int k) const {
    return get(var_key(name, {i, j, k}));
  }
  long long v4(std::string_view name, int i, int j, int k, int l) const {
    return get(var_key(name, {i, j, k, l}));
  }

  int slot_part(int t) const {
    return static_cast<int>(t <= m.k ? v1("D", t) : v1("E", t));
  }

  const Dfa& dfa_for_digit(int digit) const {
    for (const auto& entry : m.automata)
      if (entry.digit == digit) return entry.dfa;
    throw ModelError("no automaton for digit " + std::to_string(digit));
  }

  // Empty when the record holds; otherwise index detail for the report.
  std::optional<std::string> violated(const ConstraintRecord& c) const {
    const int n = m.n, k = m.k, s = m.s, l_top = m.l_top;
    auto cell_txt = [](int i, int j) {
      return " cell=(" + std::to_string(i) + "," + std::to_string(j) + ")";
    };
    if (c.form == "deck-count") {
      for (int p = 1; p <= n; ++p) {
        long long cnt = 0;
        for (int t = 1; t <= k; ++t)
          if (v1("D", t) == p) ++cnt;
        if (cnt != v1("Y", p)) return " part=" + std::to_string(p);
      }
      return std::nullopt;
    }
    if (c.form == "placement-word") {
      int p = c.idx[0], l = c.idx[1];
      std::vector<int> word;
      word.reserve(static_cast<size_t>(1 + s * s));
      word.push_back(static_cast<int>(v2("Lpl", p, l)));
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j) word.push_back(static_cast<int>(v4("Gp", l, p, i, j)));
      if (!dfa_for_digit(m.part_digit[static_cast<size_t>(p)]).accepts(word)) return "";
      return std::nullopt;
    }
    if (c.form == "slot-inverse") {
      for (int t = 1; t <= n; ++t) {
        int p = slot_part(t);
        if (p < 1 || p > n || v1("O", p) != t) return " slot=" + std::to_string(t);
      }
      for (int p = 1; p <= n; ++p) {
        long long t = v1("O", p);
        if (t < 1 || t > n || slot_part(static_cast<int>(t)) != p)
          return " part=" + std::to_string(p);
      }
      return std::nullopt;
    }
    if (c.form == "pair-order") {
      int p = c.idx[0], q = c.idx[1];
      if (v2("B", p, q) != (v1("O", p) < v1("O", q) ? 1 : 0)) return "";
      return std::nullopt;
    }
    if (c.form == "drawn-at") {
      int p = c.idx[0];
      if ((v1("O", p) <= k ? 1 : 0) != v1("Y", p)) return "";
      return std::nullopt;
    }
    if (c.form == "level-indicator") {
      int p = c.idx[0];
      long long lp = v1("L", p);
      if (v1("N", p) != (lp == 0 ? 1 : 0)) return "";
      for (int l = 1; l <= l_top; ++l)
        if (v2("Lpl", p, l) != (lp == l ? 1 : 0)) return " level=" + std::to_string(l);
      return std::nullopt;
    }
    if (c.form == "placed-iff") {
      int p = c.idx[0];
      if (v1("Y", p) != 1 - v1("N", p)) return "";
      return std::nullopt;
    }
    if (c.form == "aspect") {
      int l = c.idx[0], p = c.idx[1];
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j) {
          long long gp = v4("Gp", l, p, i, j);
          if (v4("G1", l, p, i, j) != (gp == 1 ? 1 : 0)) return cell_txt(i, j);
          if (v4("G2", l, p, i, j) != (gp == 2 ? 1 : 0)) return cell_txt(i, j);
        }
      return std::nullopt;
    }
    if (c.form == "grid-owner") {
      int l = c.idx[0], p = c.idx[1];
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j)
          if ((v3("G", l, i, j) == p ? 1 : 0) != (v4("Gp", l, p, i, j) == 1 ? 1 : 0))
            return cell_txt(i, j);
      return std::nullopt;
    }
    if (c.form == "earlier-union") {
      int l = c.idx[0], p = c.idx[1];
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j) {
          int expect = 0;
          for (int q = 1; q <= n && !expect; ++q)
            if (q != p && v2("B", q, p) == 1 && v4("G1", l, q, i, j) == 1) expect = 1;
          if (v4("W", l, p, i, j) != expect) return cell_txt(i, j);
        }
      return std::nullopt;
    }
    if (c.form == "earlier-on-level") {
      int p = c.idx[0], l = c.idx[1];
      int expect = 0;
      for (int q = 1; q <= n && !expect; ++q)
        if (q != p && v2("B", q, p) == 1 && v2("Lpl", q, l) == 1) expect = 1;
      if (v2("H", p, l) != expect) return "";
      return std::nullopt;
    }
    if (c.form == "halo-contact") {
      int p = c.idx[0], l = c.idx[1];
      if (v2("Lpl", p, l) != 1 || v2("H", p, l) != 1) return std::nullopt;
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j)
          if (v4("G2", l, p, i, j) == 1 && v4("W", l, p, i, j) == 1) return std::nullopt;
      return "";
    }
    if (c.form == "support-below") {
      int p = c.idx[0], l = c.idx[1];
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j)
          if (v4("G1", l, p, i, j) == 1 && v4("W", l - 1, p, i, j) != 1) return cell_txt(i, j);
      return std::nullopt;
    }
    if (c.form == "rest-pair") {
      int p = c.idx[0], l = c.idx[1], q = c.idx[2];
      int expect = 0;
      if (v2("B", q, p) == 1)
        for (int i = 1; i <= s && !expect; ++i)
          for (int j = 1; j <= s && !expect; ++j)
            if (v4("G1", l, p, i, j) == 1 && v4("G1", l - 1, q, i, j) == 1) expect = 1;
      if (v3("T", p, l, q) != expect) return "";
      return std::nullopt;
    }
    if (c.form == "rest-count") {
      int p = c.idx[0], l = c.idx[1];
      if (v2("Lpl", p, l) != 1) return std::nullopt;
      long long sum = 0;
      for (int q = 1; q <= n; ++q)
        if (q != p) sum += v3("T", p, l, q);
      if (sum < 2) return "";
      return std::nullopt;
    }
    if (c.form == "score") {
      long long sum = 0;
      for (int p = 1; p <= n; ++p)
        sum += (v1("L", p) - v1("Y", p)) * m.part_digit[static_cast<size_t>(p)];
      if (get("S") != sum) return "";
      return std::nullopt;
    }
    throw ModelError("unknown constraint form " + c.form);
  }
};

// Expands a declaration into its flat keys, honoring distinct dimensions.
void for_each_entry(const VarDecl& v, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(v.ranges.size());
  std::function<void(size_t)> walk = [&](size_t dim) {
    if (dim == v.ranges.size()) {
      if (v.distinct_dims.first >= 0 &&
          idx[static_cast<size_t>(v.distinct_dims.first)] ==
              idx[static_cast<size_t>(v.distinct_dims.second)])
        return;
      fn(idx);
      return;
    }
    for (int i = v.ranges[dim].first; i <= v.ranges[dim].second; ++i) {
      idx[dim] = i;
      walk(dim + 1);
    }
  };
  walk(0);
}

}  // namespace

std::optional<std::string> verify_assignment(const ModelExport& m, const Assignment& assignment) {
  std::unordered_set<std::string> declared;
  for (const auto& v : m.variables) {
    for_each_entry(v, [&](const std::vector<int>& idx) {
      std::string key = var_key(v.name, idx);
      auto it = assignment.find(key);
      if (it == assignment.end()) throw ModelError("missing value for " + key);
      if (it->second < v.lo || it->second > v.hi)
        throw ModelError("value of " + key + " outside " + std::to_string(v.lo) + ".." +
                         std::to_string(v.hi));
      if (v.border_zero && it->second != 0) {
        int i = idx[idx.size() - 2], j = idx[idx.size() - 1];
        if (i == 1 || i == m.s || j == 1 || j == m.s)
          throw ModelError("value of " + key + " violates the fixed-0 border");
      }
      declared.insert(std::move(key));
    });
  }
  for (const auto& [key, value] : m.fixes) {
    auto it = assignment.find(key);
    if (it == assignment.end()) throw ModelError("missing value for " + key);
    if (it->second != value)
      throw ModelError("fixed variable " + key + " must be " + std::to_string(value));
  }
  for (const auto& [key, value] : assignment) {
    (void)value;
    if (!declared.count(key)) throw ModelError("unknown variable " + key);
  }

  Eval eval{m, assignment};
  for (const auto& c : m.constraints) {
    if (auto detail = eval.violated(c))
      return "constraint (" + std::to_string(c.no) + ") " + c.form + record_indices(c) + *detail;
  }
  return std::nullopt;
}

Assignment assignment_from_placements(const Instance& inst, const Deck& deck,
                                      std::span<const Placement> play) {
  const int n = inst.part_count(), k = inst.deck_len(), s = inst.grid_side(),
            l_top = inst.max_levels();
  Assignment a;

  auto drawn = deck_slot_parts(inst, deck);
  std::vector<int> slot_part(static_cast<size_t>(n) + 1, 0);
  std::vector<char> used(static_cast<size_t>(n) + 1, 0);
  for (int t = 1; t <= k; ++t) {
    slot_part[static_cast<size_t>(t)] = drawn[static_cast<size_t>(t - 1)];
    used[static_cast<size_t>(drawn[static_cast<size_t>(t - 1)])] = 1;
  }
  int next_slot = k;
  for (int p = 1; p <= n; ++p)
    if (!used[static_cast<size_t>(p)]) slot_part[static_cast<size_t>(++next_slot)] = p;

  std::vector<int> order(static_cast<size_t>(n) + 1, 0);
  for (int t = 1; t <= n; ++t) order[static_cast<size_t>(slot_part[static_cast<size_t>(t)])] = t;

  for (int t = 1; t <= k; ++t) a[var_key("D", {t})] = slot_part[static_cast<size_t>(t)];
  for (int t = k + 1; t <= n; ++t) a[var_key("E", {t})] = slot_part[static_cast<size_t>(t)];
  for (int p = 1; p <= n; ++p) a[var_key("O", {p})] = order[static_cast<size_t>(p)];
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      if (q != p)
        a[var_key("B", {p, q})] =
            order[static_cast<size_t>(p)] < order[static_cast<size_t>(q)] ? 1 : 0;

  // Per-part grids and the owner grid, written mechanically from the play.
  auto flat = [&](int l, int p, int i, int j) {
    return ((static_cast<size_t>(l - 1) * static_cast<size_t>(n) + static_cast<size_t>(p - 1)) *
                static_cast<size_t>(s) +
            static_cast<size_t>(i - 1)) *
               static_cast<size_t>(s) +
           static_cast<size_t>(j - 1);
  };
  std::vector<std::uint8_t> gp(static_cast<size_t>(l_top) * static_cast<size_t>(n) *
                                   static_cast<size_t>(s) * static_cast<size_t>(s),
                               0);
  std::vector<int> owner(static_cast<size_t>(l_top) * static_cast<size_t>(s) *
                             static_cast<size_t>(s),
                         0);
  std::vector<int> level_of(static_cast<size_t>(n) + 1, 0);

  for (const Placement& pl : play) {
    if (pl.card_index < 1 || pl.card_index > k)
      throw ModelError("placement card index " + std::to_string(pl.card_index) + " outside 1.." +
                       std::to_string(k));
    int part = slot_part[static_cast<size_t>(pl.card_index)];
    if (inst.part_digit(part) != pl.digit)
      throw ModelError("placement digit differs from the deck at card " +
                       std::to_string(pl.card_index));
    auto orients = inst.orientations(pl.digit);
    if (pl.orientation < 0 || pl.orientation >= static_cast<int>(orients.size()))
      throw ModelError("no such orientation at card " + std::to_string(pl.card_index));
    if (pl.level < 1 || pl.level > l_top)
      throw ModelError("level outside 1.." + std::to_string(l_top) + " at card " +
                       std::to_string(pl.card_index));
    const OrientedShape& os = orients[static_cast<size_t>(pl.orientation)];
    auto put = [&](Cell c, std::uint8_t sym) {
      int i = pl.row + c.row + 1, j = pl.col + c.col + 1;
      if (i < 1 || i > s || j < 1 || j > s)
        throw ModelError("placement leaves the bordered grid at card " +
                         std::to_string(pl.card_index));
      gp[flat(pl.level, part, i, j)] = sym;
      if (sym == 1) owner[(static_cast<size_t>(pl.level - 1) * static_cast<size_t>(s) +
                           static_cast<size_t>(i - 1)) *
                              static_cast<size_t>(s) +
                          static_cast<size_t>(j - 1)] = part;
    };
    for (Cell c : os.shape.cells()) put(c, 1);
    for (Cell c : os.halo) put(c, 2);
    level_of[static_cast<size_t>(part)] = pl.level;
  }

  for (int l = 1; l <= l_top; ++l)
    for (int p = 1; p <= n; ++p)
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j) {
          int sym = gp[flat(l, p, i, j)];
          a[var_key("Gp", {l, p, i, j})] = sym;
          a[var_key("G1", {l, p, i, j})] = sym == 1 ? 1 : 0;
          a[var_key("G2", {l, p, i, j})] = sym == 2 ? 1 : 0;
        }
  for (int l = 1; l <= l_top; ++l)
    for (int i = 1; i <= s; ++i)
      for (int j = 1; j <= s; ++j)
        a[var_key("G", {l, i, j})] = owner[(static_cast<size_t>(l - 1) * static_cast<size_t>(s) +
                                            static_cast<size_t>(i - 1)) *
                                               static_cast<size_t>(s) +
                                           static_cast<size_t>(j - 1)];

  long long score_sum = 0;
  for (int p = 1; p <= n; ++p) {
    int lv = level_of[static_cast<size_t>(p)];
    int y = order[static_cast<size_t>(p)] <= k ? 1 : 0;
    a[var_key("L", {p})] = lv;
    a[var_key("N", {p})] = lv == 0 ? 1 : 0;
    a[var_key("Y", {p})] = y;
    for (int l = 1; l <= l_top; ++l) a[var_key("Lpl", {p, l})] = lv == l ? 1 : 0;
    score_sum += static_cast<long long>(lv - y) * inst.part_digit(p);
  }

  for (int p = 1; p <= n; ++p)
    for (int l = 1; l <= l_top; ++l) {
      int h = 0;
      for (int q = 1; q <= n && !h; ++q)
        if (q != p && order[static_cast<size_t>(q)] < order[static_cast<size_t>(p)] &&
            level_of[static_cast<size_t>(q)] == l)
          h = 1;
      a[var_key("H", {p, l})] = h;
    }
  for (int l = 1; l <= l_top; ++l)
    for (int p = 1; p <= n; ++p)
      for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j) {
          int w = 0;
          for (int q = 1; q <= n && !w; ++q)
            if (q != p && order[static_cast<size_t>(q)] < order[static_cast<size_t>(p)] &&
                gp[flat(l, q, i, j)] == 1)
              w = 1;
          a[var_key("W", {l, p, i, j})] = w;
        }
  if (n >= 2 && l_top >= 2)
    for (int p = 1; p <= n; ++p)
      for (int l = 2; l <= l_top; ++l)
        for (int q = 1; q <= n; ++q) {
          if (q == p) continue;
          int t = 0;
          if (order[static_cast<size_t>(q)] < order[static_cast<size_t>(p)])
            for (int i = 1; i <= s && !t; ++i)
              for (int j = 1; j <= s && !t; ++j)
                if (gp[flat(l, p, i, j)] == 1 && gp[flat(l - 1, q, i, j)] == 1) t = 1;
          a[var_key("T", {p, l, q})] = t;
        }

  a["S"] = score_sum;
  return a;
}

}  // namespace nmbr9
