// Declarative counterpart of the rules engine: per-digit placement regular
// expressions over the alphabet {0,1,2}, compilation to minimal automata,
// a deterministic export of the full deck-and-placement constraint model
// (twelve constraint families, numbered 1..12 in the export), and a verifier
// for assignments produced by third-party solvers.
//
// Placement words. A word describes one part's view of one level: a control
// symbol (1 = the part sits on this level, 0 = it does not) followed by the
// s*s grid cells row-major, where 1 marks a cell of the part, 2 marks a cell
// of its exterior halo, and 0 marks everything else (enclosed holes included).
// The regex for a digit accepts, at word length 1+s*s, exactly the words of
// its legal single-part placements (margin-respecting anchors of every
// distinct orientation) plus the all-zero word.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nmbr9/rules.hpp"
#include "nmbr9/shapes.hpp"

namespace nmbr9 {

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Regex AST over the symbols 0, 1, 2.
struct Regex {
  enum class Kind { sym, seq, alt, rep };

  Kind kind = Kind::sym;
  int sym = 0;                  // kind == sym: the symbol 0..2
  std::vector<Regex> children;  // seq/alt: the parts; rep: exactly one child
  int rep_min = 0;              // kind == rep
  int rep_max = 0;              // kind == rep; -1 means unbounded

  static Regex symbol(int sym);
  static Regex run(int sym, int count);           // sym^count, count >= 1
  static Regex between(int sym, int lo, int hi);  // sym^{lo,hi}
  static Regex star(int sym);                     // sym*
  static Regex sequence(std::vector<Regex> parts);
  static Regex any_of(std::vector<Regex> choices);
  static Regex repeat(Regex child, int lo, int hi);  // (child)^{lo,hi}
};

// Canonical text: tokens separated by single spaces; exact runs print as
// `0^4` (bare symbol when the count is 1), bounded repeats as `0^{1,4}`,
// repeated groups as `(0^8)^{0,2}`, unbounded zero fill as `0*`, and
// alternatives as `A | B` (parenthesized inside a sequence).
std::string regex_to_text(const Regex& r);

// The placement language of one digit on an s x s grid. The accepted words
// of length 1+s*s are `1` + grid-with-stamp for each legal anchor of each
// fitting orientation, and `0` + all-zero grid. Each orientation contributes
// one alternative: an alignment prefix `(0^s)^{0,R-1} 0^{f,f+C-1}` (R legal
// anchor rows, C legal anchor columns, f the column of the first stamp
// symbol for the leftmost anchor) followed by the stamp body written
// row-major with inter-row gaps as 0-runs, with `0*` filling the remainder
// and the `| 0 0*` tail covering the empty grid. Orientations too large for
// the margin contribute nothing; if none fit the regex is just `0 0*`.
struct PlacementRegex {
  Regex root;
  int digit = 0;
  int grid_side = 0;

  std::string text() const { return regex_to_text(root); }
};

// Builds the placement regex for one digit's orientation set.
PlacementRegex build_regex(const OrientationSet& orientations, int grid_side, int digit);

// Deterministic finite automaton over symbols 0..2. Missing transitions
// (-1) reject. States are numbered canonically: breadth-first from the
// start, trying symbols in ascending order.
struct Dfa {
  int state_count = 0;
  int start = 0;
  std::vector<std::uint8_t> accepting;   // [state_count]
  std::vector<std::array<int, 3>> next;  // [state_count]; -1 = reject

  bool accepts(std::span<const int> word) const;
};

// Thompson construction, subset construction, then minimization; the result
// has no dead or unreachable states.
Dfa compile(const PlacementRegex& regex);

using BigInt = boost::multiprecision::cpp_int;

// Number of accepted words of exactly `length`, by dynamic programming over
// the transition table.
BigInt count_accepted(const Dfa& dfa, int length);

// One declared variable family. Entries where the dimensions named by
// `distinct_dims` coincide do not exist (used for pair-indexed booleans).
struct VarDecl {
  std::string name;
  std::vector<std::pair<int, int>> ranges;  // per dimension, inclusive
  int lo = 0;
  int hi = 0;
  std::pair<int, int> distinct_dims{-1, -1};  // 0-based dimension indices
  bool border_zero = false;  // last two dims are grid cells; border forced 0
};

// One exported constraint. `no` is the constraint family 1..12; `form`
// selects the concrete formula and fixes the meaning of `idx`:
//   no=1  deck-count        idx {}          each part occurs Y[p] times in D
//   no=2  placement-word    idx {p,l}       (Lpl[p][l], Gp[l][p] row-major) in L(A)
//   no=3  slot-inverse      idx {}          O inverts the slot vector D (then E)
//   no=4  pair-order        idx {p,q}       B[p][q] <-> O[p] < O[q]
//   no=4  drawn-at          idx {p}         O[p] <= k <-> Y[p]
//   no=5  level-indicator   idx {p}         (N[p], Lpl[p][*]) indicate L[p]
//   no=6  placed-iff        idx {p}         Y[p] = 1 - N[p]
//   no=7  aspect            idx {l,p}       G1/G2 mirror Gp = 1 / Gp = 2
//   no=8  grid-owner        idx {l,p}       G[l][i][j] = p <-> Gp[l][p][i][j] = 1
//   no=9  earlier-union     idx {l,p}       W[l][p] = union of earlier parts' cells
//   no=9  earlier-on-level  idx {p,l}       H[p][l] = some earlier part on level l
//   no=9  halo-contact      idx {p,l}       placed beside earlier parts -> halo touch
//   no=10 support-below     idx {p,l}       cells on level l sit on earlier cells below
//   no=11 rest-pair         idx {p,l,q}     T[p][l][q] = p rests on earlier part q
//   no=11 rest-count        idx {p,l}       on level l >= 2, p rests on >= 2 parts
//   no=12 score             idx {}          S = sum (L[p] - Y[p]) * value(p)
struct ConstraintRecord {
  int no = 0;
  std::string kind;  // cardinality, regular, inverse, order-channel,
                     // int-bool-channel, iff, implication,
                     // at-least-two-sum, linear-objective
  std::string form;
  std::vector<int> idx;
  int automaton_digit = -1;  // placement-word only
  int scope_len = 0;         // placement-word only: 1 + s*s
};

struct AutomatonEntry {
  int digit = 0;
  std::string regex_text;  // kept alongside the table for audit
  Dfa dfa;
};

// A complete, deterministic model for one instance. Parts are numbered as in
// Instance; variables are declared in a fixed order, constraints are listed
// by family then index, automata are deduplicated per digit.
struct ModelExport {
  std::string instance_echo;
  int n = 0;      // parts
  int k = 0;      // deck length
  int s = 0;      // grid side
  int l_top = 0;  // level cap
  std::vector<int> part_digit;  // [n + 1], entry 0 unused
  std::vector<VarDecl> variables;
  std::vector<std::pair<std::string, int>> fixes;  // fixed deck slots (K)
  std::vector<ConstraintRecord> constraints;
  std::vector<AutomatonEntry> automata;  // ascending digit
  std::vector<Cell> search_cells;        // spiral order, 0-based engine cells
  long long score_max = 0;               // upper end of the S domain
};

ModelExport export_model(const Instance& instance);

// Serializes the export: header, then sections [variables], [constraints],
// [automata], [search]. Byte-identical for identical instances; schema
// documented in docs/model_format.md.
std::string model_to_text(const ModelExport& model);

// Assignments map flat variable keys ("Gp[1][2][3][4]", "S") to values.
using Assignment = std::map<std::string, long long>;

std::string var_key(std::string_view name, std::span<const int> idx);
std::string var_key(std::string_view name, std::initializer_list<int> idx);

// Checks every declared variable for presence and domain (throws ModelError
// on missing, unknown, or out-of-domain values), then every constraint in
// export order. Returns std::nullopt when all hold, else a description of
// the first violated constraint, e.g. "constraint (11) rest-count part=3
// level=2".
std::optional<std::string> verify_assignment(const ModelExport& model,
                                             const Assignment& assignment);

// Transcribes an engine play into a model assignment (all families,
// auxiliaries included). The deck must be the play's draw sequence; for a
// terminal play the result satisfies every constraint of the instance's
// export with S equal to the engine score. Illegal or partial plays
// transcribe mechanically and fail verification instead.
Assignment assignment_from_placements(const Instance& instance, const Deck& deck,
                                      std::span<const Placement> play);

}  // namespace nmbr9
