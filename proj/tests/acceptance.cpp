// End-to-end acceptance checks, one per shipped guarantee. Each criterion
// prints exactly one PASS/FAIL line; the process exits nonzero when any
// criterion fails. Every check goes through the public library APIs only.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nmbr9/oracle.hpp"
#include "nmbr9/regex_model.hpp"
#include "nmbr9/rules.hpp"
#include "nmbr9/shapes.hpp"
#include "nmbr9/solver.hpp"

using namespace nmbr9;

namespace {

int failures = 0;

struct Criterion {
  bool ok = true;
  std::string detail;  // failure reason, or extra info on success

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void note(const std::string& info) {
    if (ok) detail = info;
  }
};

void criterion(int no, const char* title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  std::string line = std::string(c.ok ? "PASS" : "FAIL") + " criterion " + std::to_string(no) +
                     ": " + title;
  if (!c.detail.empty()) line += " (" + c.detail + ")";
  std::printf("%s\n", line.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Number of `2` symbols inside one regex alternative, counting run lengths.
int halo_symbols(const std::string& alternative) {
  std::istringstream in(alternative);
  std::string token;
  int total = 0;
  while (in >> token) {
    if (token == "2")
      ++total;
    else if (token.rfind("2^", 0) == 0)
      total += std::stoi(token.substr(2));
  }
  return total;
}

// First placements of a shape, enumerated with nothing but explicit
// in-bounds tests on every covered cell (interior rows/cols 1..s-2).
int direct_first_placements(const Shape& base, int s) {
  int total = 0;
  for (const Shape& o : distinct_orientations(base)) {
    for (int r = 0; r + o.height() <= s; ++r)
      for (int c = 0; c + o.width() <= s; ++c) {
        bool ok = true;
        for (Cell cell : o.cells()) {
          int i = r + cell.row, j = c + cell.col;
          if (i < 1 || i > s - 2 || j < 1 || j > s - 2) ok = false;
        }
        if (ok) ++total;
      }
  }
  return total;
}

int regular_records(const ModelExport& m) {
  int total = 0;
  for (const ConstraintRecord& c : m.constraints)
    if (c.no == 2 && c.kind == "regular") ++total;
  return total;
}

// Enumerates every deck of `len` digits drawn from 0..max_digit.
void for_each_deck(int max_digit, int len, const std::function<void(const Deck&)>& visit) {
  Deck deck(static_cast<size_t>(len), 0);
  while (true) {
    visit(deck);
    int i = len - 1;
    while (i >= 0 && deck[static_cast<size_t>(i)] == max_digit) deck[static_cast<size_t>(i--)] = 0;
    if (i < 0) return;
    ++deck[static_cast<size_t>(i)];
  }
}

bool starts_with(const std::string& text, const std::string& prefix) {
  return text.rfind(prefix, 0) == 0;
}

}  // namespace

int main() {
  const ShapeCatalog& catalog = ShapeCatalog::bundled_default();

  criterion(1, "an 8-part scores 16 on level 3 and level-1 parts score 0", [&](Criterion& c) {
    // A hand-verified stack: four parts on level 1, two 9s on level 2, and
    // the 8 on level 3. Every push below is validated by the rules engine.
    Instance inst =
        Instance::make(parse_variant("K-9-2-7"), 10, 3, catalog, Deck{0, 2, 5, 3, 9, 9, 8});
    const std::vector<Placement> play = {
        {1, 0, 1, 0, 1, 1, 1}, {2, 2, 1, 0, 1, 4, 1}, {3, 5, 1, 0, 5, 2, 1},
        {4, 3, 1, 1, 5, 5, 1}, {5, 9, 1, 0, 1, 3, 2}, {6, 9, 2, 2, 4, 3, 2},
        {7, 8, 1, 0, 1, 3, 3},
    };
    BoardState st = BoardState::initial(inst);
    for (int i = 0; i < 4; ++i) st.push(play[static_cast<size_t>(i)]);
    c.require(st.score() == 0, "four level-1 parts must score 0 in total");
    st.push(play[4]);
    st.push(play[5]);
    int before_eight = st.score();
    st.push(play[6]);
    c.require(st.score() - before_eight == 16, "the 8 on level 3 must add exactly 16");
    int arithmetic = 0;
    for (const Placement& p : st.placements()) arithmetic += p.digit * (p.level - 1);
    c.require(st.score() == arithmetic, "engine score must equal sum digit*(level-1)");
    c.require(st.score() == 34, "witness stack must total 9+9 on level 2 plus 16");
  });

  criterion(2, "the digit-0 placement regex matches the frozen text token for token",
            [&](Criterion& c) {
              PlacementRegex rx = build_regex(distinct_orientations(catalog.shape(0)), 8, 0);
              std::string text = rx.text();
              c.require(text + "\n" == read_file(std::string(GOLDEN_DIR) + "/r0_s8.txt"),
                        "regex text differs from the golden file");
              size_t open = text.find("( ");
              size_t close = text.rfind(" ) 0*");
              c.require(open != std::string::npos && close != std::string::npos && open < close,
                        "expected one parenthesized orientation group");
              std::string inside = text.substr(open + 2, close - open - 2);
              size_t bar = inside.find(" | ");
              c.require(bar != std::string::npos, "expected two orientation alternatives");
              c.require(halo_symbols(inside.substr(0, bar)) == 14 &&
                            halo_symbols(inside.substr(bar + 3)) == 14,
                        "each orientation alternative must carry fourteen halo symbols");
              c.require(text.find("2 1 0 1 2") != std::string::npos,
                        "interior hole cells must stay 0 between part cells");
              c.require(text.size() >= 6 && text.substr(text.size() - 6) == "| 0 0*",
                        "the not-on-this-level tail must be `| 0 0*`");
            });

  criterion(3, "automaton word counts equal direct placement enumeration plus one",
            [&](Criterion& c) {
              for (int s : {6, 8, 10})
                for (int d = 0; d <= 9; ++d) {
                  Dfa dfa = compile(build_regex(distinct_orientations(catalog.shape(d)), s, d));
                  BigInt counted = count_accepted(dfa, 1 + s * s);
                  BigInt expected = 1 + direct_first_placements(catalog.shape(d), s);
                  c.require(counted == expected,
                            "count mismatch for digit " + std::to_string(d) + " at s=" +
                                std::to_string(s));
                }
              Dfa dfa0 = compile(build_regex(distinct_orientations(catalog.shape(0)), 8, 0));
              c.require(count_accepted(dfa0, 65) == 25, "digit 0 at s=8 must count exactly 25");
              c.note("30 digit/grid combinations, digit 0 at s=8 counts 25");
            });

  criterion(4, "exports carry levels-times-parts regular constraints exactly", [&](Criterion& c) {
    ModelExport small =
        export_model(Instance::make(parse_variant("K-1-1-2"), 8, 2, catalog, Deck{1, 0}));
    c.require(regular_records(small) == 4, "two parts over two levels must give 4");
    auto t0 = std::chrono::steady_clock::now();
    ModelExport big = export_model(Instance::make(parse_variant("F-9-2-20"), 20, 7, catalog));
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(regular_records(big) == 140, "twenty parts over seven levels must give 140");
    c.require(elapsed < 30.0, "the full-size export must stay inside desk time");
    std::ostringstream info;
    info.setf(std::ios::fixed);
    info.precision(2);
    info << "4 and 140 regular constraints, full export in " << elapsed << " s";
    c.note(info.str());
  });

  criterion(5, "the solver matches the brute-force oracle on the exhaustive small suite",
            [&](Criterion& c) {
              int cases = 0;
              auto compare = [&](const Instance& inst) {
                EnumerationReport reference = best_score_bruteforce(inst);
                OptResult result = solve(inst);
                c.require(reference.complete, "oracle enumeration must complete");
                c.require(result.proof == ProofStatus::optimal, "solver must prove optimality");
                c.require(result.best_score == reference.best_score,
                          "score mismatch on " + inst.to_string());
                if (result.best_score) {
                  Deck deck =
                      inst.kind() == VariantKind::Known ? inst.deck() : result.best_deck;
                  c.require(!validate_play(inst, deck, result.best_play).has_value(),
                            "solver witness must replay on " + inst.to_string());
                }
                ++cases;
              };
              for (int levels : {2, 3}) {
                for (int len = 1; len <= 3; ++len)
                  for_each_deck(3, len, [&](const Deck& deck) {
                    compare(Instance::make(parse_variant("K-3-3-" + std::to_string(len)), 8,
                                           levels, catalog, deck));
                  });
                for (int m = 0; m <= 3; ++m)
                  for (int k = 1; k <= 3 && k <= m + 1; ++k)
                    compare(Instance::make(parse_variant("F-" + std::to_string(m) + "-1-" +
                                                         std::to_string(k)),
                                           8, levels, catalog));
              }
              c.note(std::to_string(cases) + " instances, zero tolerance");
            });

  criterion(6, "every deck of at most two cards maxes out at score 0 with proof",
            [&](Criterion& c) {
              int cases = 0;
              auto check_zero = [&](const Instance& inst) {
                OptResult result = solve(inst);
                c.require(result.proof == ProofStatus::optimal,
                          "must prove optimality on " + inst.to_string());
                c.require(result.best_score.has_value() && *result.best_score == 0,
                          "maximum must be 0 on " + inst.to_string());
                ++cases;
              };
              for (int len = 1; len <= 2; ++len)
                for_each_deck(9, len, [&](const Deck& deck) {
                  check_zero(Instance::make(parse_variant("K-9-2-" + std::to_string(len)), 8, 3,
                                            catalog, deck));
                });
              for (int m = 0; m <= 9; ++m)
                for (int k = 1; k <= 2 && k <= m + 1; ++k)
                  check_zero(Instance::make(
                      parse_variant("F-" + std::to_string(m) + "-1-" + std::to_string(k)), 8, 3,
                      catalog));
              c.note(std::to_string(cases) + " instances, single parts and pairs");
            });

  criterion(7, "the benchmark instance is solved with proof under every pruning configuration",
            [&](Criterion& c) {
              Instance inst = Instance::make(parse_variant("F-6-1-5"), 8, 3, catalog);
              std::optional<int> agreed;
              double total = 0;
              // All 16 combinations of the four search toggles.
              for (int mask = 0; mask < 16; ++mask) {
                SearchConfig config;
                config.prune_upper_bound = (mask & 1) != 0;
                config.prune_area_monotonic = (mask & 2) != 0;
                config.first_card_level1 = (mask & 4) != 0;
                config.levels_descending = (mask & 8) != 0;
                OptResult result = solve(inst, config);
                total += result.stats.elapsed_seconds;
                c.require(result.proof == ProofStatus::optimal,
                          "every configuration must prove optimality");
                c.require(result.best_score.has_value(), "a complete play must exist");
                if (!agreed) agreed = result.best_score;
                c.require(result.best_score == agreed,
                          "all configurations must report the same optimum");
                c.require(total < 1800.0, "must finish inside the 30-minute desk budget");
              }
              std::ostringstream info;
              info.setf(std::ios::fixed);
              info.precision(1);
              info << "optimum " << (agreed ? *agreed : -1) << " across 16 configurations in "
                   << total << " s";
              c.note(info.str());
            });

  criterion(8, "terminal plays satisfy the exported model and corruptions are caught",
            [&](Criterion& c) {
              // 50 enumerated terminals across two small instances transcribe
              // to satisfying assignments whose S is the engine score.
              int transcribed = 0;
              auto transcribe_some = [&](const std::string& variant, const Deck& deck,
                                         int want) {
                Instance inst =
                    Instance::make(parse_variant(variant), 8, 2, catalog, deck);
                ModelExport model = export_model(inst);
                int taken = 0;
                enumerate_terminals(inst, [&](const BoardState& st) {
                  Assignment a = assignment_from_placements(
                      inst, deck, std::vector<Placement>(st.placements().begin(),
                                                         st.placements().end()));
                  auto violation = verify_assignment(model, a);
                  c.require(!violation.has_value(),
                            "terminal play must satisfy the model (got " +
                                violation.value_or("") + ")");
                  c.require(a.at("S") == st.score(), "S must equal the engine score");
                  ++transcribed;
                  return ++taken < want;
                });
                c.require(taken == want, "expected " + std::to_string(want) + " terminals from " +
                                             variant);
              };
              transcribe_some("K-1-1-2", {1, 0}, 30);
              transcribe_some("K-2-1-2", {2, 1}, 20);

              // One corruption per constraint family, each caught by exactly
              // that family (first violation in export order).
              Instance inst =
                  Instance::make(parse_variant("K-1-1-2"), 8, 2, catalog, Deck{1, 0});
              ModelExport model = export_model(inst);
              std::vector<Placement> base_play;
              enumerate_terminals(inst, [&](const BoardState& st) {
                if (st.placements()[0].level == 1 && st.placements()[1].level == 1) {
                  base_play.assign(st.placements().begin(), st.placements().end());
                  return false;
                }
                return true;
              });
              c.require(base_play.size() == 2, "need a both-on-level-1 terminal");
              Assignment base = assignment_from_placements(inst, Deck{1, 0}, base_play);
              c.require(!verify_assignment(model, base).has_value(),
                        "the base assignment must verify");

              int caught = 0;
              auto expect = [&](int family, const std::string& got) {
                std::string want = "constraint (" + std::to_string(family) + ")";
                c.require(starts_with(got, want),
                          "family " + std::to_string(family) + " corruption reported as: " + got);
                ++caught;
              };
              auto tweak = [&](const std::function<void(Assignment&)>& change) {
                Assignment a = base;
                change(a);
                auto v = verify_assignment(model, a);
                c.require(v.has_value(), "corrupted assignment must fail verification");
                return v.value_or("(accepted)");
              };

              {  // family 1: an undrawn part marked present (3-part instance)
                Instance wide =
                    Instance::make(parse_variant("K-2-1-2"), 8, 2, catalog, Deck{2, 1});
                ModelExport wide_model = export_model(wide);
                std::vector<Placement> play;
                enumerate_terminals(wide, [&](const BoardState& st) {
                  play.assign(st.placements().begin(), st.placements().end());
                  return false;
                });
                Assignment a = assignment_from_placements(wide, Deck{2, 1}, play);
                a[var_key("Y", {1})] = 1;
                a[var_key("N", {1})] = 0;
                auto v = verify_assignment(wide_model, a);
                c.require(v.has_value(), "undrawn part marked present must fail");
                expect(1, v.value_or("(accepted)"));
              }
              {  // family 2: a stray halo symbol on an empty cell
                int ci = 0, cj = 0;
                for (int i = 1; i <= 8 && !ci; ++i)
                  for (int j = 1; j <= 8 && !ci; ++j)
                    if (base.at(var_key("Gp", {1, 1, i, j})) == 0) {
                      ci = i;
                      cj = j;
                    }
                expect(2, tweak([&](Assignment& a) {
                  a[var_key("Gp", {1, 1, ci, cj})] = 2;
                  a[var_key("G2", {1, 1, ci, cj})] = 1;
                }));
              }
              expect(3, tweak([](Assignment& a) {
                std::swap(a[var_key("O", {1})], a[var_key("O", {2})]);
              }));
              expect(4, tweak([](Assignment& a) {
                a[var_key("B", {1, 2})] = 1 - a[var_key("B", {1, 2})];
              }));
              expect(5, tweak([](Assignment& a) { a[var_key("N", {1})] = 1; }));
              expect(6, tweak([](Assignment& a) {
                a[var_key("L", {1})] = 0;
                a[var_key("N", {1})] = 1;
                for (int l = 1; l <= 2; ++l) {
                  a[var_key("Lpl", {1, l})] = 0;
                  for (int i = 1; i <= 8; ++i)
                    for (int j = 1; j <= 8; ++j) {
                      a[var_key("Gp", {l, 1, i, j})] = 0;
                      a[var_key("G1", {l, 1, i, j})] = 0;
                      a[var_key("G2", {l, 1, i, j})] = 0;
                    }
                }
              }));
              {  // family 7: the 0/1 view disagrees with the symbol grid
                std::string key;
                for (int i = 1; i <= 8 && key.empty(); ++i)
                  for (int j = 1; j <= 8 && key.empty(); ++j)
                    if (base.at(var_key("Gp", {1, 1, i, j})) == 1) key = var_key("G1", {1, 1, i, j});
                expect(7, tweak([&](Assignment& a) { a[key] = 0; }));
              }
              expect(8, tweak([](Assignment& a) { a[var_key("G", {2, 4, 4})] = 1; }));
              {  // family 9: a transcribed play with an isolated second part
                std::vector<Placement> play = base_play;
                play[0].orientation = 1;
                play[0].row = 1;
                play[0].col = 1;
                play[1].orientation = 1;
                play[1].row = 4;
                play[1].col = 3;
                play[1].level = 1;
                Assignment a = assignment_from_placements(inst, Deck{1, 0}, play);
                auto v = verify_assignment(model, a);
                c.require(v.has_value(), "isolated part must fail");
                expect(9, v.value_or("(accepted)"));
              }
              {  // family 10: a transcribed play floating on the second level
                std::vector<Placement> play = base_play;
                play[0].orientation = 0;
                play[0].row = 1;
                play[0].col = 1;
                play[1].orientation = 0;
                play[1].row = 3;
                play[1].col = 4;
                play[1].level = 2;
                Assignment a = assignment_from_placements(inst, Deck{1, 0}, play);
                auto v = verify_assignment(model, a);
                c.require(v.has_value(), "floating part must fail");
                expect(10, v.value_or("(accepted)"));
              }
              {  // family 11: a transcribed play stacked on a single part
                Instance twin =
                    Instance::make(parse_variant("K-1-2-2"), 8, 2, catalog, Deck{1, 1});
                ModelExport twin_model = export_model(twin);
                std::vector<Placement> play(2);
                play[0] = Placement{1, 1, 1, 0, 2, 2, 1};
                play[1] = Placement{2, 1, 2, 0, 2, 2, 2};
                Assignment a = assignment_from_placements(twin, Deck{1, 1}, play);
                auto v = verify_assignment(twin_model, a);
                c.require(v.has_value(), "single-support stack must fail");
                expect(11, v.value_or("(accepted)"));
              }
              expect(12, tweak([](Assignment& a) { a["S"] = a["S"] + 1; }));

              c.note(std::to_string(transcribed) + " terminals transcribed, " +
                     std::to_string(caught) + " corruption families caught");
            });

  criterion(9, "a seeded standard-shuffle greedy playout replays as a legal terminal state",
            [&](Criterion& c) {
              // The standard game itself (optimum, or the human record) is
              // out of desk-scale reach; this replays a full-size playout.
              Instance inst = Instance::make(parse_variant("F-9-2-20"), 20, 7, catalog);
              BoardState st = greedy_playout(inst, 7);
              c.require(st.done(), "the playout must place all twenty cards");
              c.require(!validate_play(inst, st.deck(), st.placements()).has_value(),
                        "the playout must replay through the reference validator");
              c.note("score " + std::to_string(st.score()) +
                     " reported, not asserted; deck " + deck_to_string(st.deck()));
            });

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
