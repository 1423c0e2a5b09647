#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nmbr9/oracle.hpp"
#include "nmbr9/solution_io.hpp"
#include "nmbr9/solver.hpp"

using namespace nmbr9;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Instance make_instance(const std::string& variant, int grid, int levels,
                       const std::optional<Deck>& deck = std::nullopt) {
  return Instance::make(parse_variant(variant), grid, levels, ShapeCatalog::bundled_default(),
                        deck);
}

// A solved document for a small known-deck instance, built by the solver so
// the placements are genuinely legal.
SolutionDocument solved_doc(const std::string& variant, const Deck& deck, int grid, int levels) {
  Instance inst = make_instance(variant, grid, levels, deck);
  OptResult result = solve(inst);
  REQUIRE(result.proof == ProofStatus::optimal);
  REQUIRE(result.best_score.has_value());
  SolutionDocument doc;
  doc.variant = inst.to_string();
  doc.grid_side = grid;
  doc.max_levels = levels;
  doc.deck = deck;
  doc.placements = result.best_play;
  doc.score = result.best_score;
  doc.status = "optimal";
  return doc;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name)
      : path(std::filesystem::temp_directory_path() /
             (std::string("nmbr9_test_") + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("solution text round-trips every field") {
  SolutionDocument doc = solved_doc("K-9-2-2", {9, 9}, 8, 3);
  std::string text = solution_to_text(doc);
  CHECK(text.back() == '\n');
  SolutionDocument back = solution_from_text(text);
  CHECK(back.format_version == 1);
  CHECK(back.variant == doc.variant);
  CHECK(back.grid_side == doc.grid_side);
  CHECK(back.max_levels == doc.max_levels);
  CHECK(back.deck == doc.deck);
  CHECK(back.placements == doc.placements);
  CHECK(back.score == doc.score);
  CHECK(back.status == doc.status);
  CHECK(solution_to_text(back) == text);

  SUBCASE("empty deck and absent score use the '-' and 'none' markers") {
    SolutionDocument blank;
    blank.variant = "F-1-1-1";
    blank.grid_side = 6;
    blank.max_levels = 2;
    blank.status = "bound-limited";
    std::string blank_text = solution_to_text(blank);
    CHECK(blank_text.find("deck -\n") != std::string::npos);
    CHECK(blank_text.find("score none\n") != std::string::npos);
    SolutionDocument blank_back = solution_from_text(blank_text);
    CHECK(blank_back.deck.empty());
    CHECK(!blank_back.score.has_value());
    CHECK(blank_back.placements.empty());
  }
}

TEST_CASE("malformed solution text is rejected") {
  SolutionDocument doc = solved_doc("K-9-2-2", {9, 9}, 8, 3);
  std::string text = solution_to_text(doc);

  auto reject = [](std::string bad) {
    CHECK_THROWS_AS((void)solution_from_text(bad), SolutionError);
  };
  SUBCASE("wrong magic") { reject("nmbr9-model 1\n"); }
  SUBCASE("unsupported version") {
    std::string bad = text;
    bad.replace(bad.find("nmbr9-solution 1"), 16, "nmbr9-solution 2");
    reject(bad);
  }
  SUBCASE("truncated document") { reject(text.substr(0, text.find("placements"))); }
  SUBCASE("non-numeric grid") {
    std::string bad = text;
    bad.replace(bad.find("grid 8"), 6, "grid x");
    reject(bad);
  }
  SUBCASE("placement field out of order") {
    std::string bad = text;
    size_t at = bad.find(" digit=");
    REQUIRE(at != std::string::npos);
    bad.replace(at, 7, " level=");
    reject(bad);
  }
  SUBCASE("placement count larger than the list") {
    std::string bad = text;
    bad.replace(bad.find("placements 2"), 12, "placements 3");
    reject(bad);
  }
}

TEST_CASE("replay validates placements and the recorded score") {
  SolutionDocument doc = solved_doc("K-9-2-3", {0, 0, 7}, 10, 2);
  ShapeCatalog catalog = ShapeCatalog::bundled_default();
  Instance inst = instance_from_solution(doc, catalog);

  BoardState state = replay_solution(doc, inst);
  CHECK(state.done());
  CHECK(state.score() == *doc.score);

  SUBCASE("the replayed score must match the recorded one") {
    SolutionDocument lying = doc;
    *lying.score += 1;
    CHECK_THROWS_WITH_AS((void)replay_solution(lying, inst),
                         doctest::Contains("differs from replayed score"), SolutionError);
  }
  SUBCASE("an illegal placement fails the replay") {
    SolutionDocument broken = doc;
    broken.placements[1].row = 0;  // touches the border
    broken.score.reset();
    CHECK_THROWS_WITH_AS((void)replay_solution(broken, inst),
                         doctest::Contains("does not replay"), SolutionError);
  }
  SUBCASE("a partial play replays as a prefix") {
    SolutionDocument prefix = doc;
    prefix.placements.pop_back();
    prefix.score.reset();
    BoardState partial = replay_solution(prefix, inst);
    CHECK(!partial.done());
    CHECK(partial.placements().size() == 2);
  }
  SUBCASE("the variant must parse") {
    SolutionDocument bad = doc;
    bad.variant = "Q-1-1-1";
    CHECK_THROWS_AS((void)instance_from_solution(bad, catalog), SolutionError);
  }
  SUBCASE("free-deck documents replay against their witness deck") {
    Instance free_inst = make_instance("F-1-1-2", 8, 2);
    OptResult result = solve(free_inst);
    REQUIRE(result.best_score.has_value());
    SolutionDocument free_doc;
    free_doc.variant = "F-1-1-2";
    free_doc.grid_side = 8;
    free_doc.max_levels = 2;
    free_doc.deck = result.best_deck;
    free_doc.placements = result.best_play;
    free_doc.score = result.best_score;
    free_doc.status = "optimal";
    Instance again = instance_from_solution(free_doc, catalog);
    BoardState replayed = replay_solution(free_doc, again);
    CHECK(replayed.done());
    CHECK(replayed.score() == *result.best_score);
  }
}

TEST_CASE("rendering draws one bordered digit map per level") {
  ShapeCatalog catalog = ShapeCatalog::bundled_default();

  SUBCASE("an empty solution renders blank maps for every level") {
    SolutionDocument doc;
    doc.variant = "F-1-1-1";
    doc.grid_side = 6;
    doc.max_levels = 2;
    doc.status = "bound-limited";
    std::string blank_row = "|......|\n";
    std::string map = "+------+\n";
    for (int i = 0; i < 6; ++i) map += blank_row;
    map += "+------+\n\n";
    CHECK(render_solution(doc, catalog) == "level 1\n" + map + "level 2\n" + map);
  }
  SUBCASE("a lone 0 part shows its ring at the anchor") {
    SolutionDocument doc;
    doc.variant = "K-0-1-1";
    doc.grid_side = 6;
    doc.max_levels = 1;
    doc.deck = {0};
    Placement p;
    p.card_index = 1;
    p.digit = 0;
    p.copy = 1;
    p.orientation = 0;
    p.row = 1;
    p.col = 1;
    p.level = 1;
    doc.placements = {p};
    doc.score = 0;
    doc.status = "optimal";
    CHECK(render_solution(doc, catalog) ==
          "level 1\n"
          "+------+\n"
          "|......|\n"
          "|.000..|\n"
          "|.0.0..|\n"
          "|.0.0..|\n"
          "|.000..|\n"
          "|......|\n"
          "+------+\n\n");
  }
  SUBCASE("rendering is stable") {
    SolutionDocument doc = solved_doc("K-9-2-2", {9, 9}, 8, 3);
    std::string once = render_solution(doc, catalog);
    CHECK(render_solution(doc, catalog) == once);
    CHECK(once.find("level 3") != std::string::npos);
  }
}

TEST_CASE("run records serialize to single sorted-key JSON lines") {
  RunRecord rec;
  rec.timestamp = "2026-08-14T12:00:00Z";
  rec.command = "solve";
  rec.instance = "F-6-1-5";
  rec.config = {{"grid", "8"}, {"levels", "3"}};
  rec.score = 15;
  rec.status = "optimal";
  rec.stats = {{"nodes", "720606"}, {"elapsed_seconds", "1.9"}};
  rec.artifacts = {{"solution", "sol.txt"}};

  std::string line = run_record_to_json(rec);
  CHECK(line.find('\n') == std::string::npos);

  nlohmann::json j = nlohmann::json::parse(line);
  CHECK(j["format_version"] == 1);
  CHECK(j["timestamp"] == "2026-08-14T12:00:00Z");
  CHECK(j["command"] == "solve");
  CHECK(j["instance"] == "F-6-1-5");
  CHECK(j["config"]["grid"] == "8");
  CHECK(j["result"]["score"] == 15);
  CHECK(j["result"]["status"] == "optimal");
  CHECK(j["stats"]["nodes"] == "720606");
  CHECK(j["artifacts"]["solution"] == "sol.txt");

  SUBCASE("a missing score serializes as null") {
    rec.score.reset();
    nlohmann::json none = nlohmann::json::parse(run_record_to_json(rec));
    CHECK(none["result"]["score"].is_null());
  }
  SUBCASE("appending keeps earlier lines untouched") {
    TempFile log("runlog");
    append_run_record(log.path.string(), rec);
    std::string first = read_file(log.path.string());
    rec.command = "oracle";
    append_run_record(log.path.string(), rec);
    std::string both = read_file(log.path.string());
    CHECK(both.substr(0, first.size()) == first);
    std::istringstream lines(both);
    std::string one;
    int count = 0;
    while (std::getline(lines, one)) {
      ++count;
      nlohmann::json parsed = nlohmann::json::parse(one);
      CHECK(parsed["format_version"] == 1);
    }
    CHECK(count == 2);
  }
}

TEST_CASE("timestamps use the compact UTC form") {
  std::string ts = utc_timestamp();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[7] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[13] == ':');
  CHECK(ts[16] == ':');
  CHECK(ts[19] == 'Z');
}
