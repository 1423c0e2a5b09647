#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "nmbr9/oracle.hpp"
#include "nmbr9/solution_io.hpp"

using namespace nmbr9;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name)
      : path(std::filesystem::temp_directory_path() /
             (std::string("nmbr9_cli_") + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
};

// Parses a solution document off stdout, replays it, and checks that the
// replay reproduces the recorded score — the contract every solve result
// must satisfy.
void check_replays(const std::string& doc_text) {
  SolutionDocument doc = solution_from_text(doc_text);
  Instance inst = instance_from_solution(doc, ShapeCatalog::bundled_default());
  BoardState state = replay_solution(doc, inst);
  if (doc.score) {
    CHECK(state.done());
    CHECK(state.score() == *doc.score);
  }
}

}  // namespace

TEST_CASE("solve emits a replayable solution document") {
  CliResult r = run_cli({"solve", "--variant", "K-9-2-2", "--deck", "9,9", "--grid", "8",
                         "--levels", "3"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.err == "solve K-9-2-2: score=0 status=optimal\n");
  SolutionDocument doc = solution_from_text(r.out);
  CHECK(doc.variant == "K-9-2-2");
  CHECK(doc.score == 0);
  CHECK(doc.status == "optimal");
  CHECK(doc.deck == Deck{9, 9});
  check_replays(r.out);
}

TEST_CASE("solve agrees with the oracle and logs a run record") {
  Instance inst = Instance::make(parse_variant("K-9-2-3"), 10, 2,
                                 ShapeCatalog::bundled_default(), Deck{0, 0, 7});
  EnumerationReport oracle = best_score_bruteforce(inst);
  REQUIRE(oracle.complete);
  REQUIRE(oracle.best_score.has_value());

  TempFile sol("solution");
  TempFile log("log");
  CliResult r = run_cli({"solve", "--variant", "K-9-2-3", "--deck", "0,0,7", "--grid", "10",
                         "--levels", "2", "--output", sol.str(), "--log", log.str()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());  // the document went to the file

  std::string doc_text = read_file(sol.str());
  SolutionDocument doc = solution_from_text(doc_text);
  CHECK(doc.score == oracle.best_score);
  CHECK(doc.status == "optimal");
  check_replays(doc_text);

  std::string line = read_file(log.str());
  REQUIRE(!line.empty());
  nlohmann::json rec = nlohmann::json::parse(line);
  CHECK(rec["format_version"] == 1);
  CHECK(rec["command"] == "solve");
  CHECK(rec["instance"] == "K-9-2-3");
  CHECK(rec["config"]["deck"] == "0,0,7");
  CHECK(rec["result"]["score"] == *oracle.best_score);
  CHECK(rec["result"]["status"] == "optimal");
  CHECK(rec["artifacts"]["solution"] == sol.str());
  CHECK(rec["stats"].contains("nodes"));
}

TEST_CASE("solve under a node limit reports bound-limited and exits 2") {
  CliResult r = run_cli({"solve", "--variant", "F-2-1-3", "--grid", "8", "--levels", "2",
                         "--node-limit", "5"});
  CHECK(r.code == cli::kExitLimited);
  SolutionDocument doc = solution_from_text(r.out);
  CHECK(doc.status == "bound-limited");
  check_replays(r.out);
}

TEST_CASE("greedy playouts are seeded, legal, and never claim optimality") {
  CliResult r = run_cli({"solve", "--variant", "F-2-1-3", "--grid", "10", "--levels", "3",
                         "--greedy", "--seed", "11"});
  CHECK(r.code == cli::kExitLimited);
  SolutionDocument doc = solution_from_text(r.out);
  CHECK(doc.status == "playout");
  CHECK(doc.deck.size() == 3);
  check_replays(r.out);

  CliResult again = run_cli({"solve", "--variant", "F-2-1-3", "--grid", "10", "--levels", "3",
                             "--greedy", "--seed", "11"});
  CHECK(again.out == r.out);  // same seed, same playout

  SUBCASE("a free-deck playout without a seed is refused") {
    CliResult bad = run_cli({"solve", "--variant", "F-2-1-3", "--grid", "10", "--levels", "3",
                             "--greedy"});
    CHECK(bad.code == cli::kExitInstance);
    CHECK(bad.err.find("--seed") != std::string::npos);
  }
  SUBCASE("known decks need no seed") {
    CliResult known = run_cli({"solve", "--variant", "K-9-2-2", "--deck", "9,9", "--grid", "8",
                               "--levels", "2", "--greedy"});
    CHECK(known.code == cli::kExitLimited);
    check_replays(known.out);
  }
}

TEST_CASE("oracle reports enumeration results") {
  CliResult r = run_cli({"oracle", "--variant", "K-1-1-2", "--deck", "0,1", "--grid", "8",
                         "--levels", "2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("oracle K-1-1-2\n") == 0);
  CHECK(r.out.find("best 0\n") != std::string::npos);
  CHECK(r.out.find("complete yes\n") != std::string::npos);

  SUBCASE("free variants enumerate every deck") {
    CliResult f = run_cli({"oracle", "--variant", "F-1-1-2", "--grid", "8", "--levels", "2"});
    CHECK(f.code == cli::kExitOk);
    // With one part on level 1 a second can never rest on two distinct
    // parts, so both decks top out at two level-1 parts and score 0.
    CHECK(f.out.find("best 0\n") != std::string::npos);
    CHECK(f.out.find("best-deck 0,1\n") != std::string::npos);
  }
  SUBCASE("long decks are refused without --force") {
    CliResult refused = run_cli({"oracle", "--variant", "K-9-2-20", "--deck",
                                 "1,2,3,4,5,6,7,8,9,0,0,1,2,3,4,5,6,7,8,9"});
    CHECK(refused.code == cli::kExitInstance);
    CHECK(refused.err.find("--force") != std::string::npos);
    CHECK(refused.out.empty());
  }
  SUBCASE("--force plus a node limit runs and exits 2 when incomplete") {
    TempFile log("oracle_log");
    CliResult forced = run_cli({"oracle", "--variant", "K-9-2-5", "--deck", "1,1,2,2,3",
                                "--grid", "8", "--levels", "2", "--force", "--node-limit",
                                "500", "--log", log.str()});
    CHECK(forced.code == cli::kExitLimited);
    CHECK(forced.out.find("complete no\n") != std::string::npos);
    nlohmann::json rec = nlohmann::json::parse(read_file(log.str()));
    CHECK(rec["command"] == "oracle");
    CHECK(rec["result"]["status"] == "node-limited");
  }
}

TEST_CASE("export writes the constraint model deterministically") {
  std::vector<std::string> args{"export", "--variant", "K-1-1-2", "--deck", "1,0", "--grid",
                                "8", "--levels", "2"};
  CliResult r = run_cli(args);
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == read_file(std::string(GOLDEN_DIR) + "/model_k112_s8.txt"));
  CliResult again = run_cli(args);
  CHECK(again.out == r.out);

  SUBCASE("-o routes the model to a file") {
    TempFile model("model");
    CliResult to_file = run_cli({"export", "--variant", "K-1-1-2", "--deck", "1,0", "--grid",
                                 "8", "--levels", "2", "-o", model.str()});
    CHECK(to_file.code == cli::kExitOk);
    CHECK(to_file.out.empty());
    CHECK(read_file(model.str()) == r.out);
  }
}

TEST_CASE("render replays a solution file into level maps") {
  TempFile sol("render_src");
  CliResult solved = run_cli({"solve", "--variant", "K-9-2-2", "--deck", "9,9", "--grid", "8",
                              "--levels", "2", "-o", sol.str()});
  REQUIRE(solved.code == cli::kExitOk);

  CliResult r = run_cli({"render", sol.str()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("level 1\n+--------+\n") == 0);
  CHECK(r.out.find("level 2") != std::string::npos);
  CHECK(r.out.find('9') != std::string::npos);

  CliResult again = run_cli({"render", sol.str()});
  CHECK(again.out == r.out);  // render is stable

  SUBCASE("a corrupted score fails the replay") {
    TempFile bad("render_bad");
    std::string text = read_file(sol.str());
    size_t at = text.find("score 0");
    REQUIRE(at != std::string::npos);
    text.replace(at, 7, "score 5");
    std::ofstream(bad.str(), std::ios::binary) << text;
    CliResult broken = run_cli({"render", bad.str()});
    CHECK(broken.code == cli::kExitInstance);
    CHECK(broken.err.find("differs from replayed score") != std::string::npos);
  }
  SUBCASE("a missing file is an error") {
    CliResult missing = run_cli({"render", "/nonexistent/solution.txt"});
    CHECK(missing.code == cli::kExitInstance);
  }
}

TEST_CASE("gen-deck samples reproducible valid decks") {
  CliResult r = run_cli({"gen-deck", "--variant", "F-9-2-20", "--seed", "7"});
  CHECK(r.code == cli::kExitOk);
  Deck deck = parse_deck(r.out.substr(0, r.out.size() - 1));
  CHECK(deck.size() == 20);
  CHECK(!validate_deck(deck, parse_variant("F-9-2-20")).has_value());

  CliResult again = run_cli({"gen-deck", "--variant", "F-9-2-20", "--seed", "7"});
  CHECK(again.out == r.out);
  CliResult other = run_cli({"gen-deck", "--variant", "F-9-2-20", "--seed", "8"});
  CHECK(other.out != r.out);

  SUBCASE("the seed is mandatory") {
    CliResult bad = run_cli({"gen-deck", "--variant", "F-9-2-20"});
    CHECK(bad.code == cli::kExitUsage);
  }
}

TEST_CASE("flag errors exit 64 and instance errors exit 65") {
  SUBCASE("no subcommand") { CHECK(run_cli({}).code == cli::kExitUsage); }
  SUBCASE("unknown subcommand") { CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage); }
  SUBCASE("missing --variant") {
    CHECK(run_cli({"solve", "--grid", "8"}).code == cli::kExitUsage);
  }
  SUBCASE("unknown flag") {
    CHECK(run_cli({"solve", "--variant", "K-9-2-2", "--deck", "9,9", "--bogus"}).code ==
          cli::kExitUsage);
  }
  SUBCASE("--seed without --greedy") {
    CHECK(run_cli({"solve", "--variant", "F-1-1-1", "--grid", "6", "--levels", "2", "--seed",
                   "3"}).code == cli::kExitUsage);
  }
  SUBCASE("--help exits 0 and documents the subcommands") {
    CliResult help = run_cli({"--help"});
    CHECK(help.code == cli::kExitOk);
    for (const char* name : {"solve", "oracle", "export", "render", "gen-deck"})
      CHECK(help.out.find(name) != std::string::npos);
  }
  SUBCASE("a malformed variant is an instance error") {
    CliResult bad = run_cli({"solve", "--variant", "X-1-1-1", "--grid", "8", "--levels", "2"});
    CHECK(bad.code == cli::kExitInstance);
    CHECK(!bad.err.empty());
  }
  SUBCASE("known-deck variants require --deck") {
    CliResult bad = run_cli({"solve", "--variant", "K-9-2-2", "--grid", "8", "--levels", "2"});
    CHECK(bad.code == cli::kExitInstance);
    CHECK(bad.err.find("--deck") != std::string::npos);
  }
  SUBCASE("free variants refuse --deck") {
    CliResult bad = run_cli({"solve", "--variant", "F-1-1-1", "--deck", "1", "--grid", "8",
                             "--levels", "2"});
    CHECK(bad.code == cli::kExitInstance);
  }
  SUBCASE("a deck that does not fit the variant is an instance error") {
    CliResult bad = run_cli({"oracle", "--variant", "K-1-1-2", "--deck", "5,5", "--grid", "8",
                             "--levels", "2"});
    CHECK(bad.code == cli::kExitInstance);
  }
}

TEST_CASE("a custom catalog file changes the shapes in play") {
  // Digit 0 must stay the standard ring; digit 1 becomes a 2x2 square, which
  // fits next to the ring on a 7-grid where the standard 1 would not.
  TempFile catalog("catalog");
  std::ofstream(catalog.str(), std::ios::binary)
      << "digit 0\n###\n#.#\n#.#\n###\n\ndigit 1\n##\n##\n";
  CliResult r = run_cli({"solve", "--variant", "K-1-1-2", "--deck", "0,1", "--grid", "7",
                         "--levels", "2", "--catalog", catalog.str()});
  CHECK(r.code == cli::kExitOk);
  SolutionDocument doc = solution_from_text(r.out);
  CHECK(doc.score == 0);
  CHECK(doc.placements.size() == 2);

  SUBCASE("an unreadable catalog path is an instance error") {
    CliResult bad = run_cli({"solve", "--variant", "K-1-1-2", "--deck", "0,1", "--grid", "7",
                             "--levels", "2", "--catalog", "/nonexistent/catalog.txt"});
    CHECK(bad.code == cli::kExitInstance);
  }
}
