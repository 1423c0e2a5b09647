// Solution documents, replay, per-level ASCII rendering, and append-only
// run logs.
//
// A solution document is the machine-readable result of a search or a
// playout: the instance echo, the deck in draw order (the witness deck for
// free variants), the placement list, the score, and a status. The text
// form is versioned and round-trips exactly. Rendering always replays the
// document through the rules engine, so a document that renders is a legal
// play whose recorded score is genuine.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmbr9/rules.hpp"
#include "nmbr9/shapes.hpp"

namespace nmbr9 {

class SolutionError : public std::runtime_error {
 public:
  explicit SolutionError(const std::string& what) : std::runtime_error(what) {}
};

struct SolutionDocument {
  int format_version = 1;
  std::string variant;  // e.g. "F-6-1-5"
  int grid_side = 0;
  int max_levels = 0;
  Deck deck;  // draw order; empty when no play exists
  std::vector<Placement> placements;
  std::optional<int> score;  // absent when no complete play exists
  std::string status;        // "optimal", "bound-limited", or "playout"
};

// One solution per text, ending in a newline. Round-trips exactly:
// solution_from_text(solution_to_text(doc)) reproduces every field.
std::string solution_to_text(const SolutionDocument& doc);
SolutionDocument solution_from_text(const std::string& text);  // throws SolutionError

// Builds the instance a document describes: variant, grid, levels, and (for
// known-deck variants) the document deck. Throws SolutionError when the
// variant does not parse or the instance is invalid.
Instance instance_from_solution(const SolutionDocument& doc, const ShapeCatalog& catalog);

// Replays the document's placements through the rules engine from an empty
// board. `instance` must come from instance_from_solution (or agree with the
// document) and outlive the returned state, which refers to it. Throws
// SolutionError when a placement is illegal or the recorded score disagrees
// with the replayed board. Partial plays (fewer placements than cards)
// replay fine; the score check then applies to the replayed prefix.
BoardState replay_solution(const SolutionDocument& doc, const Instance& instance);

// One bordered s-by-s map per level, 1 up to the instance's level cap:
//
//   level 1
//   +----+
//   |.33.|
//   |..3.|
//   |.33.|
//   |....|
//   +----+
//
// Covered cells show their part's digit, empty cells '.', with a blank
// line after each map. Rendering is a pure function of the board.
std::string render_levels(const BoardState& state);

// Convenience: replay, then render. Throws like replay_solution.
std::string render_solution(const SolutionDocument& doc, const ShapeCatalog& catalog);

// A run record is one line of the append-only run log: JSON with sorted
// keys, schema {format_version, timestamp, command, instance, config,
// result:{score, status}, stats, artifacts}, no line breaks.
struct RunRecord {
  int format_version = 1;
  std::string timestamp;  // ISO-8601 UTC, e.g. 2026-08-14T12:00:00Z
  std::string command;
  std::string instance;  // echo, e.g. "F-6-1-5 s=8 levels=3"
  std::vector<std::pair<std::string, std::string>> config;     // flag echoes
  std::optional<int> score;
  std::string status;
  std::vector<std::pair<std::string, std::string>> stats;      // numbers as text
  std::vector<std::pair<std::string, std::string>> artifacts;  // name -> path
};

std::string utc_timestamp();  // current wall-clock time in the record format

// The record as one JSON line (no trailing newline). The pair lists become
// objects with keys sorted; their values are JSON strings, while score and
// format_version are JSON numbers (score null when absent).
std::string run_record_to_json(const RunRecord& record);

// Appends record + '\n' to the file, creating it if needed.
void append_run_record(const std::string& path, const RunRecord& record);

}  // namespace nmbr9
