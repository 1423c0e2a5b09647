#include "nmbr9/solution_io.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nmbr9 {

namespace {

std::string deck_field(const Deck& deck) { return deck.empty() ? "-" : deck_to_string(deck); }

int parse_int(const std::string& token, const char* what) {
  try {
    size_t used = 0;
    int value = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw SolutionError(std::string("malformed ") + what + ": " + token);
  }
}

// "key=value" → value, enforcing the expected key.
std::string take_field(std::istringstream& in, const char* key) {
  std::string token;
  if (!(in >> token)) throw SolutionError(std::string("missing field ") + key);
  std::string prefix = std::string(key) + "=";
  if (token.rfind(prefix, 0) != 0)
    throw SolutionError(std::string("expected field ") + key + ", got " + token);
  return token.substr(prefix.size());
}

}  // namespace

std::string solution_to_text(const SolutionDocument& doc) {
  std::ostringstream out;
  out << "nmbr9-solution " << doc.format_version << "\n";
  out << "variant " << doc.variant << "\n";
  out << "grid " << doc.grid_side << "\n";
  out << "levels " << doc.max_levels << "\n";
  out << "deck " << deck_field(doc.deck) << "\n";
  out << "placements " << doc.placements.size() << "\n";
  for (const Placement& p : doc.placements)
    out << "place " << p.card_index << " digit=" << p.digit << " copy=" << p.copy
        << " level=" << p.level << " orient=" << p.orientation << " row=" << p.row
        << " col=" << p.col << "\n";
  out << "score " << (doc.score ? std::to_string(*doc.score) : "none") << "\n";
  out << "status " << doc.status << "\n";
  return out.str();
}

SolutionDocument solution_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw SolutionError(std::string("missing line: ") + what);
    return std::istringstream(line);
  };
  auto keyword_line = [&](const char* keyword) {
    auto ls = next_line(keyword);
    std::string word;
    ls >> word;
    if (word != keyword)
      throw SolutionError(std::string("expected ") + keyword + " line, got: " + line);
    std::string rest;
    std::getline(ls, rest);
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
    return rest;
  };

  SolutionDocument doc;
  std::string version = keyword_line("nmbr9-solution");
  doc.format_version = parse_int(version, "format version");
  if (doc.format_version != 1)
    throw SolutionError("unsupported solution format version " + version);
  doc.variant = keyword_line("variant");
  doc.grid_side = parse_int(keyword_line("grid"), "grid side");
  doc.max_levels = parse_int(keyword_line("levels"), "level cap");
  std::string deck_text = keyword_line("deck");
  if (deck_text != "-") {
    try {
      doc.deck = parse_deck(deck_text);
    } catch (const VariantError& e) {
      throw SolutionError(std::string("malformed deck: ") + e.what());
    }
  }
  int count = parse_int(keyword_line("placements"), "placement count");
  for (int i = 0; i < count; ++i) {
    auto ls = next_line("place");
    std::string word;
    ls >> word;
    if (word != "place") throw SolutionError("expected place line, got: " + line);
    std::string card;
    if (!(ls >> card)) throw SolutionError("missing card index: " + line);
    Placement p;
    p.card_index = parse_int(card, "card index");
    p.digit = parse_int(take_field(ls, "digit"), "digit");
    p.copy = parse_int(take_field(ls, "copy"), "copy");
    p.level = parse_int(take_field(ls, "level"), "level");
    p.orientation = parse_int(take_field(ls, "orient"), "orientation");
    p.row = parse_int(take_field(ls, "row"), "row");
    p.col = parse_int(take_field(ls, "col"), "col");
    doc.placements.push_back(p);
  }
  std::string score = keyword_line("score");
  if (score != "none") doc.score = parse_int(score, "score");
  doc.status = keyword_line("status");
  return doc;
}

Instance instance_from_solution(const SolutionDocument& doc, const ShapeCatalog& catalog) {
  VariantParams params;
  try {
    params = parse_variant(doc.variant);
  } catch (const VariantError& e) {
    throw SolutionError(std::string("bad variant in solution: ") + e.what());
  }
  try {
    if (params.kind == VariantKind::Known)
      return Instance::make(params, doc.grid_side, doc.max_levels, catalog, doc.deck);
    return Instance::make(params, doc.grid_side, doc.max_levels, catalog);
  } catch (const std::exception& e) {
    throw SolutionError(std::string("solution names an invalid instance: ") + e.what());
  }
}

BoardState replay_solution(const SolutionDocument& doc, const Instance& instance) {
  try {
    BoardState state = (instance.kind() == VariantKind::Free && !doc.deck.empty())
                           ? BoardState::initial(instance, doc.deck)
                           : BoardState::initial(instance);
    for (const Placement& p : doc.placements) state.push(p);
    if (doc.score && *doc.score != state.score())
      throw SolutionError("recorded score " + std::to_string(*doc.score) +
                          " differs from replayed score " + std::to_string(state.score()));
    return state;
  } catch (const SolutionError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolutionError(std::string("solution does not replay: ") + e.what());
  }
}

std::string render_levels(const BoardState& state) {
  const Instance& inst = state.instance();
  const int s = inst.grid_side();
  std::string border = "+" + std::string(static_cast<size_t>(s), '-') + "+";
  std::ostringstream out;
  auto placements = state.placements();
  for (int level = 1; level <= inst.max_levels(); ++level) {
    out << "level " << level << "\n" << border << "\n";
    for (int row = 0; row < s; ++row) {
      out << '|';
      for (int col = 0; col < s; ++col) {
        int card = state.part_at(level, row, col);
        out << (card == 0
                    ? '.'
                    : static_cast<char>('0' + placements[static_cast<size_t>(card - 1)].digit));
      }
      out << "|\n";
    }
    out << border << "\n\n";
  }
  return out.str();
}

std::string render_solution(const SolutionDocument& doc, const ShapeCatalog& catalog) {
  Instance instance = instance_from_solution(doc, catalog);
  BoardState state = replay_solution(doc, instance);
  return render_levels(state);
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string run_record_to_json(const RunRecord& record) {
  nlohmann::json j;
  j["format_version"] = record.format_version;
  j["timestamp"] = record.timestamp;
  j["command"] = record.command;
  j["instance"] = record.instance;
  auto as_object = [](const std::vector<std::pair<std::string, std::string>>& pairs) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [key, value] : pairs) obj[key] = value;
    return obj;
  };
  j["config"] = as_object(record.config);
  j["result"] = nlohmann::json::object();
  if (record.score)
    j["result"]["score"] = *record.score;
  else
    j["result"]["score"] = nullptr;
  j["result"]["status"] = record.status;
  j["stats"] = as_object(record.stats);
  j["artifacts"] = as_object(record.artifacts);
  return j.dump();
}

void append_run_record(const std::string& path, const RunRecord& record) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw SolutionError("cannot open run log " + path);
  out << run_record_to_json(record) << "\n";
  if (!out) throw SolutionError("cannot write run log " + path);
}

}  // namespace nmbr9
