#include <fstream>
#include <set>
#include <sstream>

#include "ssc/automata.hpp"
#include "ssc/error.hpp"

namespace ssc {

namespace {

[[noreturn]] void reject(std::string_view source, std::string_view field, const std::string& message) {
  throw InputError(std::string(source) + ": field '" + std::string(field) + "': " + message);
}

std::int64_t integer_field(const nlohmann::json& value, std::string_view source, const std::string& field) {
  if (!value.is_number_integer()) reject(source, field, "expected an integer, got " + value.dump());
  return value.get<std::int64_t>();
}

State state_field(const nlohmann::json& value, std::string_view source, const std::string& field,
                  std::int64_t state_count) {
  const auto q = integer_field(value, source, field);
  if (q < 1 || q > state_count) {
    reject(source, field, "state " + std::to_string(q) + " outside 1.." + std::to_string(state_count));
  }
  return static_cast<State>(q);
}

}  // namespace

Dfa dfa_from_json(const nlohmann::json& j, std::string_view source) {
  if (!j.is_object()) reject(source, "<root>", "expected a JSON object");
  for (const char* key : {"states", "alphabet", "initial", "finals", "transitions"}) {
    if (!j.contains(key)) reject(source, key, "missing");
  }

  const auto m = integer_field(j["states"], source, "states");
  if (m < 1) reject(source, "states", "must be positive");

  const auto& alphabet_json = j["alphabet"];
  if (!alphabet_json.is_array()) reject(source, "alphabet", "expected an array of letter names");
  std::vector<std::string> alphabet;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < alphabet_json.size(); ++i) {
    const std::string field = "alphabet[" + std::to_string(i) + "]";
    if (!alphabet_json[i].is_string()) reject(source, field, "expected a string");
    auto name = alphabet_json[i].get<std::string>();
    if (!seen.insert(name).second) reject(source, field, "duplicate letter '" + name + "'");
    alphabet.push_back(std::move(name));
  }

  const State initial = state_field(j["initial"], source, "initial", m);

  const auto& finals_json = j["finals"];
  if (!finals_json.is_array()) reject(source, "finals", "expected an array of states");
  std::vector<State> finals;
  for (std::size_t i = 0; i < finals_json.size(); ++i) {
    finals.push_back(state_field(finals_json[i], source, "finals[" + std::to_string(i) + "]", m));
  }

  const auto& transitions = j["transitions"];
  if (!transitions.is_object()) reject(source, "transitions", "expected an object keyed by letter");
  for (const auto& [letter, row] : transitions.items()) {
    if (!seen.count(letter)) reject(source, "transitions." + letter, "letter not in alphabet");
  }
  std::vector<Transformation> delta;
  for (const auto& letter : alphabet) {
    const std::string field = "transitions." + letter;
    if (!transitions.contains(letter)) reject(source, field, "missing");
    const auto& row = transitions[letter];
    if (!row.is_array() || static_cast<std::int64_t>(row.size()) != m) {
      reject(source, field, "expected an array of " + std::to_string(m) + " states");
    }
    std::vector<State> images;
    for (std::size_t q = 0; q < row.size(); ++q) {
      images.push_back(state_field(row[q], source, field + "[" + std::to_string(q) + "]", m));
    }
    delta.emplace_back(std::move(images));
  }
  return Dfa(static_cast<std::size_t>(m), std::move(alphabet), std::move(delta), std::move(finals), initial);
}

nlohmann::json dfa_to_json(const Dfa& d) {
  nlohmann::json transitions = nlohmann::json::object();
  for (std::size_t x = 0; x < d.letter_count(); ++x) {
    const auto images = d.action(x).images();
    transitions[d.alphabet()[x]] = std::vector<State>(images.begin(), images.end());
  }
  nlohmann::json j;
  j["states"] = d.state_count();
  j["alphabet"] = d.alphabet();
  j["initial"] = d.initial();
  j["finals"] = d.finals();
  j["transitions"] = std::move(transitions);
  return j;
}

Dfa read_dfa_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return dfa_from_json(j, path.string());
}

void write_dfa_file(const std::filesystem::path& path, const Dfa& d) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << dfa_to_json(d).dump(2) << '\n';
}

}  // namespace ssc
