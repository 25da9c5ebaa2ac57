#include "optplan/mdp_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "optplan/error.hpp"

namespace optplan {

namespace {

using nlohmann::json;

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string(what) + ": " + e.what());
  }
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw input_error("mdp: '" + field + "' must be an integer");
  return v.get<int>();
}

double as_number(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    double out = 0.0;
    try {
      out = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw input_error("mdp: '" + field + "' has bad number \"" + s + "\"");
    return out;
  }
  throw input_error("mdp: '" + field + "' must be a number or decimal string");
}

const json& field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw input_error(std::string("mdp: missing field '") + name + "'");
  return doc.at(name);
}

}  // namespace

Mdp parse_mdp_json(const std::string& text) {
  const json doc = parse_document(text, "mdp");
  if (!doc.is_object()) throw input_error("mdp: top level must be an object");

  const int n = as_int(field(doc, "n_states"), "n_states");
  const int m = as_int(field(doc, "n_actions"), "n_actions");
  if (n <= 0 || m <= 0) throw input_error("mdp: n_states and n_actions must be positive");
  const double gamma = as_number(field(doc, "gamma"), "gamma");
  const int goal = as_int(field(doc, "goal"), "goal");
  if (goal < 0 || goal >= n) throw input_error("mdp: goal out of range");

  Mdp mdp(n, m, gamma, goal);
  auto check_sa = [&](int s, int a, std::size_t row) {
    if (s < 0 || s >= n || a < 0 || a >= m)
      throw input_error("mdp: row " + std::to_string(row) + " has state/action out of range");
  };

  const json& transitions = field(doc, "transitions");
  if (!transitions.is_array()) throw input_error("mdp: 'transitions' must be an array");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const json& row = transitions[i];
    if (!row.is_array() || row.size() != 4) throw input_error("mdp: transition " + std::to_string(i) + " must be [s, a, s', p]");
    const int s = as_int(row[0], "transitions");
    const int a = as_int(row[1], "transitions");
    const int next = as_int(row[2], "transitions");
    check_sa(s, a, i);
    if (next < 0 || next >= n) throw input_error("mdp: transition " + std::to_string(i) + " has s' out of range");
    mdp.transitions[mdp.index(s, a)].push_back({next, as_number(row[3], "transitions")});
  }

  if (doc.contains("rewards")) {
    const json& rewards = doc.at("rewards");
    if (!rewards.is_array()) throw input_error("mdp: 'rewards' must be an array");
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      const json& row = rewards[i];
      if (!row.is_array() || row.size() != 3) throw input_error("mdp: reward " + std::to_string(i) + " must be [s, a, r]");
      const int s = as_int(row[0], "rewards");
      const int a = as_int(row[1], "rewards");
      check_sa(s, a, i);
      mdp.rewards[mdp.index(s, a)] = as_number(row[2], "rewards");
    }
  }

  require_valid(mdp);
  return mdp;
}

std::string mdp_to_json(const Mdp& mdp) {
  nlohmann::ordered_json doc;
  doc["n_states"] = mdp.n_states;
  doc["n_actions"] = mdp.n_actions;
  doc["gamma"] = mdp.gamma;
  doc["goal"] = mdp.goal;
  auto transitions = nlohmann::ordered_json::array();
  auto rewards = nlohmann::ordered_json::array();
  for (State s = 0; s < mdp.n_states; ++s) {
    for (Action a = 0; a < mdp.n_actions; ++a) {
      for (const Transition& t : mdp.outcomes(s, a)) transitions.push_back({s, a, t.next, t.prob});
      if (mdp.reward(s, a) != 0.0) rewards.push_back({s, a, mdp.reward(s, a)});
    }
  }
  doc["transitions"] = std::move(transitions);
  doc["rewards"] = std::move(rewards);
  return doc.dump() + "\n";
}

SetCoverInstance parse_set_cover_json(const std::string& text) {
  const json doc = parse_document(text, "set cover");
  SetCoverInstance inst;
  try {
    inst.universe = doc.at("universe").get<std::vector<int>>();
    inst.subsets = doc.at("subsets").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw input_error(std::string("set cover: ") + e.what());
  }
  return inst;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace optplan
