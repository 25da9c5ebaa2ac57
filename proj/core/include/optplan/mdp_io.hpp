#pragma once

#include <string>

#include "optplan/combinatorial.hpp"
#include "optplan/mdp.hpp"

namespace optplan {

/// {n_states, n_actions, gamma, goal, transitions: [[s, a, s', p], ...],
///  rewards: [[s, a, r], ...]}. Probabilities may be numbers or decimal
/// strings. Missing rewards default to 0. The result is validated; any
/// problem raises an input error.
Mdp parse_mdp_json(const std::string& text);
std::string mdp_to_json(const Mdp& mdp);

/// {"universe": [...], "subsets": [[...], ...]}
SetCoverInstance parse_set_cover_json(const std::string& text);

/// Whole-file read; throws an input error when the file cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace optplan
