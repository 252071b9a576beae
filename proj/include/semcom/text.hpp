#pragma once

#include <string>
#include <vector>

// Small text utilities shared by the planner, the reflection rule and the
// key-term matcher: lowercase tokenization, light suffix folding and
// n-gram phrase matching.
namespace semcom::text {

// Lowercase alphanumeric tokens, punctuation dropped. "Is there a Traffic
// jam?" -> {"is","there","a","traffic","jam"}.
std::vector<std::string> tokenize(const std::string& s);

std::string to_lower(std::string s);
std::string trim(const std::string& s);

// Candidate canonical forms of a token: the token itself, a de-pluralized
// form and an agentive-suffix reduction ("motorcyclists" -> "motorcycle").
std::vector<std::string> fold_candidates(const std::string& token);

// True when `token` and `term` share a folded form (both sides single words).
bool words_match(const std::string& token, const std::string& term);

// True when the multi-word `phrase` occurs in `tokens` as a contiguous run,
// comparing word by word with folding.
bool phrase_match(const std::vector<std::string>& tokens, const std::string& phrase);

// Number of distinct `terms` entries present in `tokens` (phrases allowed).
int match_count(const std::vector<std::string>& tokens, const std::vector<std::string>& terms);

}  // namespace semcom::text
