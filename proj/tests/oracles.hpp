#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "semcom/dataset.hpp"

// Brute-force recomputations over raw annotations, kept independent of the
// toolbox executors they check.
namespace semcom::oracles {

inline double brute_density(const dataset::AnnotatedClip& clip, std::uint32_t frame_id) {
  double occupied = 0;
  for (const auto& v : clip.frames[frame_id].vehicles) occupied += v.bbox.w * v.bbox.h;
  double d = occupied / clip.road_area_px;
  if (d > 1.0) d = 1.0;
  return std::round(d * 100.0) / 100.0;
}

inline std::size_t brute_flow(const dataset::AnnotatedClip& clip,
                              const std::vector<std::uint32_t>& frame_ids) {
  std::set<std::uint32_t> tracks;
  for (auto id : frame_ids)
    for (const auto& v : clip.frames[id].vehicles) tracks.insert(v.track_id);
  return tracks.size();
}

// Track id -> moving flag, using the first/last selected appearance rule.
inline std::map<std::uint32_t, bool> brute_motion(const dataset::AnnotatedClip& clip,
                                                  const std::vector<std::uint32_t>& frame_ids,
                                                  double tau) {
  std::vector<std::uint32_t> sorted = frame_ids;
  std::sort(sorted.begin(), sorted.end());
  std::map<std::uint32_t, std::vector<double>> areas;  // appearance order
  for (auto id : sorted)
    for (const auto& v : clip.frames[id].vehicles)
      areas[v.track_id].push_back(v.bbox.w * v.bbox.h);
  std::map<std::uint32_t, bool> moving;
  for (const auto& [track, list] : areas) {
    if (list.size() < 2) {
      moving[track] = true;
      continue;
    }
    double a = list.front(), b = list.back();
    double ratio = std::max(a, b) / std::min(a, b);
    moving[track] = ratio > tau;
  }
  return moving;
}

// Deterministic keyword scoring mirror used to cross-check the planner:
// counts distinct terms present, with the same folding rules applied through
// the public text helpers.
inline int brute_keyword_score(const std::vector<std::string>& tokens,
                               const std::vector<std::string>& terms,
                               bool (*phrase_match)(const std::vector<std::string>&,
                                                    const std::string&)) {
  int score = 0;
  for (const auto& term : terms)
    if (phrase_match(tokens, term)) ++score;
  return score;
}

// Greedy min-gap de-duplication followed by a cap, written independently of
// the frame-selection module.
inline std::vector<std::uint32_t> brute_dedup(const std::set<std::uint32_t>& candidates,
                                              std::uint32_t min_gap, std::size_t cap) {
  std::vector<std::uint32_t> kept;
  for (auto id : candidates) {
    if (kept.empty() || id - kept.back() >= min_gap) kept.push_back(id);
  }
  if (kept.size() > cap) kept.resize(cap);
  return kept;
}

}  // namespace semcom::oracles
