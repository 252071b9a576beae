#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semcom/dataset.hpp"
#include "semcom/llm_backend.hpp"
#include "semcom/planning.hpp"
#include "semcom/toolbox.hpp"

// Fallback path when no task plan can fulfill the request: extract a key
// term, map it to a tool through the label sets, execute, and send the most
// relevant frames.
namespace semcom::frame_selection {

struct KeyTermMatch {
  std::string key_term;  // canonical label, lowercase
  std::string tool;
  bool operator==(const KeyTermMatch&) const = default;
};

// nullopt means "No option": no label matches the request.
using KeyTermResult = std::optional<KeyTermMatch>;

// Deterministic scan in reading order (longest phrase first at each
// position), ties across tools resolved by registry order. Other backends
// are asked for a single label; an answer outside the label sets degrades to
// "No option".
KeyTermResult extract_key_term(
    const std::string& request, const std::vector<toolbox::ToolDescriptor>& registry,
    llm::Backend& backend,
    const planning::PromptTemplates& templates = planning::PromptTemplates::defaults());

struct SelectionLimits {
  int max_frames = 5;
  double min_gap_seconds = 1.0;  // minimum spacing between kept frames
};

// Candidates are the frames matched by the key term; candidates closer than
// min_gap frames to an already-kept frame are dropped, then the list is
// capped. Output is sorted ascending.
std::vector<std::uint32_t> select_relevant_frames(const KeyTermMatch& key,
                                                  const toolbox::ExecutionResult& result,
                                                  int max_frames, std::uint32_t min_gap_frames);

struct PipelineResult {
  std::vector<std::uint32_t> frame_ids;  // non-empty for non-empty clips
  std::string explanation;
  KeyTermResult key;
  std::string tool_used;  // empty on the degraded path
  bool degraded = false;  // no key term, or no matching frames
};

struct PipelineParams {
  SelectionLimits limits;
  planning::SampleOptions sampling;
  toolbox::ToolParams tool_params;
};

// Video Sampler -> key-term tool selection -> frame selection. Without a
// usable key term (or with no matching frames) it falls back to an evenly
// spaced subset of the sampled frames, so non-empty clips always yield
// frames.
PipelineResult run_pipeline(
    const std::string& request, const dataset::AnnotatedClip& clip,
    const std::vector<toolbox::ToolDescriptor>& registry, llm::Backend& backend,
    const PipelineParams& params = {},
    const planning::PromptTemplates& templates = planning::PromptTemplates::defaults());

}  // namespace semcom::frame_selection
