#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "semcom/llm_backend.hpp"
#include "semcom/toolbox.hpp"

// Task planning: the fixed three-step pipeline (Video Sampler, Tool
// Selection, Analysis) rendered as a pipe-delimited plan string, plus the
// frame sampler and the deterministic tool-selection rule.
namespace semcom::planning {

struct PlanError : std::runtime_error {
  enum class Kind { StepCount, StepOrder, UnknownTool, ExcludedTool, Exhausted, BadCompletion };
  Kind kind;
  PlanError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

inline constexpr const char* kFirstStep = "Video Sampler";
inline constexpr const char* kLastStep = "Analysis";

struct TaskPlan {
  std::string tool;  // registered tool name, the middle step
  std::string raw;   // "Video Sampler | <tool> | Analysis"
  std::optional<std::vector<std::uint32_t>> sampled_frames;  // set at execution
  bool operator==(const TaskPlan& other) const {
    return tool == other.tool && raw == other.raw;
  }
};

struct ClipMeta {
  double fps = 30.0;
  std::uint32_t frame_count = 0;
};

struct PlannerContext {
  std::string request;
  ClipMeta clip;
  std::set<std::string> excluded_tools;  // tools already tried this session
};

struct SampleOptions {
  double samples_per_second = 2.0;
};

struct SampleResult {
  std::vector<std::uint32_t> frame_ids;  // non-empty, sorted, in range
  bool window_fallback = false;  // temporal cue fell outside the clip
};

// Restricts to a temporal window when the request names one ("first K
// seconds", "last K seconds", "at second S", "whole video"), then subsamples
// at stride max(1, floor(fps / samples_per_second)).
SampleResult sample_frames(const std::string& request, const ClipMeta& clip,
                           const SampleOptions& options = {});

// Prompt templates, overridable from plain-text files (`{{NAME}}`
// placeholders) so they can be tuned without rebuilds.
struct PromptTemplates {
  std::string planning;
  std::string reflection;
  std::string key_term;
  static const PromptTemplates& defaults();
  static PromptTemplates load_dir(const std::string& dir);  // missing file -> default
};

std::string render_planning_prompt(const PlannerContext& ctx,
                                   const std::vector<toolbox::ToolDescriptor>& registry,
                                   const PromptTemplates& templates = PromptTemplates::defaults());

// Splits on '|', trims, and enforces the three fixed steps; the middle step
// must name a registered tool.
TaskPlan parse_plan(const std::string& text);

// Keyword-hit scoring: highest count of matched terms wins, ties break on
// registry order, all-zero scores fall back to the lowest-index tool.
int keyword_score(const std::string& request, const toolbox::ToolDescriptor& tool);
std::string select_tool_deterministic(const PlannerContext& ctx,
                                      const std::vector<toolbox::ToolDescriptor>& registry);

TaskPlan make_plan(const std::string& tool);

// Deterministic backend plans via select_tool_deterministic; other backends
// get the rendered prompt, with one re-ask when the completion fails to
// parse. An excluded tool in a parsed plan is an error.
TaskPlan generate_plan(const PlannerContext& ctx,
                       const std::vector<toolbox::ToolDescriptor>& registry, llm::Backend& backend,
                       const PromptTemplates& templates = PromptTemplates::defaults());

struct AnalysisParams {
  double jam_density_threshold = 0.5;  // max density at or above -> jam
};

// Renders the textual answer for a fulfilled plan from the execution result.
std::string analyze(const std::string& request, const TaskPlan& plan,
                    const toolbox::ExecutionResult& result, llm::Backend& backend,
                    const AnalysisParams& params = {});

}  // namespace semcom::planning
