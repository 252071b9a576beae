#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semcom/llm_backend.hpp"
#include "semcom/planning.hpp"
#include "semcom/toolbox.hpp"

// Task reflection: judge whether the current plan can fulfill the request.
// A NO verdict sends the transmitter back to planning with the tool excluded.
namespace semcom::reflection {

struct ReflectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict { Yes, No };

struct ReflectionResult {
  Verdict verdict = Verdict::No;
  std::string explanation;  // non-empty
  planning::TaskPlan plan;
};

std::string render_reflection_prompt(
    const std::string& request, const planning::TaskPlan& plan,
    const std::vector<toolbox::ToolDescriptor>& registry,
    const planning::PromptTemplates& templates = planning::PromptTemplates::defaults());

// The first alphabetic token decides: "yes" or "no" (case-folded), anything
// else is a ReflectionError. The remainder is the explanation.
std::pair<Verdict, std::string> parse_verdict(const std::string& text);

// Deterministic rule: YES when the request shares keywords with the plan's
// tool, or when its key term maps to that tool and the tool's labels are
// direct detections (proxy labels such as "accident" only ever route frame
// selection). Other backends answer the rendered prompt, with one re-ask on
// an unparseable completion.
ReflectionResult reflect(
    const std::string& request, const planning::TaskPlan& plan,
    const std::vector<toolbox::ToolDescriptor>& registry, llm::Backend& backend,
    const planning::PromptTemplates& templates = planning::PromptTemplates::defaults());

}  // namespace semcom::reflection
