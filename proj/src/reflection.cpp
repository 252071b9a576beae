#include "semcom/reflection.hpp"

#include <cctype>
#include <sstream>

#include "semcom/frame_selection.hpp"
#include "semcom/text.hpp"

namespace semcom::reflection {

namespace {

std::string replace_all(std::string haystack, const std::string& needle,
                        const std::string& value) {
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    haystack.replace(pos, needle.size(), value);
    pos += value.size();
  }
  return haystack;
}

}  // namespace

std::string render_reflection_prompt(const std::string& request, const planning::TaskPlan& plan,
                                     const std::vector<toolbox::ToolDescriptor>& registry,
                                     const planning::PromptTemplates& templates) {
  std::string toolbox_text = toolbox::describe_registry(registry);
  std::string prompt = templates.reflection;
  prompt = replace_all(prompt, "{{REQUEST}}", request);
  prompt = replace_all(prompt, "{{PLAN}}", plan.raw);
  prompt = replace_all(prompt, "{{TOOLBOX}}", toolbox_text);
  return prompt;
}

std::pair<Verdict, std::string> parse_verdict(const std::string& reply) {
  std::size_t begin = 0;
  while (begin < reply.size() && !std::isalpha(static_cast<unsigned char>(reply[begin]))) ++begin;
  std::size_t end = begin;
  while (end < reply.size() && std::isalpha(static_cast<unsigned char>(reply[end]))) ++end;
  std::string token = text::to_lower(reply.substr(begin, end - begin));

  Verdict verdict;
  if (token == "yes") {
    verdict = Verdict::Yes;
  } else if (token == "no") {
    verdict = Verdict::No;
  } else {
    throw ReflectionError("reflection reply must start with \"Yes\" or \"No\", got: " +
                          reply.substr(0, 40));
  }
  std::size_t rest = end;
  while (rest < reply.size() &&
         (std::isspace(static_cast<unsigned char>(reply[rest])) || reply[rest] == ',' ||
          reply[rest] == '.' || reply[rest] == ':' || reply[rest] == '!'))
    ++rest;
  std::string explanation = text::trim(reply.substr(rest));
  if (explanation.empty()) explanation = text::trim(reply);
  return {verdict, explanation};
}

namespace {

ReflectionResult reflect_deterministic(const std::string& request, const planning::TaskPlan& plan,
                                       const std::vector<toolbox::ToolDescriptor>& registry,
                                       llm::Backend& backend) {
  const toolbox::ToolDescriptor* tool = toolbox::find_tool(plan.tool);
  int score = tool ? planning::keyword_score(request, *tool) : 0;

  ReflectionResult result;
  result.plan = plan;
  if (score > 0) {
    result.verdict = Verdict::Yes;
    result.explanation =
        "Yes, this task plan can address the receiver's request. The Video Sampler step narrows "
        "the analysis to the relevant frames, the " +
        plan.tool +
        " tool matches the terms of the request, and the Analysis step can answer the request "
        "from its execution results.";
    return result;
  }

  auto key = frame_selection::extract_key_term(request, registry, backend);
  if (key && key->tool == plan.tool && tool && !tool->labels_are_proxies) {
    result.verdict = Verdict::Yes;
    result.explanation =
        "Yes, this task plan can address the receiver's request. The request names '" +
        key->key_term + "', which " + plan.tool +
        " can detect directly, so the Analysis step can answer the request from its execution "
        "results.";
    return result;
  }

  result.verdict = Verdict::No;
  if (key && key->tool == plan.tool) {
    // Proxy labels: a stopped vehicle hints at an accident but the tool
    // cannot identify one, so the plan does not fulfill the request.
    result.explanation =
        "No, the task plan cannot exactly address the receiver's request. While the plan can "
        "sample frames, run " +
        plan.tool +
        ", and analyze the results, it does not have the capability to specifically identify " +
        (key ? key->key_term : "the requested event") + ".";
  } else {
    result.explanation =
        "No, the task plan cannot exactly address the receiver's request. The " + plan.tool +
        " tool does not match the terms of the request, so its execution results would not "
        "answer it.";
  }
  return result;
}

}  // namespace

ReflectionResult reflect(const std::string& request, const planning::TaskPlan& plan,
                         const std::vector<toolbox::ToolDescriptor>& registry,
                         llm::Backend& backend, const planning::PromptTemplates& templates) {
  if (backend.kind() == llm::BackendKind::Deterministic)
    return reflect_deterministic(request, plan, registry, backend);

  std::string prompt = render_reflection_prompt(request, plan, registry, templates);
  std::string reply = backend.complete(prompt);
  ReflectionResult result;
  result.plan = plan;
  try {
    auto [verdict, explanation] = parse_verdict(reply);
    result.verdict = verdict;
    result.explanation = explanation;
  } catch (const ReflectionError&) {
    std::string reminder = prompt +
                           "\nReminder: your answer must start with \"Yes\" or \"No\", followed "
                           "by your explanation.\n";
    reply = backend.complete(reminder);
    auto [verdict, explanation] = parse_verdict(reply);  // throws after the re-ask
    result.verdict = verdict;
    result.explanation = explanation;
  }
  return result;
}

}  // namespace semcom::reflection
