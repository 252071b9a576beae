#include "semcom/planning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "semcom/text.hpp"

namespace semcom::planning {

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

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

constexpr const char* kPlanningTemplate =
    "You are equipped with a toolbox of specialized video analysis tools.\n"
    "Receiver's request: {{REQUEST}}\n"
    "Video information: {{CLIP_INFO}}\n"
    "Toolbox:\n"
    "{{TOOLBOX}}\n"
    "To fulfill the receiver's request, you need to plan first. The plan consists of the "
    "following three steps in order: Video Sampler, Tool Selection, and Analysis.\n"
    "In the Tool Selection step, you must select one proper tool from the toolbox that can help "
    "to perform detection or estimation in the video. You should only use one tool from the "
    "toolbox each time in this step.\n"
    "Your response on task planning should be logical and step by step, with each step divided "
    "by the symbol \"|\". Here's an example: \"Video Sampler | Vehicle Density Estimation | "
    "Analysis\".\n";

constexpr const char* kReflectionTemplate =
    "Receiver's request: {{REQUEST}}\n"
    "Current task plan: {{PLAN}}\n"
    "Toolbox:\n"
    "{{TOOLBOX}}\n"
    "The overall framework to solve this request consists of three steps: Video Sampler, Tool "
    "Selection, and Analysis.\n"
    "Do you think the current task plan \"{{PLAN}}\" can exactly address the receiver's "
    "request? You must answer with \"Yes\" or \"No\". Also, you must provide your explanations "
    "on this answer.\n";

constexpr const char* kKeyTermTemplate =
    "Receiver's request: {{REQUEST}}\n"
    "Candidate labels per tool:\n"
    "{{LABELS}}\n"
    "Select exactly one label from the candidate labels that best represents the receiver's "
    "primary concern in the request. If no label matches the request, output \"No option\". "
    "Respond with the label text only.\n";

}  // namespace

const PromptTemplates& PromptTemplates::defaults() {
  static const PromptTemplates templates{kPlanningTemplate, kReflectionTemplate, kKeyTermTemplate};
  return templates;
}

PromptTemplates PromptTemplates::load_dir(const std::string& dir) {
  PromptTemplates templates = defaults();
  if (auto t = read_file(dir + "/planning.txt")) templates.planning = *t;
  if (auto t = read_file(dir + "/reflection.txt")) templates.reflection = *t;
  if (auto t = read_file(dir + "/key_term.txt")) templates.key_term = *t;
  return templates;
}

SampleResult sample_frames(const std::string& request, const ClipMeta& clip,
                           const SampleOptions& options) {
  if (clip.frame_count == 0 || !(clip.fps > 0))
    throw PlanError(PlanError::Kind::BadCompletion, "invalid clip metadata");

  const std::string lowered = text::to_lower(request);
  const double fps = clip.fps;
  const std::int64_t frame_count = clip.frame_count;

  std::int64_t begin = 0, end = frame_count;
  bool fallback = false;

  static const std::regex first_re("first\\s+(\\d+(?:\\.\\d+)?)\\s+seconds?");
  static const std::regex last_re("last\\s+(\\d+(?:\\.\\d+)?)\\s+seconds?");
  static const std::regex at_re("at\\s+second\\s+(\\d+(?:\\.\\d+)?)");
  std::smatch m;
  if (std::regex_search(lowered, m, first_re)) {
    double k = std::stod(m[1]);
    begin = 0;
    end = static_cast<std::int64_t>(std::llround(k * fps));
  } else if (std::regex_search(lowered, m, last_re)) {
    double k = std::stod(m[1]);
    begin = frame_count - static_cast<std::int64_t>(std::llround(k * fps));
    end = frame_count;
  } else if (std::regex_search(lowered, m, at_re)) {
    double s = std::stod(m[1]);
    begin = static_cast<std::int64_t>(std::llround(s * fps));
    end = begin + static_cast<std::int64_t>(std::llround(fps));
  }
  // "whole video" and cue-free requests keep the full range.

  if (begin >= frame_count || end <= 0 || begin >= end) {
    begin = 0;
    end = frame_count;
    fallback = true;
  }
  begin = std::max<std::int64_t>(begin, 0);
  end = std::min(end, frame_count);

  double sps = options.samples_per_second > 0 ? options.samples_per_second : 2.0;
  std::int64_t stride = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(fps / sps)));

  SampleResult result;
  result.window_fallback = fallback;
  for (std::int64_t f = begin; f < end; f += stride)
    result.frame_ids.push_back(static_cast<std::uint32_t>(f));
  if (result.frame_ids.empty())
    result.frame_ids.push_back(static_cast<std::uint32_t>(begin));
  return result;
}

std::string render_planning_prompt(const PlannerContext& ctx,
                                   const std::vector<toolbox::ToolDescriptor>& registry,
                                   const PromptTemplates& templates) {
  std::size_t available = 0;
  for (const auto& tool : registry)
    if (!ctx.excluded_tools.count(tool.name)) ++available;
  if (available == 0)
    throw PlanError(PlanError::Kind::Exhausted, "every tool in the toolbox has been excluded");

  std::ostringstream clip_info;
  clip_info << "frame rate " << ctx.clip.fps << " fps, " << ctx.clip.frame_count
            << " frames in total";

  std::string toolbox_text = toolbox::describe_registry(registry, ctx.excluded_tools);

  std::string prompt = templates.planning;
  prompt = replace_all(prompt, "{{REQUEST}}", ctx.request);
  prompt = replace_all(prompt, "{{CLIP_INFO}}", clip_info.str());
  prompt = replace_all(prompt, "{{TOOLBOX}}", toolbox_text);
  return prompt;
}

TaskPlan parse_plan(const std::string& raw) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : raw) {
    if (c == '|') {
      parts.push_back(text::trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(text::trim(current));

  if (parts.size() != 3)
    throw PlanError(PlanError::Kind::StepCount,
                    "plan must have exactly 3 steps, got " + std::to_string(parts.size()));
  if (text::to_lower(parts[0]) != text::to_lower(kFirstStep))
    throw PlanError(PlanError::Kind::StepOrder, "first step must be \"Video Sampler\"");
  if (text::to_lower(parts[2]) != text::to_lower(kLastStep))
    throw PlanError(PlanError::Kind::StepOrder, "last step must be \"Analysis\"");
  const toolbox::ToolDescriptor* tool = toolbox::find_tool(parts[1]);
  if (!tool)
    throw PlanError(PlanError::Kind::UnknownTool, "unknown tool \"" + parts[1] + "\"");

  TaskPlan plan;
  plan.tool = tool->name;
  plan.raw = text::trim(raw);
  return plan;
}

int keyword_score(const std::string& request, const toolbox::ToolDescriptor& tool) {
  return text::match_count(text::tokenize(request), tool.keywords);
}

std::string select_tool_deterministic(const PlannerContext& ctx,
                                      const std::vector<toolbox::ToolDescriptor>& registry) {
  const toolbox::ToolDescriptor* best = nullptr;
  int best_score = -1;
  for (const auto& tool : registry) {
    if (ctx.excluded_tools.count(tool.name)) continue;
    int score = keyword_score(ctx.request, tool);
    if (score > best_score) {  // ties keep the earlier (lower-index) tool
      best = &tool;
      best_score = score;
    }
  }
  if (!best)
    throw PlanError(PlanError::Kind::Exhausted, "every tool in the toolbox has been excluded");
  return best->name;
}

TaskPlan make_plan(const std::string& tool) {
  TaskPlan plan;
  plan.tool = tool;
  plan.raw = std::string(kFirstStep) + " | " + tool + " | " + kLastStep;
  return plan;
}

TaskPlan generate_plan(const PlannerContext& ctx,
                       const std::vector<toolbox::ToolDescriptor>& registry, llm::Backend& backend,
                       const PromptTemplates& templates) {
  if (backend.kind() == llm::BackendKind::Deterministic) {
    std::string tool = select_tool_deterministic(ctx, registry);
    return make_plan(tool);
  }

  std::string prompt = render_planning_prompt(ctx, registry, templates);
  TaskPlan plan;
  try {
    plan = parse_plan(backend.complete(prompt));
  } catch (const PlanError& first_error) {
    if (first_error.kind == PlanError::Kind::Exhausted) throw;
    std::string reminder =
        prompt +
        "\nReminder: respond with exactly three steps separated by \"|\", for example "
        "\"Video Sampler | Vehicle Density Estimation | Analysis\".\n";
    try {
      plan = parse_plan(backend.complete(reminder));
    } catch (const PlanError& second_error) {
      throw PlanError(PlanError::Kind::BadCompletion,
                      std::string("completion was not a valid plan after a re-ask: ") +
                          second_error.what());
    }
  }
  if (ctx.excluded_tools.count(plan.tool))
    throw PlanError(PlanError::Kind::ExcludedTool,
                    "plan names excluded tool \"" + plan.tool + "\"");
  return plan;
}

namespace {

std::string fulfil_prefix() {
  return "I can fulfill your request on the semantic information directly. ";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fmt_short(double d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", d);
  std::string s = buf;
  while (s.size() > 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string analyze_deterministic(const TaskPlan& plan, const toolbox::ExecutionResult& result,
                                  const AnalysisParams& params) {
  std::ostringstream out;
  out << fulfil_prefix();

  const std::string& tool = plan.tool;
  if (tool == "Vehicle Density Estimation") {
    double max_density = 0.0;
    std::map<double, int> histogram;
    for (const auto& [id, findings] : result.per_frame)
      for (const auto& f : findings)
        if (f.value) {
          max_density = std::max(max_density, *f.value);
          histogram[*f.value]++;
        }
    double mode = 0.0;
    int best = -1;
    for (const auto& [value, count] : histogram)
      if (count > best) best = count, mode = value;
    bool jam = max_density >= params.jam_density_threshold;
    if (jam) {
      out << "Based on the analysis of the video, there is a traffic jam detected. The vehicle "
          << "density reaches " << fmt_short(max_density)
          << ", which indicates heavy traffic congestion.";
    } else {
      out << "Based on the analysis of the video, there is no traffic jam detected. The traffic "
          << "density remains " << fmt_short(mode) << " for most of the video and peaks at "
          << fmt_short(max_density) << ", which is still considered light traffic.";
    }
  } else if (tool == "Object Detection") {
    std::map<std::string, int> frames_with_label;
    for (const auto& [id, findings] : result.per_frame) {
      std::set<std::string> labels_here;
      for (const auto& f : findings)
        for (const auto& l : f.labels) labels_here.insert(l);
      for (const auto& l : labels_here) frames_with_label[l]++;
    }
    if (frames_with_label.empty()) {
      out << "No objects were detected in the sampled frames.";
    } else {
      std::vector<std::string> parts;
      for (const auto& [label, count] : frames_with_label)
        parts.push_back(label + " in " + std::to_string(count) + " of " +
                        std::to_string(result.frame_ids.size()) + " sampled frames");
      out << "Based on the analysis of the video, Object Detection found: " << join(parts, ", ")
          << ".";
    }
  } else if (tool == "Vehicle Detection") {
    std::set<std::string> seen;
    for (const auto& [id, findings] : result.per_frame)
      for (const auto& f : findings)
        if (f.labels.size() == 2) seen.insert(f.labels[0] + " " + f.labels[1]);
    if (seen.empty()) {
      out << "No vehicles were detected in the sampled frames.";
    } else {
      out << "Based on the analysis of the video, the following vehicles were observed: "
          << join({seen.begin(), seen.end()}, ", ") << ".";
    }
  } else if (tool == "License Plate Detection") {
    std::set<std::string> plates;
    for (const auto& [id, findings] : result.per_frame)
      for (const auto& f : findings) {
        std::string joined;
        for (char c : f.text)
          if (std::isalnum(static_cast<unsigned char>(c))) joined.push_back(c);
        if (!joined.empty()) plates.insert(joined);
      }
    if (plates.empty()) {
      out << "No license plates were detected in the sampled frames.";
    } else {
      out << "Based on the analysis of the video, the following license plates were read: "
          << join({plates.begin(), plates.end()}, ", ") << ".";
    }
  } else if (tool == "Traffic Sign Detection") {
    std::set<std::string> names;
    for (const auto& [id, findings] : result.per_frame)
      for (const auto& f : findings)
        if (f.labels.size() >= 2) names.insert(f.labels[1]);
    if (names.empty()) {
      out << "No traffic signs were detected in the sampled frames.";
    } else {
      out << "Based on the analysis of the video, the following traffic signs were detected: "
          << join({names.begin(), names.end()}, ", ") << ".";
    }
  } else if (tool == "Vehicle Motion Detection") {
    auto tracks = result.stats.count("tracks") ? result.stats.at("tracks") : 0.0;
    auto stopped = result.stats.count("not_moving") ? result.stats.at("not_moving") : 0.0;
    if (tracks <= 0) {
      out << "No vehicles were tracked across the sampled frames.";
    } else if (stopped <= 0) {
      out << "Based on the analysis of the video, all " << static_cast<int>(tracks)
          << " tracked vehicles are moving.";
    } else {
      out << "Based on the analysis of the video, " << static_cast<int>(stopped) << " of "
          << static_cast<int>(tracks)
          << " tracked vehicles are not moving; the others are moving.";
    }
  } else if (tool == "Lane Number Detection") {
    int lanes = result.stats.count("lanes") ? static_cast<int>(result.stats.at("lanes")) : 0;
    out << "Based on the analysis of the video, the detected number of road lanes is " << lanes
        << ".";
  } else if (tool == "Traffic Flow Estimation") {
    int total =
        result.stats.count("total_vehicles") ? static_cast<int>(result.stats.at("total_vehicles")) : 0;
    if (total == 0) {
      out << "No vehicles were observed in the sampled frames.";
    } else {
      out << "Based on the analysis of the video, a total of " << total
          << " different vehicles appear in the sampled interval.";
    }
  } else {
    out << "Analysis of the execution results is attached below.";
  }

  out << "\n\nExecution results (" << result.tool << "):\n" << result.summary;
  return out.str();
}

}  // namespace

std::string analyze(const std::string& request, const TaskPlan& plan,
                    const toolbox::ExecutionResult& result, llm::Backend& backend,
                    const AnalysisParams& params) {
  if (backend.kind() == llm::BackendKind::Deterministic)
    return analyze_deterministic(plan, result, params);

  std::ostringstream prompt;
  prompt << "Receiver's request: " << request << "\n"
         << "The task plan \"" << plan.raw << "\" was executed. The execution results of "
         << result.tool << " are:\n"
         << result.summary << "\n"
         << "Answer the receiver's request based only on these execution results.\n";
  std::string answer = text::trim(backend.complete(prompt.str()));
  if (answer.empty())
    throw llm::BackendError(llm::BackendError::Kind::BadResponse, "empty analysis completion");
  return answer;
}

}  // namespace semcom::planning
