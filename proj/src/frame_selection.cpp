#include "semcom/frame_selection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semcom/text.hpp"

namespace semcom::frame_selection {

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

bool phrase_equals_label(const std::vector<std::string>& tokens, std::size_t pos, std::size_t len,
                         const std::string& label) {
  auto words = text::tokenize(label);
  if (words.size() != len) return false;
  for (std::size_t i = 0; i < len; ++i)
    if (!text::words_match(tokens[pos + i], words[i])) return false;
  return true;
}

KeyTermResult match_tokens(const std::vector<std::string>& tokens,
                           const std::vector<toolbox::ToolDescriptor>& registry) {
  for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
    std::size_t longest = std::min<std::size_t>(3, tokens.size() - pos);
    for (std::size_t len = longest; len >= 1; --len) {
      for (const auto& tool : registry) {  // registry order breaks ties
        for (const auto& label : tool.labels) {
          if (phrase_equals_label(tokens, pos, len, label))
            return KeyTermMatch{label, tool.name};
        }
      }
    }
  }
  return std::nullopt;
}

KeyTermResult extract_key_term_deterministic(
    const std::string& request, const std::vector<toolbox::ToolDescriptor>& registry) {
  return match_tokens(text::tokenize(request), registry);
}

constexpr const char* kNoOption = "no option";

}  // namespace

KeyTermResult extract_key_term(const std::string& request,
                               const std::vector<toolbox::ToolDescriptor>& registry,
                               llm::Backend& backend,
                               const planning::PromptTemplates& templates) {
  if (backend.kind() == llm::BackendKind::Deterministic)
    return extract_key_term_deterministic(request, registry);

  std::string label_lines;
  for (const auto& tool : registry) {
    if (tool.labels.empty()) continue;
    label_lines += tool.name + ": ";
    for (std::size_t i = 0; i < tool.labels.size(); ++i) {
      if (i) label_lines += ", ";
      label_lines += tool.labels[i];
    }
    label_lines += "\n";
  }
  std::string prompt = templates.key_term;
  prompt = replace_all(prompt, "{{REQUEST}}", request);
  prompt = replace_all(prompt, "{{LABELS}}", label_lines);

  std::string reply = text::trim(backend.complete(prompt));
  if (text::to_lower(reply) == kNoOption) return std::nullopt;
  // An answer outside the label sets degrades to "No option".
  return match_tokens(text::tokenize(reply), registry);
}

std::vector<std::uint32_t> select_relevant_frames(const KeyTermMatch& key,
                                                  const toolbox::ExecutionResult& result,
                                                  int max_frames, std::uint32_t min_gap_frames) {
  std::set<std::uint32_t> candidates = result.matched_frame_ids(key.key_term);
  std::vector<std::uint32_t> kept;
  for (std::uint32_t id : candidates) {
    if (!kept.empty() && id - kept.back() < min_gap_frames) continue;
    kept.push_back(id);
  }
  if (max_frames >= 0 && kept.size() > static_cast<std::size_t>(max_frames))
    kept.resize(static_cast<std::size_t>(max_frames));
  return kept;
}

namespace {

// Evenly spread subset, then the same minimum-gap rule as the key-term path.
std::vector<std::uint32_t> spread_sample(const std::vector<std::uint32_t>& frames, int max_frames,
                                         std::uint32_t min_gap_frames) {
  std::vector<std::uint32_t> picked;
  if (frames.empty() || max_frames <= 0) return picked;
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(max_frames), frames.size());
  if (k == 1) {
    picked.push_back(frames.front());
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t idx = i * (frames.size() - 1) / (k - 1);
      picked.push_back(frames[idx]);
    }
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  }
  std::vector<std::uint32_t> kept;
  for (std::uint32_t id : picked) {
    if (!kept.empty() && id - kept.back() < min_gap_frames) continue;
    kept.push_back(id);
  }
  return kept;
}

constexpr const char* kCannotFulfill =
    "I cannot fulfill your request on the semantic information directly.";

}  // namespace

PipelineResult run_pipeline(const std::string& request, const dataset::AnnotatedClip& clip,
                            const std::vector<toolbox::ToolDescriptor>& registry,
                            llm::Backend& backend, const PipelineParams& params,
                            const planning::PromptTemplates& templates) {
  planning::ClipMeta meta{clip.fps, clip.frame_count};
  auto sample = planning::sample_frames(request, meta, params.sampling);
  std::uint32_t min_gap = static_cast<std::uint32_t>(
      std::max<std::int64_t>(0, std::llround(clip.fps * params.limits.min_gap_seconds)));

  PipelineResult out;
  try {
    out.key = extract_key_term(request, registry, backend, templates);
  } catch (const llm::BackendError&) {
    out.key = std::nullopt;  // degrade instead of dropping the session
  }

  if (out.key) {
    try {
      auto exec = toolbox::run_tool(out.key->tool, clip, sample.frame_ids, params.tool_params);
      out.frame_ids =
          select_relevant_frames(*out.key, exec, params.limits.max_frames, min_gap);
      if (!out.frame_ids.empty()) {
        out.tool_used = out.key->tool;
        out.explanation =
            std::string(kCannotFulfill) +
            " However, I send the most relevant video frames to you. You may get the required "
            "semantic information from the attached video frames.";
        return out;
      }
    } catch (const toolbox::ToolError&) {
      // fall through to the degraded path
    }
  }

  out.degraded = true;
  out.frame_ids = spread_sample(sample.frame_ids, params.limits.max_frames, min_gap);
  if (out.frame_ids.empty() && !sample.frame_ids.empty())
    out.frame_ids.push_back(sample.frame_ids.front());
  out.explanation =
      std::string(kCannotFulfill) +
      " No toolbox result points at specific frames for this request, so I send an evenly "
      "spaced sample of the video frames instead. You may get the required semantic information "
      "from the attached video frames.";
  return out;
}

}  // namespace semcom::frame_selection
