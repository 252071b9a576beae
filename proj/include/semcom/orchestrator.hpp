#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "semcom/dataset.hpp"
#include "semcom/frame_selection.hpp"
#include "semcom/llm_backend.hpp"
#include "semcom/planning.hpp"
#include "semcom/protocol.hpp"
#include "semcom/reflection.hpp"

// The transmitter: for each request, loop over planning and reflection,
// excluding every tried tool; a positive verdict executes the plan and
// answers in text, exhaustion falls through to frame selection.
namespace semcom::orchestrator {

struct Config {
  int max_plan_attempts = 3;  // 1..8, the re-planning bound
  planning::SampleOptions sampling;
  planning::AnalysisParams analysis;
  toolbox::ToolParams tool_params;
  frame_selection::SelectionLimits limits;
  bool verbose_logging = false;
};

// Read-only clip collection shared across sessions.
class ClipStore {
 public:
  void add(dataset::AnnotatedClip clip);
  // Loads every *.json clip document in the directory.
  static ClipStore load_dir(const std::string& dir);
  const dataset::AnnotatedClip* find(const std::string& clip_id) const;
  std::size_t size() const { return clips_.size(); }

 private:
  std::map<std::string, std::shared_ptr<const dataset::AnnotatedClip>> clips_;
};

enum class Phase { Planning, Reflecting, Executing, FrameSelection, Done };

class Transmitter {
 public:
  Transmitter(ClipStore clips, std::shared_ptr<llm::Backend> backend, Config config,
              planning::PromptTemplates templates = planning::PromptTemplates::defaults());

  // Exactly one reply per request: FEEDBACK_TEXT, FEEDBACK_FRAMES or
  // ERROR_REPLY. Any message other than REQUEST gets a BAD_MESSAGE reply.
  protocol::Message handle_message(const protocol::Message& request);
  protocol::Message handle_request(const std::string& session_id, const std::string& clip_id,
                                   const std::string& request_text);

  const Config& config() const { return config_; }
  const ClipStore& clips() const { return clips_; }

 private:
  ClipStore clips_;
  std::shared_ptr<llm::Backend> backend_;
  Config config_;
  planning::PromptTemplates templates_;

  void log(const std::string& session_id, Phase phase, const std::string& detail) const;
};

}  // namespace semcom::orchestrator
