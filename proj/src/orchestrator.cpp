#include "semcom/orchestrator.hpp"

#include <cstdio>
#include <filesystem>
#include <mutex>

#include "semcom/text.hpp"

namespace semcom::orchestrator {

namespace fs = std::filesystem;

void ClipStore::add(dataset::AnnotatedClip clip) {
  auto ptr = std::make_shared<const dataset::AnnotatedClip>(std::move(clip));
  clips_[ptr->clip_id] = ptr;
}

ClipStore ClipStore::load_dir(const std::string& dir) {
  ClipStore store;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) store.add(dataset::load_clip(path.string()));
  return store;
}

const dataset::AnnotatedClip* ClipStore::find(const std::string& clip_id) const {
  auto it = clips_.find(clip_id);
  return it == clips_.end() ? nullptr : it->second.get();
}

namespace {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Planning: return "PLANNING";
    case Phase::Reflecting: return "REFLECTING";
    case Phase::Executing: return "EXECUTING";
    case Phase::FrameSelection: return "FRAME_SELECTION";
    case Phase::Done: return "DONE";
  }
  return "?";
}

std::mutex g_log_mutex;

}  // namespace

Transmitter::Transmitter(ClipStore clips, std::shared_ptr<llm::Backend> backend, Config config,
                         planning::PromptTemplates templates)
    : clips_(std::move(clips)),
      backend_(std::move(backend)),
      config_(std::move(config)),
      templates_(std::move(templates)) {
  if (config_.max_plan_attempts < 1 ||
      config_.max_plan_attempts > static_cast<int>(toolbox::registry().size()))
    throw std::invalid_argument("max_plan_attempts must be within 1..toolbox size");
}

void Transmitter::log(const std::string& session_id, Phase phase,
                      const std::string& detail) const {
  if (!config_.verbose_logging) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::fprintf(stderr, "[session=%s phase=%s] %s\n", session_id.c_str(), phase_name(phase),
               detail.c_str());
}

protocol::Message Transmitter::handle_message(const protocol::Message& request) {
  const auto* req = std::get_if<protocol::Request>(&request.body);
  if (!req) {
    return protocol::Message{
        request.session_id.empty() ? "-" : request.session_id,
        protocol::ErrorReply{"BAD_MESSAGE",
                             "expected a REQUEST message, got " + protocol::type_tag(request)}};
  }
  return handle_request(request.session_id, req->clip_id, req->text);
}

protocol::Message Transmitter::handle_request(const std::string& session_id,
                                              const std::string& clip_id,
                                              const std::string& request_text) {
  const std::string session = session_id.empty() ? "-" : session_id;
  if (text::trim(request_text).empty())
    return protocol::Message{session, protocol::ErrorReply{"BAD_MESSAGE", "empty request text"}};

  const dataset::AnnotatedClip* clip = clips_.find(clip_id);
  if (!clip)
    return protocol::Message{session,
                             protocol::ErrorReply{"NO_CLIP", "unknown clip '" + clip_id + "'"}};

  planning::PlannerContext ctx;
  ctx.request = request_text;
  ctx.clip = {clip->fps, clip->frame_count};

  std::vector<std::string> trace;
  const auto& tools = toolbox::registry();

  for (int attempt = 1; attempt <= config_.max_plan_attempts; ++attempt) {
    log(session, Phase::Planning, "attempt " + std::to_string(attempt));
    planning::TaskPlan plan;
    try {
      plan = planning::generate_plan(ctx, tools, *backend_, templates_);
    } catch (const planning::PlanError& e) {
      if (e.kind == planning::PlanError::Kind::Exhausted) break;
      log(session, Phase::Planning, std::string("plan generation failed: ") + e.what());
      continue;  // consumed this iteration, no plan to exclude
    } catch (const llm::BackendError& e) {
      log(session, Phase::Planning, std::string("backend failed: ") + e.what());
      continue;
    }
    trace.push_back(plan.raw);

    log(session, Phase::Reflecting, plan.raw);
    bool fulfills = false;
    try {
      auto reflection = reflection::reflect(ctx.request, plan, tools, *backend_, templates_);
      fulfills = reflection.verdict == reflection::Verdict::Yes;
      log(session, Phase::Reflecting, fulfills ? "verdict yes" : "verdict no");
    } catch (const std::exception& e) {
      // A failed reflection counts as a NO verdict; the session degrades
      // toward frame selection instead of aborting.
      log(session, Phase::Reflecting, std::string("reflection failed: ") + e.what());
    }

    if (!fulfills) {
      ctx.excluded_tools.insert(plan.tool);
      continue;
    }

    log(session, Phase::Executing, plan.tool);
    try {
      auto sample = planning::sample_frames(ctx.request, ctx.clip, config_.sampling);
      plan.sampled_frames = sample.frame_ids;
      auto exec = toolbox::run_tool(plan.tool, *clip, sample.frame_ids, config_.tool_params);
      std::string answer =
          planning::analyze(ctx.request, plan, exec, *backend_, config_.analysis);
      log(session, Phase::Done, "text reply via " + plan.tool);
      return protocol::Message{session, protocol::FeedbackText{answer, trace, plan.tool}};
    } catch (const std::exception& e) {
      // Execution failure after a positive verdict behaves like a NO for
      // this tool and the loop resumes.
      log(session, Phase::Executing, std::string("execution failed: ") + e.what());
      ctx.excluded_tools.insert(plan.tool);
      continue;
    }
  }

  log(session, Phase::FrameSelection, "planning exhausted after " +
                                          std::to_string(trace.size()) + " plans");
  frame_selection::PipelineParams params;
  params.limits = config_.limits;
  params.sampling = config_.sampling;
  params.tool_params = config_.tool_params;
  auto selection =
      frame_selection::run_pipeline(ctx.request, *clip, tools, *backend_, params, templates_);

  protocol::FeedbackFrames feedback;
  feedback.frame_ids = selection.frame_ids;
  for (std::uint32_t id : selection.frame_ids)
    feedback.frames.push_back({id, dataset::frame_payload(*clip, id)});
  feedback.explanation = selection.explanation;
  feedback.plan_trace = trace;
  log(session, Phase::Done,
      "frames reply with " + std::to_string(selection.frame_ids.size()) + " frames" +
          (selection.degraded ? " (degraded)" : " via " + selection.tool_used));
  return protocol::Message{session, std::move(feedback)};
}

}  // namespace semcom::orchestrator
