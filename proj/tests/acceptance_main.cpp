// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <thread>
#include <variant>

#include "semcom/client.hpp"
#include "semcom/fixtures.hpp"
#include "semcom/metrics.hpp"
#include "semcom/orchestrator.hpp"
#include "semcom/server.hpp"
#include "oracles.hpp"
#include "stub_llm_server.hpp"
#include "support.hpp"

using namespace semcom;

namespace {

struct Criterion {
  std::string name;
  std::function<std::string()> run;  // returns a detail line; throws on failure
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

orchestrator::ClipStore fixture_store() {
  orchestrator::ClipStore store;
  for (const char* name : {"c01.json", "c02.json", "c03.json", "c04.json", "c05.json"})
    store.add(dataset::load_clip(testsupport::fixture_path(name)));
  return store;
}

orchestrator::Transmitter deterministic_transmitter(int nbar = 3) {
  orchestrator::Config config;
  config.max_plan_attempts = nbar;
  return orchestrator::Transmitter(fixture_store(),
                                   std::make_shared<llm::DeterministicBackend>(), config);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string protocol_round_trip() {
  auto start = std::chrono::steady_clock::now();
  testsupport::MessageGenerator gen(424242);
  for (int i = 0; i < 1000; ++i) {
    auto msg = gen.next();
    auto bytes = protocol::encode_message(msg);
    protocol::MemorySource source(bytes);
    auto back = protocol::decode_message(source);
    require(back == msg, "message " + std::to_string(i) + " did not round-trip");
    require(protocol::encode_message(back) == bytes,
            "message " + std::to_string(i) + " is not canonically byte-stable");
  }
  double elapsed = seconds_since(start);
  require(elapsed < 5.0, "round-trip took " + std::to_string(elapsed) + "s (limit 5s)");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "1000 messages, identity + byte-stable, %.2fs", elapsed);
  return buf;
}

std::string tool_oracles() {
  auto start = std::chrono::steady_clock::now();
  int clips_checked = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    dataset::ClipScenario scenario;
    scenario.clip_id = "acc" + std::to_string(seed);
    scenario.frame_count = 60 + static_cast<std::uint32_t>(seed * 5);
    scenario.vehicle_count = static_cast<int>(seed % 7);
    scenario.congestion = 0.03 * static_cast<double>(seed % 8);
    if (seed % 2) scenario.stopped_vehicle_span = {{15, scenario.frame_count - 1}};
    if (seed % 3 == 0) scenario.motorcycle_span = {{0, 30}};
    if (seed % 4 == 0) {
      scenario.plate = {"B", "C", "5", "4", "9", "5", "0"};
      scenario.sign_span = {{0, scenario.frame_count - 1}};
      scenario.sign_name = "Speed Limit 70";
    }
    auto clip = dataset::generate_synthetic_clip(seed, scenario);
    std::vector<std::uint32_t> frames;
    for (std::uint32_t f = 0; f < clip.frame_count; f += 4) frames.push_back(f);

    auto density = toolbox::run_vehicle_density_estimation(clip, frames);
    for (auto f : frames)
      require(std::abs(*density.per_frame.at(f)[0].value - oracles::brute_density(clip, f)) <
                  1e-12,
              "density mismatch at frame " + std::to_string(f));

    auto flow = toolbox::run_traffic_flow_estimation(clip, frames);
    require(static_cast<std::size_t>(flow.stats.at("total_vehicles")) ==
                oracles::brute_flow(clip, frames),
            "flow mismatch on seed " + std::to_string(seed));

    auto motion = toolbox::run_vehicle_motion_detection(clip, frames, 1.15);
    auto expected = oracles::brute_motion(clip, frames, 1.15);
    require(static_cast<std::size_t>(motion.stats.at("tracks")) == expected.size(),
            "motion track count mismatch");
    int not_moving = 0;
    for (const auto& [track, moving] : expected)
      if (!moving) ++not_moving;
    require(static_cast<int>(motion.stats.at("not_moving")) == not_moving,
            "motion state mismatch on seed " + std::to_string(seed));

    for (const char* tool : {"Vehicle Detection", "License Plate Detection",
                             "Traffic Sign Detection", "Lane Number Detection"}) {
      auto lookup = toolbox::run_annotation_lookup(tool, clip, frames);
      for (auto f : frames) {
        const auto& frame = clip.frames[f];
        std::size_t want = std::string(tool) == "Vehicle Detection" ? frame.vehicles.size()
                           : std::string(tool) == "License Plate Detection"
                               ? frame.plates.size()
                               : std::string(tool) == "Traffic Sign Detection"
                                     ? frame.signs.size()
                                     : 1;
        require(lookup.per_frame.at(f).size() == want,
                std::string(tool) + " lookup mismatch at frame " + std::to_string(f));
      }
    }
    ++clips_checked;
  }

  int frames_checked = 0;
  for (std::uint64_t seed = 100; frames_checked < 10000; ++seed) {
    dataset::ClipScenario scenario;
    scenario.clip_id = "dens" + std::to_string(seed);
    scenario.frame_count = 500;
    scenario.vehicle_count = static_cast<int>(seed % 19);
    scenario.congestion = 0.2 * static_cast<double>(seed % 9);
    auto clip = dataset::generate_synthetic_clip(seed, scenario);
    std::vector<std::uint32_t> frames;
    for (std::uint32_t f = 0; f < clip.frame_count; ++f) frames.push_back(f);
    auto density = toolbox::run_vehicle_density_estimation(clip, frames);
    for (auto f : frames) {
      double d = *density.per_frame.at(f)[0].value;
      require(d >= 0.0 && d <= 1.0, "density out of [0,1]");
    }
    frames_checked += static_cast<int>(frames.size());
  }

  double elapsed = seconds_since(start);
  require(elapsed < 30.0, "tool oracles took " + std::to_string(elapsed) + "s (limit 30s)");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d clips vs brute force, %d densities in [0,1], %.2fs",
                clips_checked, frames_checked, elapsed);
  return buf;
}

std::string plan_grammar() {
  auto plan = planning::parse_plan("Video Sampler | Vehicle Density Estimation | Analysis");
  require(plan.tool == "Vehicle Density Estimation", "canonical plan not accepted");
  auto rejects = [](const std::string& text) {
    try {
      planning::parse_plan(text);
      return false;
    } catch (const planning::PlanError&) {
      return true;
    }
  };
  require(rejects("Video Sampler | Analysis"), "2-step plan accepted");
  require(rejects("Video Sampler | Object Detection | Analysis | Extra"), "4-step plan accepted");
  require(rejects("Video Sampler | Teleportation | Analysis"), "unknown tool accepted");
  return "accepts the canonical plan, rejects 2-step, 4-step and unknown tools";
}

std::vector<std::string> always_no_script(int rounds) {
  std::vector<std::string> script;
  const auto& tools = toolbox::registry();
  for (int i = 0; i < rounds && i < static_cast<int>(tools.size()); ++i) {
    script.push_back("Video Sampler | " + tools[i].name + " | Analysis");
    script.push_back("No.");
  }
  script.push_back("No option");
  return script;
}

std::string planning_loop_exhaustion() {
  for (int nbar : {8, 3}) {
    orchestrator::Config config;
    config.max_plan_attempts = nbar;
    auto backend = std::make_shared<llm::StubBackend>(always_no_script(nbar));
    orchestrator::Transmitter transmitter(fixture_store(), backend, config);
    auto reply = transmitter.handle_request("acc", "c01", "Anything at all?");
    const auto* frames = std::get_if<protocol::FeedbackFrames>(&reply.body);
    require(frames != nullptr, "frames path not taken at nbar " + std::to_string(nbar));
    require(static_cast<int>(frames->plan_trace.size()) == nbar,
            "expected " + std::to_string(nbar) + " plans, got " +
                std::to_string(frames->plan_trace.size()));
    std::set<std::string> tools;
    for (const auto& raw : frames->plan_trace) tools.insert(planning::parse_plan(raw).tool);
    require(static_cast<int>(tools.size()) == nbar, "a tool was planned twice");
  }
  return "8 distinct tools at nbar=8, 3 at nbar=3, frames path after exhaustion";
}

std::string canonical_example_behaviors() {
  auto transmitter = deterministic_transmitter(3);

  auto jam = transmitter.handle_request("acc", "c01", "Is there a traffic jam in the video?");
  const auto* text = std::get_if<protocol::FeedbackText>(&jam.body);
  require(text != nullptr, "traffic jam request did not take the text path");
  require(text->tool_used == "Vehicle Density Estimation",
          "traffic jam request used " + text->tool_used);
  require(text->answer.find("no traffic jam") != std::string::npos,
          "light-traffic fixture did not deny a jam");

  auto accident = transmitter.handle_request("acc", "c02", "Did an accident happen in the video?");
  const auto* frames = std::get_if<protocol::FeedbackFrames>(&accident.body);
  require(frames != nullptr, "accident request did not take the frames path");
  require(!frames->frame_ids.empty(), "accident request selected no frames");
  for (auto id : frames->frame_ids)
    require(id >= 200 && id <= 449,
            "selected frame " + std::to_string(id) + " outside the stopped-vehicle span");
  require(frames->explanation.rfind("I cannot fulfill your request", 0) == 0,
          "frames explanation missing the non-fulfillment preamble");

  llm::DeterministicBackend backend;
  auto key = frame_selection::extract_key_term("Did an accident happen in the video?",
                                               toolbox::registry(), backend);
  require(key && key->key_term == "accident" && key->tool == "Vehicle Motion Detection",
          "accident did not map to Vehicle Motion Detection");
  return "jam answers in text via density; accident sends frames inside 200..449";
}

std::string planner_accuracy() {
  auto start = std::chrono::steady_clock::now();
  auto transmitter = deterministic_transmitter(3);
  auto corpus = fixtures::bundled_corpus();
  auto report = metrics::run_corpus(transmitter, corpus);

  int y_total = 0, y_match = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].expected_tool) continue;
    ++y_total;
    if (report.rows[i].first_tool == *corpus[i].expected_tool) ++y_match;
  }
  double first_choice = y_total > 0 ? static_cast<double>(y_match) / y_total : 0.0;
  require(first_choice >= 0.95, "first-choice accuracy " + std::to_string(first_choice));
  require(report.accurate_ratio_yn >= 0.90,
          "accurate ratio YN " + std::to_string(report.accurate_ratio_yn));
  double elapsed = seconds_since(start);
  require(elapsed < 60.0, "corpus run took " + std::to_string(elapsed) + "s (limit 60s)");
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "first-choice %.3f (>=0.95), YN ratio %.3f (>=0.90) on %zu records, %.2fs",
                first_choice, report.accurate_ratio_yn, corpus.size(), elapsed);
  return buf;
}

std::string reduction_analogue() {
  auto transmitter = deterministic_transmitter(3);
  auto corpus = fixtures::reduction_corpus();
  std::size_t y = 0, n = 0;
  for (const auto& record : corpus) (record.label == 'Y' ? y : n)++;
  require(y * 4 == n * 3, "corpus mix is not 3:4");

  auto report = metrics::run_corpus(transmitter, corpus);
  require(report.frame_count_reduction_ratio >= 0.75,
          "frame reduction " + std::to_string(report.frame_count_reduction_ratio));
  require(report.data_size_reduction_ratio >= 0.50,
          "size reduction " + std::to_string(report.data_size_reduction_ratio));

  // Hand oracle: recompute both ratios from the per-request rows.
  long long baseline_frames = 0, sent_frames = 0, baseline_bytes = 0, sent_bytes = 0;
  for (const auto& row : report.rows) {
    baseline_frames += row.baseline_frames;
    baseline_bytes += row.baseline_bytes;
    sent_frames += row.frames_sent;
    sent_bytes += row.bytes_sent;
  }
  double frame_ratio = 1.0 - static_cast<double>(sent_frames) / baseline_frames;
  double size_ratio = 1.0 - static_cast<double>(sent_bytes) / baseline_bytes;
  require(std::abs(frame_ratio - report.frame_count_reduction_ratio) < 1e-9,
          "frame ratio disagrees with the hand oracle");
  require(std::abs(size_ratio - report.data_size_reduction_ratio) < 1e-9,
          "size ratio disagrees with the hand oracle");

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "frames %.4f (>=0.75), bytes %.4f (>=0.50) on %zu requests (3:4 Y:N)",
                report.frame_count_reduction_ratio, report.data_size_reduction_ratio,
                corpus.size());
  return buf;
}

std::string remote_contract() {
  const auto& tools = toolbox::registry();
  planning::PlannerContext ctx;
  ctx.request = "Is there a traffic jam in the video?";
  ctx.clip = {30.0, 450};

  {
    testsupport::StubLlmServer server([](const std::string& prompt) -> std::string {
      if (prompt.find("you need to plan first") != std::string::npos)
        return "Video Sampler | Vehicle Density Estimation | Analysis";
      if (prompt.find("You must answer with") != std::string::npos)
        return "Yes, the plan fits the request.";
      return "No option";
    });
    llm::BackendConfig config;
    config.kind = llm::BackendKind::Remote;
    config.endpoint = server.endpoint();
    config.backoff_base_seconds = 0.01;
    llm::RemoteBackend backend(config);

    auto plan = planning::generate_plan(ctx, tools, backend);
    require(plan.tool == "Vehicle Density Estimation", "remote plan mismatch");
    auto verdict = reflection::reflect(ctx.request, plan, tools, backend);
    require(verdict.verdict == reflection::Verdict::Yes, "remote reflection mismatch");
    auto key = frame_selection::extract_key_term(ctx.request, tools, backend);
    require(!key.has_value(), "remote key term should be No option");
  }
  {
    llm::BackendConfig config;
    config.kind = llm::BackendKind::Remote;
    config.endpoint = "http://127.0.0.1:9";  // nothing listens here
    config.max_retries = 2;
    config.backoff_base_seconds = 0.01;
    llm::RemoteBackend backend(config);
    try {
      backend.complete("hello?");
      throw Failure("transport error expected");
    } catch (const llm::BackendError&) {
    }
    require(backend.attempt_log().size() == 3, "retry count must be 1 + max_retries");
  }
  {
    testsupport::StubLlmServer slow([](const std::string&) { return "late"; }, 0.4);
    llm::BackendConfig config;
    config.kind = llm::BackendKind::Remote;
    config.endpoint = slow.endpoint();
    config.timeout_seconds = 0.05;
    config.max_retries = 1;
    config.backoff_base_seconds = 0.01;
    llm::RemoteBackend backend(config);
    try {
      backend.complete("too slow");
      throw Failure("timeout expected");
    } catch (const llm::BackendError& e) {
      require(e.kind == llm::BackendError::Kind::Timeout, "timeout error kind expected");
    }
  }
  return "plan, reflection, key-term, retry and timeout all pass against the local stub server";
}

std::string concurrency() {
  auto transmitter = deterministic_transmitter(3);
  server::TransmitterServer srv(transmitter, 0);
  srv.start();

  struct Case {
    std::string clip, request;
    bool text_path;
    std::vector<std::string> trace;
  };
  std::vector<Case> mix = {
      {"c01", "Is there a traffic jam in the video?", true, {}},
      {"c02", "Did an accident happen in the video?", false, {}},
      {"c05", "Can you read the license plates in the video?", true, {}},
      {"c04", "What is the average rainfall in the video?", false, {}},
  };
  for (auto& c : mix) {
    auto reply = transmitter.handle_request("ref", c.clip, c.request);
    if (const auto* text = std::get_if<protocol::FeedbackText>(&reply.body))
      c.trace = text->plan_trace;
    else if (const auto* frames = std::get_if<protocol::FeedbackFrames>(&reply.body))
      c.trace = frames->plan_trace;
  }

  constexpr int kSessions = 16;
  std::vector<std::string> failures(kSessions);
  std::vector<std::thread> threads;
  for (int i = 0; i < kSessions; ++i) {
    threads.emplace_back([&, i] {
      const auto& c = mix[i % mix.size()];
      try {
        auto reply = client::submit_request("127.0.0.1", srv.port(), "acc" + std::to_string(i),
                                            c.clip, c.request);
        std::vector<std::string> trace;
        bool text_path = std::holds_alternative<protocol::FeedbackText>(reply.body);
        if (const auto* text = std::get_if<protocol::FeedbackText>(&reply.body))
          trace = text->plan_trace;
        else if (const auto* frames = std::get_if<protocol::FeedbackFrames>(&reply.body))
          trace = frames->plan_trace;
        if (text_path != c.text_path)
          failures[i] = "wrong reply path";
        else if (trace != c.trace)
          failures[i] = "plan trace leaked between sessions";
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    });
  }
  for (auto& thread : threads) thread.join();
  srv.stop();
  for (int i = 0; i < kSessions; ++i)
    require(failures[i].empty(),
            "session " + std::to_string(i) + ": " + failures[i]);
  return "16 concurrent sessions, traces identical to the single-threaded reference";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"protocol-round-trip", protocol_round_trip},
      {"tool-oracles", tool_oracles},
      {"plan-grammar", plan_grammar},
      {"planning-loop-exhaustion", planning_loop_exhaustion},
      {"canonical-examples", canonical_example_behaviors},
      {"planner-accuracy-analogue", planner_accuracy},
      {"reduction-analogue", reduction_analogue},
      {"remote-backend-contract", remote_contract},
      {"concurrency", concurrency},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    try {
      std::string detail = criterion.run();
      std::printf("[PASS] %-28s %s\n", criterion.name.c_str(), detail.c_str());
    } catch (const std::exception& e) {
      std::printf("[FAIL] %-28s %s\n", criterion.name.c_str(), e.what());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
