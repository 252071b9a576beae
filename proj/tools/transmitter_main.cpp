#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "semcom/orchestrator.hpp"
#include "semcom/server.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

std::vector<std::string> load_stub_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stub script: " + path);
  nlohmann::json j;
  in >> j;
  if (!j.is_array()) throw std::runtime_error("stub script must be a JSON array of strings");
  std::vector<std::string> script;
  for (const auto& item : j) script.push_back(item.get<std::string>());
  return script;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semcom transmitter: serves semantic information requests over TCP"};

  int port = 7077;
  std::string data_dir;
  int nbar = 3;
  std::string backend_name = "deterministic";
  int max_frames = 5;
  double min_gap_seconds = 1.0;
  double samples_per_second = 2.0;
  double jam_threshold = 0.5;
  double motion_tau = 1.15;
  std::string prompt_dir;
  std::string keyword_file;
  std::string stub_script_path;
  semcom::llm::BackendConfig remote = semcom::llm::BackendConfig::remote_from_env();

  app.add_option("--port", port, "TCP port to listen on")->capture_default_str();
  app.add_option("--data-dir", data_dir, "directory with clip documents (*.json)")->required();
  app.add_option("--nbar", nbar, "maximum number of planning iterations")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  app.add_option("--backend", backend_name, "deterministic | stub | remote")
      ->check(CLI::IsMember({"deterministic", "stub", "remote"}))
      ->capture_default_str();
  app.add_option("--max-frames", max_frames, "frame cap for frame selection")
      ->capture_default_str();
  app.add_option("--min-gap-seconds", min_gap_seconds, "minimum gap between selected frames")
      ->capture_default_str();
  app.add_option("--samples-per-second", samples_per_second, "video sampler rate")
      ->capture_default_str();
  app.add_option("--jam-threshold", jam_threshold, "density at or above which a jam is declared")
      ->capture_default_str();
  app.add_option("--motion-tau", motion_tau, "area ratio above which a vehicle counts as moving")
      ->capture_default_str();
  app.add_option("--prompt-dir", prompt_dir, "directory with prompt template overrides");
  app.add_option("--keyword-file", keyword_file, "keyword table overriding the built-in terms");
  app.add_option("--stub-script", stub_script_path,
                 "JSON array of completions for the stub backend");
  app.add_option("--endpoint", remote.endpoint, "remote chat-completion base URL");
  app.add_option("--api-key", remote.api_key, "remote API key");
  app.add_option("--model", remote.model, "remote model name")->capture_default_str();
  app.add_option("--timeout", remote.timeout_seconds, "remote timeout in seconds")
      ->capture_default_str();
  app.add_option("--max-retries", remote.max_retries, "remote retries on transport errors")
      ->capture_default_str();
  app.add_option("--temperature", remote.temperature, "remote sampling temperature")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!keyword_file.empty()) semcom::toolbox::load_keyword_table(keyword_file);

    semcom::llm::BackendConfig config = remote;
    std::vector<std::string> script;
    if (backend_name == "deterministic") {
      config.kind = semcom::llm::BackendKind::Deterministic;
    } else if (backend_name == "stub") {
      config.kind = semcom::llm::BackendKind::Stub;
      if (!stub_script_path.empty()) script = load_stub_script(stub_script_path);
    } else {
      config.kind = semcom::llm::BackendKind::Remote;
    }
    auto backend = semcom::llm::make_backend(config, std::move(script));

    semcom::orchestrator::Config orch;
    orch.max_plan_attempts = nbar;
    orch.sampling.samples_per_second = samples_per_second;
    orch.analysis.jam_density_threshold = jam_threshold;
    orch.tool_params.motion_ratio_threshold = motion_tau;
    orch.limits.max_frames = max_frames;
    orch.limits.min_gap_seconds = min_gap_seconds;
    orch.verbose_logging = true;

    auto templates = prompt_dir.empty() ? semcom::planning::PromptTemplates::defaults()
                                        : semcom::planning::PromptTemplates::load_dir(prompt_dir);

    auto clips = semcom::orchestrator::ClipStore::load_dir(data_dir);
    std::fprintf(stderr, "loaded %zu clips from %s\n", clips.size(), data_dir.c_str());

    semcom::orchestrator::Transmitter transmitter(std::move(clips), backend, orch, templates);
    semcom::server::TransmitterServer server(transmitter, port);
    server.start();
    std::fprintf(stderr, "listening on port %d (backend: %s, nbar: %d)\n", server.port(),
                 backend_name.c_str(), nbar);

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::fprintf(stderr, "shutting down\n");
    server.stop();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
