#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "semcom/client.hpp"
#include "semcom/metrics.hpp"
#include "semcom/orchestrator.hpp"

namespace {

// "host:port" or "host" (default transmitter port 7077).
void parse_endpoint(const std::string& endpoint, std::string& host, int& port) {
  auto colon = endpoint.rfind(':');
  if (colon == std::string::npos) {
    host = endpoint;
    port = 7077;
  } else {
    host = endpoint.substr(0, colon);
    port = std::stoi(endpoint.substr(colon + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semcom client: ask a transmitter for semantic information or evaluate a corpus"};
  app.require_subcommand(1);

  auto* ask = app.add_subcommand("ask", "send one request and render the feedback");
  std::string endpoint = "127.0.0.1:7077";
  std::string clip_id;
  std::string request_text;
  std::string out_dir = "received_frames";
  std::string session = "cli";
  ask->add_option("--endpoint", endpoint, "transmitter host:port")->capture_default_str();
  ask->add_option("--clip", clip_id, "clip id to ask about")->required();
  ask->add_option("--text", request_text, "the semantic information request")->required();
  ask->add_option("--out", out_dir, "directory for received frame payloads")
      ->capture_default_str();
  ask->add_option("--session", session, "session id")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "replay a labeled corpus and report the metrics");
  std::string corpus_path;
  std::string data_dir;
  std::string report_out;
  int nbar = 3;
  int max_frames = 5;
  double min_gap_seconds = 1.0;
  double samples_per_second = 2.0;
  double jam_threshold = 0.5;
  double motion_tau = 1.15;
  std::string keyword_file;
  eval->add_option("--corpus", corpus_path, "JSON-lines request corpus")->required();
  eval->add_option("--data-dir", data_dir, "directory with clip documents")->required();
  eval->add_option("--report-out", report_out, "write the JSON report here");
  eval->add_option("--nbar", nbar, "maximum number of planning iterations")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  eval->add_option("--max-frames", max_frames, "frame cap for frame selection")
      ->capture_default_str();
  eval->add_option("--min-gap-seconds", min_gap_seconds, "minimum gap between selected frames")
      ->capture_default_str();
  eval->add_option("--samples-per-second", samples_per_second, "video sampler rate")
      ->capture_default_str();
  eval->add_option("--jam-threshold", jam_threshold, "density threshold for jam verdicts")
      ->capture_default_str();
  eval->add_option("--motion-tau", motion_tau, "area ratio threshold for moving vehicles")
      ->capture_default_str();
  eval->add_option("--keyword-file", keyword_file, "keyword table overriding the built-in terms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ask->parsed()) {
      std::string host;
      int port = 0;
      parse_endpoint(endpoint, host, port);
      auto reply = semcom::client::submit_request(host, port, session, clip_id, request_text);
      std::cout << semcom::client::render_feedback(reply, out_dir);
      return std::holds_alternative<semcom::protocol::ErrorReply>(reply.body) ? 2 : 0;
    }

    // eval: embedded in-process transmitter with the deterministic backend.
    if (!keyword_file.empty()) semcom::toolbox::load_keyword_table(keyword_file);
    auto corpus = semcom::dataset::load_request_corpus(corpus_path);
    auto clips = semcom::orchestrator::ClipStore::load_dir(data_dir);
    semcom::orchestrator::Config config;
    config.max_plan_attempts = nbar;
    config.limits.max_frames = max_frames;
    config.limits.min_gap_seconds = min_gap_seconds;
    config.sampling.samples_per_second = samples_per_second;
    config.analysis.jam_density_threshold = jam_threshold;
    config.tool_params.motion_ratio_threshold = motion_tau;
    semcom::orchestrator::Transmitter transmitter(
        std::move(clips), std::make_shared<semcom::llm::DeterministicBackend>(), config);

    auto report = semcom::metrics::run_corpus(transmitter, corpus);
    std::string rendered = report.to_json();
    if (!report_out.empty()) {
      std::ofstream out(report_out, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write report: " + report_out);
      out << rendered << "\n";
    }
    std::printf("requests: %zu (Y %lld, N %lld)\n", report.rows.size(),
                static_cast<long long>(report.total_y), static_cast<long long>(report.total_n));
    std::printf("accurate ratio Y:  %.4f\n", report.accurate_ratio_y);
    std::printf("accurate ratio N:  %.4f\n", report.accurate_ratio_n);
    std::printf("accurate ratio YN: %.4f\n", report.accurate_ratio_yn);
    std::printf("success rate:      %.4f\n", report.success_rate);
    std::printf("frame count reduction: %.4f\n", report.frame_count_reduction_ratio);
    std::printf("data size reduction:   %.4f\n", report.data_size_reduction_ratio);
    if (!report_out.empty()) std::printf("report written to %s\n", report_out.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
