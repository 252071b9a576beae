#include "semcom/metrics.hpp"

#include <variant>

#include "json.hpp"

#include "semcom/planning.hpp"

namespace semcom::metrics {

using nlohmann::json;

AccuracyRatios accuracy_ratios(std::int64_t correct_y, std::int64_t total_y,
                               std::int64_t correct_n, std::int64_t total_n) {
  AccuracyRatios ratios;
  ratios.y = total_y > 0 ? static_cast<double>(correct_y) / static_cast<double>(total_y) : 0.0;
  ratios.n = total_n > 0 ? static_cast<double>(correct_n) / static_cast<double>(total_n) : 0.0;
  std::int64_t total = total_y + total_n;
  // Weighted combination over all requests, not the mean of the two ratios.
  ratios.yn = total > 0 ? static_cast<double>(correct_y + correct_n) / static_cast<double>(total)
                        : 0.0;
  return ratios;
}

ReductionRatios reduction_ratios(std::int64_t transmitted_frames, std::int64_t baseline_frames,
                                 std::int64_t transmitted_bytes, std::int64_t baseline_bytes) {
  if (baseline_frames <= 0 || baseline_bytes <= 0)
    throw MetricsError("reduction baseline must be positive");
  ReductionRatios ratios;
  ratios.frame_ratio =
      1.0 - static_cast<double>(transmitted_frames) / static_cast<double>(baseline_frames);
  ratios.size_ratio =
      1.0 - static_cast<double>(transmitted_bytes) / static_cast<double>(baseline_bytes);
  return ratios;
}

RequestRow run_record(orchestrator::Transmitter& transmitter,
                      const dataset::RequestRecord& record) {
  RequestRow row;
  row.request_id = record.request_id;
  row.clip_id = record.clip_id;
  row.label = record.label;

  if (const auto* clip = transmitter.clips().find(record.clip_id)) {
    row.baseline_frames = static_cast<std::int64_t>(clip->frame_count);
    row.baseline_bytes = clip->compressed_size_bytes;
  }

  protocol::Message reply =
      transmitter.handle_request(record.request_id, record.clip_id, record.text);

  if (const auto* text = std::get_if<protocol::FeedbackText>(&reply.body)) {
    row.path = ReplyPath::Text;
    row.tool_used = text->tool_used;
    row.plan_trace = text->plan_trace;
    row.bytes_sent = static_cast<std::int64_t>(text->answer.size());
    row.frames_sent = 0;
  } else if (const auto* frames = std::get_if<protocol::FeedbackFrames>(&reply.body)) {
    row.path = ReplyPath::Frames;
    row.plan_trace = frames->plan_trace;
    row.frame_ids = frames->frame_ids;
    row.frames_sent = static_cast<std::int64_t>(frames->frames.size());
    for (const auto& frame : frames->frames)
      row.bytes_sent += static_cast<std::int64_t>(frame.data.size());
  } else {
    row.path = ReplyPath::Error;
  }

  if (!row.plan_trace.empty()) {
    try {
      row.first_tool = planning::parse_plan(row.plan_trace.front()).tool;
    } catch (const planning::PlanError&) {
      row.first_tool.clear();
    }
  }

  row.accurate = record.label == 'Y' ? row.path == ReplyPath::Text : row.path == ReplyPath::Frames;
  if (record.label == 'Y') {
    row.success = row.path == ReplyPath::Text;
  } else {
    row.success = row.path == ReplyPath::Frames && !row.frame_ids.empty();
    if (row.success && record.relevant_span) {
      bool hit = false;
      for (auto id : row.frame_ids)
        hit = hit || (id >= record.relevant_span->first && id <= record.relevant_span->second);
      row.success = hit;
    }
  }
  return row;
}

AccuracyRatios evaluate_reflection_accuracy(orchestrator::Transmitter& transmitter,
                                            const std::vector<dataset::RequestRecord>& corpus) {
  std::int64_t correct_y = 0, total_y = 0, correct_n = 0, total_n = 0;
  for (const auto& record : corpus) {
    auto row = run_record(transmitter, record);
    if (record.label == 'Y') {
      ++total_y;
      if (row.accurate) ++correct_y;
    } else {
      ++total_n;
      if (row.accurate) ++correct_n;
    }
  }
  return accuracy_ratios(correct_y, total_y, correct_n, total_n);
}

ReductionRatios evaluate_reduction(const std::vector<RequestRow>& rows) {
  std::int64_t baseline_frames = 0, baseline_bytes = 0, sent_frames = 0, sent_bytes = 0;
  for (const auto& row : rows) {
    baseline_frames += row.baseline_frames;
    baseline_bytes += row.baseline_bytes;
    sent_frames += row.frames_sent;
    sent_bytes += row.bytes_sent;
  }
  return reduction_ratios(sent_frames, baseline_frames, sent_bytes, baseline_bytes);
}

MetricsReport run_corpus(orchestrator::Transmitter& transmitter,
                         const std::vector<dataset::RequestRecord>& corpus) {
  if (corpus.empty()) throw MetricsError("corpus is empty");

  MetricsReport report;
  std::int64_t successes = 0;
  for (const auto& record : corpus) {
    RequestRow row;
    try {
      row = run_record(transmitter, record);
    } catch (const std::exception& e) {
      row.request_id = record.request_id;
      row.clip_id = record.clip_id;
      row.label = record.label;
      row.path = ReplyPath::Error;
      row.error = e.what();
    }
    if (record.label == 'Y') {
      report.total_y++;
      if (row.accurate) report.correct_y++;
    } else {
      report.total_n++;
      if (row.accurate) report.correct_n++;
    }
    if (row.success) successes++;
    report.baseline_frames += row.baseline_frames;
    report.baseline_bytes += row.baseline_bytes;
    report.transmitted_frames += row.frames_sent;
    report.transmitted_bytes += row.bytes_sent;
    report.rows.push_back(std::move(row));
  }

  auto accuracy = accuracy_ratios(report.correct_y, report.total_y, report.correct_n,
                                  report.total_n);
  report.accurate_ratio_y = accuracy.y;
  report.accurate_ratio_n = accuracy.n;
  report.accurate_ratio_yn = accuracy.yn;
  report.success_rate = static_cast<double>(successes) / static_cast<double>(corpus.size());
  auto reduction = reduction_ratios(report.transmitted_frames, report.baseline_frames,
                                    report.transmitted_bytes, report.baseline_bytes);
  report.frame_count_reduction_ratio = reduction.frame_ratio;
  report.data_size_reduction_ratio = reduction.size_ratio;
  return report;
}

namespace {
const char* path_name(ReplyPath path) {
  switch (path) {
    case ReplyPath::Text: return "text";
    case ReplyPath::Frames: return "frames";
    case ReplyPath::Error: return "error";
  }
  return "?";
}
}  // namespace

std::string MetricsReport::to_json(int indent) const {
  json j;
  j["accurate_ratio_y"] = accurate_ratio_y;
  j["accurate_ratio_n"] = accurate_ratio_n;
  j["accurate_ratio_yn"] = accurate_ratio_yn;
  j["success_rate"] = success_rate;
  j["frame_count_reduction_ratio"] = frame_count_reduction_ratio;
  j["data_size_reduction_ratio"] = data_size_reduction_ratio;
  j["totals"] = {
      {"total_y", total_y},
      {"correct_y", correct_y},
      {"total_n", total_n},
      {"correct_n", correct_n},
      {"baseline_frames", baseline_frames},
      {"transmitted_frames", transmitted_frames},
      {"baseline_bytes", baseline_bytes},
      {"transmitted_bytes", transmitted_bytes},
  };
  json rows_json = json::array();
  for (const auto& row : rows) {
    json r;
    r["request_id"] = row.request_id;
    r["clip_id"] = row.clip_id;
    r["label"] = std::string(1, row.label);
    r["path"] = path_name(row.path);
    r["first_tool"] = row.first_tool;
    r["tool_used"] = row.tool_used;
    r["plan_trace"] = row.plan_trace;
    r["frame_ids"] = row.frame_ids;
    r["frames_sent"] = row.frames_sent;
    r["bytes_sent"] = row.bytes_sent;
    r["baseline_frames"] = row.baseline_frames;
    r["baseline_bytes"] = row.baseline_bytes;
    r["accurate"] = row.accurate;
    r["success"] = row.success;
    if (!row.error.empty()) r["error"] = row.error;
    rows_json.push_back(std::move(r));
  }
  j["requests"] = std::move(rows_json);
  return j.dump(indent);
}

}  // namespace semcom::metrics
