#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "semcom/dataset.hpp"
#include "semcom/orchestrator.hpp"

// Evaluation harness: replay a labeled request corpus through a transmitter
// and compute the reflection-accuracy, success-rate and reduction metrics.
namespace semcom::metrics {

struct MetricsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ReplyPath { Text, Frames, Error };

struct RequestRow {
  std::string request_id;
  std::string clip_id;
  char label = 'N';
  ReplyPath path = ReplyPath::Error;
  std::string first_tool;  // tool of the first attempted plan
  std::string tool_used;   // text path: executed tool
  std::vector<std::string> plan_trace;
  std::vector<std::uint32_t> frame_ids;
  std::int64_t frames_sent = 0;
  // Text replies count answer bytes; frames replies count payload bytes.
  std::int64_t bytes_sent = 0;
  std::int64_t baseline_frames = 0;  // the clip's full frame count
  std::int64_t baseline_bytes = 0;   // the clip's compressed size
  bool accurate = false;  // reflection outcome matches the Y/N label
  bool success = false;   // success-rate proxy
  std::string error;      // set when the request itself failed
};

struct MetricsReport {
  double accurate_ratio_y = 0;
  double accurate_ratio_n = 0;
  double accurate_ratio_yn = 0;
  double success_rate = 0;
  double frame_count_reduction_ratio = 0;
  double data_size_reduction_ratio = 0;
  std::int64_t total_y = 0, correct_y = 0;
  std::int64_t total_n = 0, correct_n = 0;
  std::int64_t baseline_frames = 0, transmitted_frames = 0;
  std::int64_t baseline_bytes = 0, transmitted_bytes = 0;
  std::vector<RequestRow> rows;

  std::string to_json(int indent = 2) const;
};

struct AccuracyRatios {
  double y = 0, n = 0, yn = 0;
};

// The ratio definitions: correct_y / total_y, correct_n / total_n and the
// weighted combination (correct_y + correct_n) / (total_y + total_n).
AccuracyRatios accuracy_ratios(std::int64_t correct_y, std::int64_t total_y,
                               std::int64_t correct_n, std::int64_t total_n);

struct ReductionRatios {
  double frame_ratio = 0;
  double size_ratio = 0;
};

// 1 - transmitted/baseline; a zero baseline is an error.
ReductionRatios reduction_ratios(std::int64_t transmitted_frames, std::int64_t baseline_frames,
                                 std::int64_t transmitted_bytes, std::int64_t baseline_bytes);

// Replays one record through the transmitter and fills a row. A Y record is
// accurate when the text path was taken, an N record when the frames path
// was; success additionally requires non-empty frames that hit the record's
// relevant_span when one is present.
RequestRow run_record(orchestrator::Transmitter& transmitter, const dataset::RequestRecord& record);

// Replays the corpus and reports only the accuracy ratios.
AccuracyRatios evaluate_reflection_accuracy(orchestrator::Transmitter& transmitter,
                                            const std::vector<dataset::RequestRecord>& corpus);

// Reduction ratios over already-run rows.
ReductionRatios evaluate_reduction(const std::vector<RequestRow>& rows);

// Deterministic given a deterministic backend and fixed dataset. An empty
// corpus is an error; per-record failures become error rows and the run
// continues.
MetricsReport run_corpus(orchestrator::Transmitter& transmitter,
                         const std::vector<dataset::RequestRecord>& corpus);

}  // namespace semcom::metrics
