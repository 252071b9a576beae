#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "semcom/dataset.hpp"

// The toolbox of eight specialized analysis tools. Executors are pure
// functions of (clip, frame_ids, params) and read annotations instead of
// pixels; the registry is immutable.
namespace semcom::toolbox {

struct ToolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ToolDescriptor {
  int index = 0;  // 1-based, contiguous
  std::string name;
  std::vector<std::string> can;
  std::vector<std::string> cannot;
  std::string output_example;
  std::vector<std::string> labels;  // key-term labels, lowercase
  // Labels that name an event the tool can only approximate (a stopped
  // vehicle suggests an accident but is not one). Such labels route frame
  // selection yet never count as evidence that a plan fulfills a request.
  bool labels_are_proxies = false;
  std::vector<std::string> keywords;  // lowercase match terms for planning
};

const std::vector<ToolDescriptor>& registry();
const ToolDescriptor* find_tool(const std::string& name);  // case-insensitive

// Three-part structured description (capabilities, limitations, output
// format with example) used verbatim inside prompts.
std::string describe_tool(const ToolDescriptor& tool);
std::string describe_registry(const std::vector<ToolDescriptor>& tools,
                              const std::set<std::string>& excluded_tools = {});

// Replaces the descriptor keyword sets with table entries; tools absent from
// the table keep their built-in keywords. Table format: one line per tool,
// "Tool Name | term, term, ...".
void load_keyword_table(const std::string& path);
void reset_keyword_table();

struct Finding {
  std::string text;                 // rendered form, used in summaries
  std::vector<std::string> labels;  // lowercase labels this finding carries
  std::optional<double> value;      // numeric finding when applicable
  bool operator==(const Finding&) const = default;
};

struct ExecutionResult {
  std::string tool;
  std::vector<std::uint32_t> frame_ids;  // the frames that were analyzed
  std::map<std::uint32_t, std::vector<Finding>> per_frame;
  std::string summary;  // rendered in the tool's output format
  std::map<std::string, double> stats;

  // Frames whose findings carry the given label (folded, case-insensitive).
  std::set<std::uint32_t> matched_frame_ids(const std::string& label) const;
};

struct ToolParams {
  double motion_ratio_threshold = 1.15;  // tau, > 1
};

ExecutionResult run_object_detection(const dataset::AnnotatedClip& clip,
                                     const std::vector<std::uint32_t>& frame_ids);

// Vehicle Detection, License Plate Detection, Traffic Sign Detection or
// Lane Number Detection; all four read one annotation field per frame.
ExecutionResult run_annotation_lookup(const std::string& tool,
                                      const dataset::AnnotatedClip& clip,
                                      const std::vector<std::uint32_t>& frame_ids);

// Classifies each track against the ratio of its bbox areas at the first
// and last selected frames in which it appears; ratio > tau means moving.
// Requires at least two selected frames.
ExecutionResult run_vehicle_motion_detection(const dataset::AnnotatedClip& clip,
                                             const std::vector<std::uint32_t>& frame_ids,
                                             double tau);

ExecutionResult run_traffic_flow_estimation(const dataset::AnnotatedClip& clip,
                                            const std::vector<std::uint32_t>& frame_ids);

// Per-frame density = min(1, vehicle bbox area sum / road area), rounded to
// two decimals; always within [0, 1].
ExecutionResult run_vehicle_density_estimation(const dataset::AnnotatedClip& clip,
                                               const std::vector<std::uint32_t>& frame_ids);

ExecutionResult run_tool(const std::string& tool, const dataset::AnnotatedClip& clip,
                         const std::vector<std::uint32_t>& frame_ids,
                         const ToolParams& params = {});

}  // namespace semcom::toolbox
