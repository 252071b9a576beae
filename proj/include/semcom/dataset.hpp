#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Annotated clips stand in for surveillance video: per-frame annotations are
// the ground truth the analysis tools read, and frame "payloads" are
// deterministic pseudorandom bytes of the declared size. Clips and corpora
// are immutable after load.
namespace semcom::dataset {

struct DatasetError : std::runtime_error {
  std::vector<std::string> issues;
  explicit DatasetError(std::string what, std::vector<std::string> issues = {})
      : std::runtime_error(std::move(what)), issues(std::move(issues)) {}
};

struct BBox {
  double x = 0, y = 0, w = 0, h = 0;  // pixels, w > 0, h > 0
  double area() const { return w * h; }
  bool operator==(const BBox&) const = default;
};

struct ObjectAnnotation {
  std::string label;  // one of the 80 object labels
  double confidence = 0;
  BBox bbox;
  bool operator==(const ObjectAnnotation&) const = default;
};

struct VehicleAnnotation {
  std::uint32_t track_id = 0;  // stable across frames for the same vehicle
  std::string color;
  std::string vtype;  // one of the 9 vehicle types
  BBox bbox;
  bool operator==(const VehicleAnnotation&) const = default;
};

struct SignAnnotation {
  double confidence = 0;
  std::string name;  // one of the traffic sign names
  bool operator==(const SignAnnotation&) const = default;
};

struct FrameAnnotation {
  std::uint32_t frame_id = 0;
  std::int64_t size_bytes = 0;  // > 0
  std::vector<ObjectAnnotation> objects;
  std::vector<VehicleAnnotation> vehicles;
  std::vector<std::vector<std::string>> plates;  // character lists
  std::vector<SignAnnotation> signs;
  std::uint32_t lane_count = 0;
  bool operator==(const FrameAnnotation&) const = default;
};

struct AnnotatedClip {
  std::string clip_id;
  double fps = 0;                        // > 0
  std::uint32_t frame_count = 0;         // > 0, == frames.size()
  std::int64_t compressed_size_bytes = 0;  // <= sum of per-frame size_bytes
  double road_area_px = 0;               // clip-level road region area
  std::vector<FrameAnnotation> frames;
  bool operator==(const AnnotatedClip&) const = default;
};

struct RequestRecord {
  std::string request_id;
  std::string clip_id;
  std::string text;
  char label = 'N';  // 'Y' or 'N'
  std::optional<std::string> expected_tool;
  // Ground-truth span of relevant frames, when the fixture encodes one;
  // used by the success-rate proxy.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> relevant_span;
  bool operator==(const RequestRecord&) const = default;
};

// Returns every invariant violation, empty when the clip is valid.
std::vector<std::string> validate_clip(const AnnotatedClip& clip);

AnnotatedClip parse_clip(const std::string& json_text);
AnnotatedClip load_clip(const std::string& path);

// Canonical single-line JSON document; load_clip(write) round-trips.
std::string clip_to_json(const AnnotatedClip& clip);
void write_clip(const AnnotatedClip& clip, const std::string& path);

// JSON-lines corpus, one RequestRecord per line. Duplicate request_id or a
// malformed line raises DatasetError naming the line number.
std::vector<RequestRecord> load_request_corpus(const std::string& path);
std::string corpus_to_jsonl(const std::vector<RequestRecord>& records);

// Deterministic pseudorandom payload for one frame, derived from
// (clip_id, frame_id, size_bytes).
std::vector<std::uint8_t> frame_payload(const AnnotatedClip& clip, std::uint32_t frame_id);

// Scenario parameters for the synthetic clip generator. Spans are inclusive
// frame-id ranges.
struct ClipScenario {
  std::string clip_id = "clip";
  double fps = 30.0;
  std::uint32_t frame_count = 450;
  int vehicle_count = 3;      // vehicles that approach the camera (moving)
  double congestion = 0.01;   // approximate vehicle density at the first frame
  std::optional<std::pair<std::uint32_t, std::uint32_t>> stopped_vehicle_span;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> motorcycle_span;
  std::uint32_t lane_count = 3;
  std::vector<std::string> plate;  // attached to track 0 when non-empty
  std::optional<std::pair<std::uint32_t, std::uint32_t>> sign_span;
  std::string sign_name;
  double road_area_px = 1000000.0;
  std::int64_t mean_frame_bytes = 20000;
};

// Deterministic for a fixed (seed, scenario); the result always passes
// validate_clip.
AnnotatedClip generate_synthetic_clip(std::uint64_t seed, const ClipScenario& scenario);

}  // namespace semcom::dataset
