#include "semcom/toolbox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include "semcom/text.hpp"
#include "semcom/vocab.hpp"

namespace semcom::toolbox {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fmt_confidence(double c) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", c);
  return buf;
}

// "0.00" -> "0.0", "0.10" -> "0.1", "0.23" stays.
std::string fmt_density(double d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", d);
  std::string s = buf;
  while (s.size() > 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::vector<ToolDescriptor> build_registry() {
  std::vector<ToolDescriptor> tools;

  ToolDescriptor object_detection;
  object_detection.index = 1;
  object_detection.name = "Object Detection";
  object_detection.can = {
      "detect 80 different objects including: " + join(vocab::object_labels(), ", "),
      "provide only static analysis of frames in the video; it does not track the movement of "
      "objects",
  };
  object_detection.cannot = {
      "do detection on a specified location in the video, for example at the crossroad or along "
      "the road",
      "do detection in a specified event in the video, for example after an accident or after a "
      "collision",
  };
  object_detection.output_example =
      "[(0.98, 'car'), (0.95, 'traffic light'), (0.89, 'traffic light'), (0.87, 'car'), "
      "(0.83, 'fire hydrant')]";
  object_detection.labels = vocab::object_labels();
  object_detection.keywords = {"object",   "objects",    "person",  "people",  "pedestrian",
                               "pedestrians", "bicycle", "bicycles", "dog",    "cat",
                               "animal",   "animals",    "umbrella", "backpack", "bench",
                               "hydrant",  "fire hydrant", "traffic light", "stop sign"};
  tools.push_back(std::move(object_detection));

  ToolDescriptor vehicle_detection;
  vehicle_detection.index = 2;
  vehicle_detection.name = "Vehicle Detection";
  vehicle_detection.can = {
      "detect types of vehicles including " + join(vocab::vehicle_types(), ", "),
      "identify colors of vehicles including " + join(vocab::vehicle_colors(), ", "),
      "provide only static analysis of frames in the video",
  };
  vehicle_detection.cannot = {
      "track the movement of vehicles or events that occur during the movement of the vehicles",
      "do detection on a specified location in the video, for example at the crossroad or along "
      "the road",
      "do detection in a specified event in the video, for example after an accident or after a "
      "collision",
  };
  vehicle_detection.output_example =
      "1: [('Color: blue', 'Type: sedan'), ('Color: blue', 'Type: hatchback')], "
      "2: [('Color: blue', 'Type: sedan')]";
  vehicle_detection.labels = vocab::vehicle_types();
  vehicle_detection.keywords = {"color", "colors",  "colour", "colours", "colored", "type",
                                "sedan", "suv",     "van",    "hatchback", "mpv",   "pickup",
                                "estate", "yellow", "orange", "green",  "gray",    "red",
                                "blue",  "white",   "golden", "brown",  "black"};
  tools.push_back(std::move(vehicle_detection));

  ToolDescriptor plate_detection;
  plate_detection.index = 3;
  plate_detection.name = "License Plate Detection";
  plate_detection.can = {
      "detect vehicle license plates in videos and output the detected license plate characters "
      "for each frame",
  };
  plate_detection.output_example = "1: ['C', 'J', 'X', 'S', 'G']";
  plate_detection.keywords = {"license", "plate", "plates", "license plate", "plate number",
                              "registration"};
  tools.push_back(std::move(plate_detection));

  ToolDescriptor sign_detection;
  sign_detection.index = 4;
  sign_detection.name = "Traffic Sign Detection";
  sign_detection.can = {
      "detect traffic signs of the following types: " + join(vocab::traffic_sign_names(), ", "),
  };
  sign_detection.cannot = {
      "detect other types of traffic signs",
      "detect the location of traffic signs",
  };
  sign_detection.output_example = "(0.95, 'Speed Limit 70'), (0.86, 'No Trucks')";
  sign_detection.labels = {"traffic sign"};
  sign_detection.keywords = {"sign",  "signs",    "traffic sign", "speed limit", "limit",
                             "yield", "crossing", "no entry",     "road work"};
  tools.push_back(std::move(sign_detection));

  ToolDescriptor motion_detection;
  motion_detection.index = 5;
  motion_detection.name = "Vehicle Motion Detection";
  motion_detection.can = {
      "detect whether vehicles in the video are moving or not: for the same vehicle, the "
      "occupied areas on two different selected image frames are computed, and the vehicle is "
      "claimed moving when the ratio of the occupied areas is larger than a predefined threshold",
  };
  motion_detection.cannot = {
      "do detection on a specified location in the video, for example at the crossroad or along "
      "the road",
      "do detection in a specified event in the video, for example after an accident or after a "
      "collision",
  };
  motion_detection.output_example = "[not moving, moving, moving, not moving, moving]";
  motion_detection.labels = {"accident", "collision"};
  motion_detection.labels_are_proxies = true;
  motion_detection.keywords = {"moving", "move", "moves", "motion", "stationary", "stopped",
                               "parked"};
  tools.push_back(std::move(motion_detection));

  ToolDescriptor lane_detection;
  lane_detection.index = 6;
  lane_detection.name = "Lane Number Detection";
  lane_detection.can = {
      "detect the number of road lanes of the selected image frames in the video",
  };
  lane_detection.cannot = {
      "recognize different types of lanes, such as solid lanes, dashed lanes and arrows",
  };
  lane_detection.output_example = "number of lanes : [3]";
  lane_detection.keywords = {"lane", "lanes", "number of lanes"};
  tools.push_back(std::move(lane_detection));

  ToolDescriptor flow_estimation;
  flow_estimation.index = 7;
  flow_estimation.name = "Traffic Flow Estimation";
  flow_estimation.can = {
      "count the total number of different vehicles over a particular time period in a video",
  };
  flow_estimation.cannot = {
      "recognize the path or motion of vehicles",
      "do detection on a specified location in the video, for example at the crossroad or along "
      "the road",
  };
  flow_estimation.output_example = "Total vehicle number: 8";
  flow_estimation.keywords = {"how many", "count",  "total",
                              "flow",     "traffic flow", "passed",
                              "number of vehicles", "different vehicles"};
  tools.push_back(std::move(flow_estimation));

  ToolDescriptor density_estimation;
  density_estimation.index = 8;
  density_estimation.name = "Vehicle Density Estimation";
  density_estimation.can = {
      "compute vehicle density in a particular image frame, defined as the ratio of the area "
      "occupied by vehicles to the area of the road in that frame",
      "indicate traffic states in a frame: higher vehicle density indicates traffic congestion "
      "or heavy traffic flow on the roads",
  };
  density_estimation.cannot = {
      "perform detection on a specified location in the video, for example at the crossroad or "
      "along the road",
  };
  density_estimation.output_example = "0.23";
  density_estimation.keywords = {"traffic", "jam",     "traffic jam", "congestion", "congested",
                                 "density", "dense",   "crowded",     "busy",       "heavy"};
  tools.push_back(std::move(density_estimation));

  return tools;
}

std::vector<ToolDescriptor>& mutable_registry() {
  static std::vector<ToolDescriptor> tools = build_registry();
  return tools;
}

}  // namespace

const std::vector<ToolDescriptor>& registry() { return mutable_registry(); }

const ToolDescriptor* find_tool(const std::string& name) {
  std::string folded = text::to_lower(text::trim(name));
  for (const auto& tool : registry())
    if (text::to_lower(tool.name) == folded) return &tool;
  return nullptr;
}

std::string describe_tool(const ToolDescriptor& tool) {
  std::ostringstream out;
  out << "Tool " << tool.index << ": " << tool.name << "\n";
  out << "1. The algorithm can: ";
  for (std::size_t i = 0; i < tool.can.size(); ++i) {
    if (i) out << " ";
    if (tool.can.size() > 1) out << static_cast<char>('a' + i) << ") ";
    out << tool.can[i] << (i + 1 < tool.can.size() ? ";" : ".");
  }
  out << "\n";
  if (!tool.cannot.empty()) {
    out << "2. The algorithm cannot: ";
    for (std::size_t i = 0; i < tool.cannot.size(); ++i) {
      if (i) out << " ";
      if (tool.cannot.size() > 1) out << static_cast<char>('a' + i) << ") ";
      out << tool.cannot[i] << (i + 1 < tool.cannot.size() ? ";" : ".");
    }
    out << "\n";
  }
  out << (tool.cannot.empty() ? "2" : "3") << ". Here is an example of the output: "
      << tool.output_example << "\n";
  if (!tool.labels.empty()) out << "Associated labels: " << join(tool.labels, ", ") << "\n";
  return out.str();
}

std::string describe_registry(const std::vector<ToolDescriptor>& tools,
                              const std::set<std::string>& excluded_tools) {
  std::string out;
  for (const auto& tool : tools) {
    if (excluded_tools.count(tool.name)) continue;
    out += describe_tool(tool);
    out += "\n";
  }
  return out;
}

void load_keyword_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ToolError("cannot open keyword table: " + path);
  auto& tools = mutable_registry();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = text::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto bar = trimmed.find('|');
    if (bar == std::string::npos)
      throw ToolError("keyword table line " + std::to_string(line_no) +
                      ": expected 'Tool Name | term, term, ...'");
    std::string name = text::trim(trimmed.substr(0, bar));
    auto it = std::find_if(tools.begin(), tools.end(),
                           [&name](const ToolDescriptor& t) { return t.name == name; });
    if (it == tools.end())
      throw ToolError("keyword table line " + std::to_string(line_no) + ": unknown tool '" +
                      name + "'");
    std::vector<std::string> terms;
    std::stringstream ss(trimmed.substr(bar + 1));
    std::string term;
    while (std::getline(ss, term, ',')) {
      term = text::to_lower(text::trim(term));
      if (!term.empty()) terms.push_back(term);
    }
    it->keywords = std::move(terms);
  }
}

void reset_keyword_table() { mutable_registry() = build_registry(); }

namespace {

bool labels_equal_folded(const std::string& a, const std::string& b) {
  auto wa = text::tokenize(a);
  auto wb = text::tokenize(b);
  if (wa.size() != wb.size()) return false;
  for (std::size_t i = 0; i < wa.size(); ++i)
    if (!text::words_match(wa[i], wb[i])) return false;
  return !wa.empty();
}

void check_frames(const dataset::AnnotatedClip& clip, const std::vector<std::uint32_t>& frame_ids) {
  if (frame_ids.empty()) throw ToolError("no frames selected");
  for (auto id : frame_ids)
    if (id >= clip.frame_count)
      throw ToolError("unknown frame id " + std::to_string(id) + " in clip '" + clip.clip_id +
                      "'");
}

const dataset::FrameAnnotation& frame_at(const dataset::AnnotatedClip& clip, std::uint32_t id) {
  return clip.frames[id];
}

}  // namespace

std::set<std::uint32_t> ExecutionResult::matched_frame_ids(const std::string& label) const {
  std::set<std::uint32_t> out;
  for (const auto& [frame_id, findings] : per_frame)
    for (const auto& finding : findings)
      for (const auto& l : finding.labels)
        if (labels_equal_folded(l, label)) {
          out.insert(frame_id);
          break;
        }
  return out;
}

ExecutionResult run_object_detection(const dataset::AnnotatedClip& clip,
                                     const std::vector<std::uint32_t>& frame_ids) {
  check_frames(clip, frame_ids);
  ExecutionResult result;
  result.tool = "Object Detection";
  result.frame_ids = frame_ids;
  std::ostringstream summary;
  for (auto id : frame_ids) {
    auto objects = frame_at(clip, id).objects;
    std::stable_sort(objects.begin(), objects.end(),
                     [](const auto& a, const auto& b) { return a.confidence > b.confidence; });
    std::vector<Finding>& findings = result.per_frame[id];
    std::vector<std::string> rendered;
    for (const auto& o : objects) {
      std::string text = "(" + fmt_confidence(o.confidence) + ", '" + o.label + "')";
      findings.push_back({text, {o.label}, o.confidence});
      rendered.push_back(text);
    }
    summary << id << ": [" << join(rendered, ", ") << "]\n";
  }
  result.summary = summary.str();
  return result;
}

namespace {

ExecutionResult run_vehicle_lookup(const dataset::AnnotatedClip& clip,
                                   const std::vector<std::uint32_t>& frame_ids) {
  ExecutionResult result;
  result.tool = "Vehicle Detection";
  result.frame_ids = frame_ids;
  std::ostringstream summary;
  for (auto id : frame_ids) {
    std::vector<Finding>& findings = result.per_frame[id];
    std::vector<std::string> rendered;
    for (const auto& v : frame_at(clip, id).vehicles) {
      std::string text = "('Color: " + v.color + "', 'Type: " + v.vtype + "')";
      findings.push_back({text, {v.color, v.vtype}, std::nullopt});
      rendered.push_back(text);
    }
    summary << id << ": [" << join(rendered, ", ") << "]\n";
  }
  result.summary = summary.str();
  return result;
}

ExecutionResult run_plate_lookup(const dataset::AnnotatedClip& clip,
                                 const std::vector<std::uint32_t>& frame_ids) {
  ExecutionResult result;
  result.tool = "License Plate Detection";
  result.frame_ids = frame_ids;
  std::ostringstream summary;
  for (auto id : frame_ids) {
    std::vector<Finding>& findings = result.per_frame[id];
    std::vector<std::string> rendered;
    for (const auto& plate : frame_at(clip, id).plates) {
      std::vector<std::string> quoted;
      for (const auto& ch : plate) quoted.push_back("'" + ch + "'");
      std::string text = "[" + join(quoted, ", ") + "]";
      findings.push_back({text, {}, std::nullopt});
      rendered.push_back(text);
    }
    summary << id << ": " << (rendered.empty() ? "[]" : join(rendered, ", ")) << "\n";
  }
  result.summary = summary.str();
  return result;
}

ExecutionResult run_sign_lookup(const dataset::AnnotatedClip& clip,
                                const std::vector<std::uint32_t>& frame_ids) {
  ExecutionResult result;
  result.tool = "Traffic Sign Detection";
  result.frame_ids = frame_ids;
  std::ostringstream summary;
  for (auto id : frame_ids) {
    std::vector<Finding>& findings = result.per_frame[id];
    std::vector<std::string> rendered;
    for (const auto& s : frame_at(clip, id).signs) {
      std::string text = "(" + fmt_confidence(s.confidence) + ", '" + s.name + "')";
      findings.push_back({text, {"traffic sign", text::to_lower(s.name)}, s.confidence});
      rendered.push_back(text);
    }
    summary << id << ": " << (rendered.empty() ? "none" : join(rendered, ", ")) << "\n";
  }
  result.summary = summary.str();
  return result;
}

ExecutionResult run_lane_lookup(const dataset::AnnotatedClip& clip,
                                const std::vector<std::uint32_t>& frame_ids) {
  ExecutionResult result;
  result.tool = "Lane Number Detection";
  result.frame_ids = frame_ids;
  std::map<std::uint32_t, int> votes;
  for (auto id : frame_ids) {
    std::uint32_t lanes = frame_at(clip, id).lane_count;
    result.per_frame[id].push_back({"number of lanes : [" + std::to_string(lanes) + "]",
                                    {},
                                    static_cast<double>(lanes)});
    votes[lanes]++;
  }
  std::uint32_t mode = 0;
  int best = -1;
  for (const auto& [lanes, count] : votes)
    if (count > best) best = count, mode = lanes;
  result.summary = "number of lanes : [" + std::to_string(mode) + "]";
  result.stats["lanes"] = static_cast<double>(mode);
  return result;
}

}  // namespace

ExecutionResult run_annotation_lookup(const std::string& tool, const dataset::AnnotatedClip& clip,
                                      const std::vector<std::uint32_t>& frame_ids) {
  check_frames(clip, frame_ids);
  const ToolDescriptor* descriptor = find_tool(tool);
  if (!descriptor) throw ToolError("unknown tool '" + tool + "'");
  if (descriptor->name == "Vehicle Detection") return run_vehicle_lookup(clip, frame_ids);
  if (descriptor->name == "License Plate Detection") return run_plate_lookup(clip, frame_ids);
  if (descriptor->name == "Traffic Sign Detection") return run_sign_lookup(clip, frame_ids);
  if (descriptor->name == "Lane Number Detection") return run_lane_lookup(clip, frame_ids);
  throw ToolError("'" + tool + "' is not an annotation-lookup tool");
}

ExecutionResult run_vehicle_motion_detection(const dataset::AnnotatedClip& clip,
                                             const std::vector<std::uint32_t>& frame_ids,
                                             double tau) {
  check_frames(clip, frame_ids);
  if (frame_ids.size() < 2)
    throw ToolError("Vehicle Motion Detection needs at least 2 selected frames");
  if (!(tau > 1)) throw ToolError("motion ratio threshold must be > 1");

  std::vector<std::uint32_t> sorted = frame_ids;
  std::sort(sorted.begin(), sorted.end());

  // First and last selected appearance plus bbox area per track.
  struct TrackSpan {
    std::uint32_t first_frame = 0, last_frame = 0;
    double first_area = 0, last_area = 0;
    int appearances = 0;
  };
  std::map<std::uint32_t, TrackSpan> tracks;
  for (auto id : sorted) {
    for (const auto& v : frame_at(clip, id).vehicles) {
      auto [it, inserted] = tracks.try_emplace(v.track_id);
      TrackSpan& span = it->second;
      if (inserted) {
        span.first_frame = id;
        span.first_area = v.bbox.area();
      }
      span.last_frame = id;
      span.last_area = v.bbox.area();
      span.appearances++;
    }
  }

  ExecutionResult result;
  result.tool = "Vehicle Motion Detection";
  result.frame_ids = frame_ids;
  std::map<std::uint32_t, bool> moving;  // track order
  for (const auto& [track_id, span] : tracks) {
    bool is_moving = true;
    if (span.appearances >= 2 && span.first_area > 0 && span.last_area > 0) {
      double ratio = std::max(span.first_area, span.last_area) /
                     std::min(span.first_area, span.last_area);
      is_moving = ratio > tau;
    }
    moving[track_id] = is_moving;
  }

  int not_moving_count = 0;
  std::vector<std::string> states;
  for (const auto& [track_id, is_moving] : moving) {
    states.push_back(is_moving ? "moving" : "not moving");
    if (!is_moving) ++not_moving_count;
  }
  for (auto id : sorted) {
    std::vector<Finding>& findings = result.per_frame[id];
    for (const auto& v : frame_at(clip, id).vehicles) {
      bool is_moving = moving[v.track_id];
      Finding finding;
      finding.text = "track " + std::to_string(v.track_id) + ": " +
                     (is_moving ? "moving" : "not moving");
      if (is_moving) {
        finding.labels = {"moving"};
      } else {
        // A stopped vehicle is the evidence frame selection uses for
        // accident- and collision-type requests.
        finding.labels = {"not moving", "accident", "collision"};
      }
      findings.push_back(std::move(finding));
    }
  }
  result.summary = "[" + join(states, ", ") + "]";
  result.stats["tracks"] = static_cast<double>(moving.size());
  result.stats["not_moving"] = static_cast<double>(not_moving_count);
  result.stats["moving"] = static_cast<double>(moving.size()) - not_moving_count;
  return result;
}

ExecutionResult run_traffic_flow_estimation(const dataset::AnnotatedClip& clip,
                                            const std::vector<std::uint32_t>& frame_ids) {
  check_frames(clip, frame_ids);
  ExecutionResult result;
  result.tool = "Traffic Flow Estimation";
  result.frame_ids = frame_ids;
  std::set<std::uint32_t> distinct;
  for (auto id : frame_ids) {
    std::vector<Finding>& findings = result.per_frame[id];
    for (const auto& v : frame_at(clip, id).vehicles) {
      distinct.insert(v.track_id);
      findings.push_back({"track " + std::to_string(v.track_id), {}, std::nullopt});
    }
  }
  result.summary = "Total vehicle number: " + std::to_string(distinct.size());
  result.stats["total_vehicles"] = static_cast<double>(distinct.size());
  return result;
}

ExecutionResult run_vehicle_density_estimation(const dataset::AnnotatedClip& clip,
                                               const std::vector<std::uint32_t>& frame_ids) {
  check_frames(clip, frame_ids);
  if (!(clip.road_area_px > 0)) throw ToolError("clip road_area_px must be positive");
  ExecutionResult result;
  result.tool = "Vehicle Density Estimation";
  result.frame_ids = frame_ids;
  double max_density = 0.0, min_density = 1.0;
  std::ostringstream summary;
  for (auto id : frame_ids) {
    double occupied = 0;
    for (const auto& v : frame_at(clip, id).vehicles) occupied += v.bbox.area();
    double density = std::min(1.0, occupied / clip.road_area_px);
    density = std::round(density * 100.0) / 100.0;
    max_density = std::max(max_density, density);
    min_density = std::min(min_density, density);
    result.per_frame[id].push_back({fmt_density(density), {}, density});
    summary << id << ": " << fmt_density(density) << "\n";
  }
  result.summary = summary.str();
  result.stats["max_density"] = max_density;
  result.stats["min_density"] = frame_ids.empty() ? 0.0 : min_density;
  return result;
}

ExecutionResult run_tool(const std::string& tool, const dataset::AnnotatedClip& clip,
                         const std::vector<std::uint32_t>& frame_ids, const ToolParams& params) {
  const ToolDescriptor* descriptor = find_tool(tool);
  if (!descriptor) throw ToolError("unknown tool '" + tool + "'");
  const std::string& name = descriptor->name;
  if (name == "Object Detection") return run_object_detection(clip, frame_ids);
  if (name == "Vehicle Motion Detection")
    return run_vehicle_motion_detection(clip, frame_ids, params.motion_ratio_threshold);
  if (name == "Traffic Flow Estimation") return run_traffic_flow_estimation(clip, frame_ids);
  if (name == "Vehicle Density Estimation") return run_vehicle_density_estimation(clip, frame_ids);
  return run_annotation_lookup(name, clip, frame_ids);
}

}  // namespace semcom::toolbox
