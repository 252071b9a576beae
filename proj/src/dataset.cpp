#include "semcom/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "semcom/vocab.hpp"

namespace semcom::dataset {

using nlohmann::json;

namespace {

// splitmix64; stable across platforms, unlike std distributions.
std::uint64_t mix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// Uniform draw in [lo, hi]; modulo bias is irrelevant at these ranges.
std::int64_t draw(std::uint64_t& state, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(mix64(state) %
                                        static_cast<std::uint64_t>(hi - lo + 1));
}

json bbox_to_json(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

BBox bbox_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw DatasetError("bbox must be a [x, y, w, h] array");
  return BBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

}  // namespace

std::vector<std::string> validate_clip(const AnnotatedClip& clip) {
  std::vector<std::string> issues;
  auto issue = [&issues](const std::string& s) { issues.push_back(s); };

  if (clip.clip_id.empty()) issue("clip_id must be non-empty");
  if (!(clip.fps > 0)) issue("fps must be > 0");
  if (clip.frame_count == 0) issue("frame_count must be positive");
  if (clip.compressed_size_bytes <= 0) issue("compressed_size_bytes must be positive");
  if (!(clip.road_area_px > 0)) issue("road_area_px must be positive");
  if (clip.frames.size() != clip.frame_count)
    issue("frames length " + std::to_string(clip.frames.size()) + " != frame_count " +
          std::to_string(clip.frame_count));

  std::int64_t total_bytes = 0;
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    const FrameAnnotation& f = clip.frames[i];
    const std::string at = "frames[" + std::to_string(i) + "]: ";
    if (f.frame_id != i)
      issue(at + "frame_id " + std::to_string(f.frame_id) + " != " + std::to_string(i));
    if (f.size_bytes <= 0) issue(at + "size_bytes must be positive");
    total_bytes += f.size_bytes;
    for (std::size_t k = 0; k < f.objects.size(); ++k) {
      const auto& o = f.objects[k];
      if (!vocab::is_object_label(o.label))
        issue(at + "objects[" + std::to_string(k) + "] unknown label '" + o.label + "'");
      if (o.confidence < 0 || o.confidence > 1)
        issue(at + "objects[" + std::to_string(k) + "] confidence out of [0,1]");
      if (!(o.bbox.w > 0) || !(o.bbox.h > 0))
        issue(at + "objects[" + std::to_string(k) + "] bbox w/h must be > 0");
    }
    for (std::size_t k = 0; k < f.vehicles.size(); ++k) {
      const auto& v = f.vehicles[k];
      if (!vocab::is_vehicle_type(v.vtype))
        issue(at + "vehicles[" + std::to_string(k) + "] unknown vtype '" + v.vtype + "'");
      if (!(v.bbox.w > 0) || !(v.bbox.h > 0))
        issue(at + "vehicles[" + std::to_string(k) + "] bbox w/h must be > 0");
    }
    for (std::size_t k = 0; k < f.signs.size(); ++k) {
      const auto& s = f.signs[k];
      if (!vocab::is_traffic_sign_name(s.name))
        issue(at + "signs[" + std::to_string(k) + "] unknown sign '" + s.name + "'");
      if (s.confidence < 0 || s.confidence > 1)
        issue(at + "signs[" + std::to_string(k) + "] confidence out of [0,1]");
    }
  }
  if (!clip.frames.empty() && total_bytes < clip.compressed_size_bytes)
    issue("sum of frame size_bytes " + std::to_string(total_bytes) +
          " < compressed_size_bytes " + std::to_string(clip.compressed_size_bytes));
  return issues;
}

AnnotatedClip parse_clip(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw DatasetError("clip document is not valid JSON");
  AnnotatedClip clip;
  try {
    clip.clip_id = j.at("clip_id").get<std::string>();
    clip.fps = j.at("fps").get<double>();
    clip.frame_count = j.at("frame_count").get<std::uint32_t>();
    clip.compressed_size_bytes = j.at("compressed_size_bytes").get<std::int64_t>();
    clip.road_area_px = j.at("road_area_px").get<double>();
    for (const auto& fj : j.at("frames")) {
      FrameAnnotation f;
      f.frame_id = fj.at("frame_id").get<std::uint32_t>();
      f.size_bytes = fj.at("size_bytes").get<std::int64_t>();
      f.lane_count = fj.at("lane_count").get<std::uint32_t>();
      for (const auto& oj : fj.at("objects")) {
        ObjectAnnotation o;
        o.label = oj.at("label").get<std::string>();
        o.confidence = oj.at("confidence").get<double>();
        o.bbox = bbox_from_json(oj.at("bbox"));
        f.objects.push_back(std::move(o));
      }
      for (const auto& vj : fj.at("vehicles")) {
        VehicleAnnotation v;
        v.track_id = vj.at("track_id").get<std::uint32_t>();
        v.color = vj.at("color").get<std::string>();
        v.vtype = vj.at("vtype").get<std::string>();
        v.bbox = bbox_from_json(vj.at("bbox"));
        f.vehicles.push_back(std::move(v));
      }
      for (const auto& pj : fj.at("plates")) {
        std::vector<std::string> chars;
        for (const auto& c : pj) chars.push_back(c.get<std::string>());
        f.plates.push_back(std::move(chars));
      }
      for (const auto& sj : fj.at("signs")) {
        SignAnnotation s;
        s.confidence = sj.at("confidence").get<double>();
        s.name = sj.at("name").get<std::string>();
        f.signs.push_back(std::move(s));
      }
      clip.frames.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw DatasetError(std::string("clip document missing or mistyped field: ") + e.what());
  }
  auto issues = validate_clip(clip);
  if (!issues.empty()) {
    std::string what = "clip '" + clip.clip_id + "' failed validation:";
    for (const auto& i : issues) what += "\n  - " + i;
    throw DatasetError(what, issues);
  }
  return clip;
}

AnnotatedClip load_clip(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open clip file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_clip(buffer.str());
}

std::string clip_to_json(const AnnotatedClip& clip) {
  json j;
  j["clip_id"] = clip.clip_id;
  j["fps"] = clip.fps;
  j["frame_count"] = clip.frame_count;
  j["compressed_size_bytes"] = clip.compressed_size_bytes;
  j["road_area_px"] = clip.road_area_px;
  json frames = json::array();
  for (const auto& f : clip.frames) {
    json fj;
    fj["frame_id"] = f.frame_id;
    fj["size_bytes"] = f.size_bytes;
    fj["lane_count"] = f.lane_count;
    json objects = json::array();
    for (const auto& o : f.objects)
      objects.push_back({{"label", o.label}, {"confidence", o.confidence}, {"bbox", bbox_to_json(o.bbox)}});
    fj["objects"] = std::move(objects);
    json vehicles = json::array();
    for (const auto& v : f.vehicles)
      vehicles.push_back({{"track_id", v.track_id},
                          {"color", v.color},
                          {"vtype", v.vtype},
                          {"bbox", bbox_to_json(v.bbox)}});
    fj["vehicles"] = std::move(vehicles);
    fj["plates"] = f.plates;
    json signs = json::array();
    for (const auto& s : f.signs) signs.push_back({{"confidence", s.confidence}, {"name", s.name}});
    fj["signs"] = std::move(signs);
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return j.dump();
}

void write_clip(const AnnotatedClip& clip, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write clip file: " + path);
  out << clip_to_json(clip) << "\n";
}

std::vector<RequestRecord> load_request_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open corpus file: " + path);
  std::vector<RequestRecord> records;
  std::vector<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string at = "corpus line " + std::to_string(line_no) + ": ";
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DatasetError(at + "not a JSON object");
    RequestRecord r;
    try {
      r.request_id = j.at("request_id").get<std::string>();
      r.clip_id = j.at("clip_id").get<std::string>();
      r.text = j.at("text").get<std::string>();
      std::string label = j.at("label").get<std::string>();
      if (label != "Y" && label != "N") throw DatasetError(at + "label must be \"Y\" or \"N\"");
      r.label = label[0];
      if (j.contains("expected_tool")) r.expected_tool = j["expected_tool"].get<std::string>();
      if (j.contains("relevant_span")) {
        const auto& span = j["relevant_span"];
        if (!span.is_array() || span.size() != 2)
          throw DatasetError(at + "relevant_span must be [first, last]");
        r.relevant_span = {span[0].get<std::uint32_t>(), span[1].get<std::uint32_t>()};
      }
    } catch (const json::exception& e) {
      throw DatasetError(at + "missing or mistyped field: " + e.what());
    }
    if (r.text.empty()) throw DatasetError(at + "text must be non-empty");
    for (const auto& id : seen_ids)
      if (id == r.request_id) throw DatasetError(at + "duplicate request_id '" + r.request_id + "'");
    seen_ids.push_back(r.request_id);
    records.push_back(std::move(r));
  }
  return records;
}

std::string corpus_to_jsonl(const std::vector<RequestRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json j;
    j["request_id"] = r.request_id;
    j["clip_id"] = r.clip_id;
    j["text"] = r.text;
    j["label"] = std::string(1, r.label);
    if (r.expected_tool) j["expected_tool"] = *r.expected_tool;
    if (r.relevant_span) j["relevant_span"] = {r.relevant_span->first, r.relevant_span->second};
    out += j.dump();
    out += "\n";
  }
  return out;
}

std::vector<std::uint8_t> frame_payload(const AnnotatedClip& clip, std::uint32_t frame_id) {
  if (frame_id >= clip.frames.size())
    throw DatasetError("frame_payload: unknown frame id " + std::to_string(frame_id));
  const auto& frame = clip.frames[frame_id];
  std::uint64_t state = fnv1a(clip.clip_id) ^ (static_cast<std::uint64_t>(frame_id) << 32) ^
                        static_cast<std::uint64_t>(frame.size_bytes);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(frame.size_bytes));
  std::size_t i = 0;
  while (i < bytes.size()) {
    std::uint64_t word = mix64(state);
    for (int k = 0; k < 8 && i < bytes.size(); ++k, ++i)
      bytes[i] = static_cast<std::uint8_t>((word >> (8 * k)) & 0xff);
  }
  return bytes;
}

AnnotatedClip generate_synthetic_clip(std::uint64_t seed, const ClipScenario& sc) {
  if (sc.frame_count == 0) throw DatasetError("scenario frame_count must be positive");
  if (!(sc.fps > 0)) throw DatasetError("scenario fps must be > 0");
  if (!(sc.road_area_px > 0)) throw DatasetError("scenario road_area_px must be positive");

  std::uint64_t state = seed ^ fnv1a(sc.clip_id);
  AnnotatedClip clip;
  clip.clip_id = sc.clip_id;
  clip.fps = sc.fps;
  clip.frame_count = sc.frame_count;
  clip.road_area_px = sc.road_area_px;

  const auto& types = vocab::vehicle_types();
  const auto& colors = vocab::vehicle_colors();

  struct Track {
    std::uint32_t id;
    std::string color;
    std::string vtype;
    double w0, h0, x0, y0, dx, dy;
  };
  std::vector<Track> movers;
  int n = std::max(sc.vehicle_count, 0);
  // Moving vehicles approach the camera: bbox area grows ~2.56x over the clip.
  double per_vehicle_area = n > 0 ? sc.congestion * sc.road_area_px / n : 0.0;
  for (int i = 0; i < n; ++i) {
    Track t;
    t.id = static_cast<std::uint32_t>(i);
    t.color = colors[mix64(state) % colors.size()];
    t.vtype = types[mix64(state) % types.size()];
    double aspect = 0.8 + 0.05 * static_cast<double>(draw(state, 0, 8));  // w/h in [0.8, 1.2]
    t.w0 = std::max(4.0, std::floor(std::sqrt(per_vehicle_area * aspect)));
    t.h0 = std::max(4.0, std::floor(std::sqrt(per_vehicle_area / aspect)));
    t.x0 = static_cast<double>(draw(state, 0, 800));
    t.y0 = static_cast<double>(draw(state, 0, 400));
    t.dx = static_cast<double>(draw(state, -3, 3));
    t.dy = static_cast<double>(draw(state, 1, 3));
    movers.push_back(t);
  }

  std::optional<Track> stopped;
  if (sc.stopped_vehicle_span) {
    Track t;
    t.id = static_cast<std::uint32_t>(n);
    t.color = colors[mix64(state) % colors.size()];
    t.vtype = types[mix64(state) % types.size()];
    double area = std::max(per_vehicle_area, 1200.0);
    t.w0 = std::max(4.0, std::floor(std::sqrt(area)));
    t.h0 = t.w0;
    t.x0 = static_cast<double>(draw(state, 0, 800));
    t.y0 = static_cast<double>(draw(state, 0, 400));
    t.dx = t.dy = 0;
    stopped = t;
  }

  auto object_label_for = [](const std::string& vtype) -> std::string {
    if (vtype == "bus") return "bus";
    if (vtype == "truck") return "truck";
    return "car";
  };
  auto in_span = [](const std::optional<std::pair<std::uint32_t, std::uint32_t>>& span,
                    std::uint32_t f) {
    return span && f >= span->first && f <= span->second;
  };

  std::int64_t total_bytes = 0;
  const std::uint32_t last = sc.frame_count - 1;
  for (std::uint32_t f = 0; f < sc.frame_count; ++f) {
    FrameAnnotation frame;
    frame.frame_id = f;
    frame.lane_count = sc.lane_count;
    std::int64_t jitter = draw(state, -sc.mean_frame_bytes / 4, sc.mean_frame_bytes / 4);
    frame.size_bytes = std::max<std::int64_t>(1, sc.mean_frame_bytes + jitter);
    total_bytes += frame.size_bytes;

    double progress = last > 0 ? static_cast<double>(f) / last : 0.0;
    double scale = 1.0 + 0.6 * progress;
    for (const auto& t : movers) {
      VehicleAnnotation v;
      v.track_id = t.id;
      v.color = t.color;
      v.vtype = t.vtype;
      v.bbox = BBox{std::floor(t.x0 + t.dx * f * 0.1), std::floor(t.y0 + t.dy * f * 0.1),
                    std::floor(t.w0 * scale), std::floor(t.h0 * scale)};
      frame.vehicles.push_back(v);
      double conf = 0.80 + 0.01 * static_cast<double>(draw(state, 0, 19));
      frame.objects.push_back({object_label_for(t.vtype), conf, v.bbox});
    }
    if (stopped && in_span(sc.stopped_vehicle_span, f)) {
      VehicleAnnotation v;
      v.track_id = stopped->id;
      v.color = stopped->color;
      v.vtype = stopped->vtype;
      v.bbox = BBox{stopped->x0, stopped->y0, stopped->w0, stopped->h0};
      frame.vehicles.push_back(v);
      double conf = 0.80 + 0.01 * static_cast<double>(draw(state, 0, 19));
      frame.objects.push_back({object_label_for(stopped->vtype), conf, v.bbox});
    }
    if (in_span(sc.motorcycle_span, f)) {
      double conf = 0.80 + 0.01 * static_cast<double>(draw(state, 0, 19));
      BBox box{static_cast<double>(draw(state, 0, 800)), static_cast<double>(draw(state, 0, 400)),
               22.0, 40.0};
      frame.objects.push_back({"motorcycle", conf, box});
      frame.objects.push_back({"person", conf, BBox{box.x, box.y - 30, 20.0, 44.0}});
    }
    if (!sc.plate.empty() && !frame.vehicles.empty()) frame.plates.push_back(sc.plate);
    if (in_span(sc.sign_span, f) && !sc.sign_name.empty()) {
      double conf = 0.90 + 0.01 * static_cast<double>(draw(state, 0, 9));
      frame.signs.push_back({conf, sc.sign_name});
    }
    clip.frames.push_back(std::move(frame));
  }
  // Mirrors video compression: the stored clip is far smaller than the sum
  // of its extracted frames.
  clip.compressed_size_bytes = std::max<std::int64_t>(1, total_bytes / 8);

  auto issues = validate_clip(clip);
  if (!issues.empty())
    throw DatasetError("generated clip failed validation: " + issues.front(), issues);
  return clip;
}

}  // namespace semcom::dataset
