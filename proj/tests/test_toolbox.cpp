#include <cmath>
#include <fstream>

#include "doctest.h"

#include "oracles.hpp"
#include "semcom/toolbox.hpp"
#include "semcom/vocab.hpp"
#include "support.hpp"

using namespace semcom;
using dataset::AnnotatedClip;
using toolbox::ExecutionResult;
using toolbox::ToolError;

namespace {

AnnotatedClip two_frame_clip(double area_first, double area_last) {
  AnnotatedClip clip;
  clip.clip_id = "motion";
  clip.fps = 30.0;
  clip.frame_count = 2;
  clip.compressed_size_bytes = 10;
  clip.road_area_px = 100000.0;
  for (std::uint32_t f = 0; f < 2; ++f) {
    dataset::FrameAnnotation frame;
    frame.frame_id = f;
    frame.size_bytes = 100;
    frame.lane_count = 2;
    double area = f == 0 ? area_first : area_last;
    double side = std::sqrt(area);
    frame.vehicles.push_back({0, "blue", "sedan", {10, 10, side, side}});
    clip.frames.push_back(frame);
  }
  return clip;
}

}  // namespace

TEST_CASE("registry lists the eight tools in order") {
  const auto& tools = toolbox::registry();
  REQUIRE(tools.size() == 8);
  CHECK(tools[0].name == "Object Detection");
  CHECK(tools[1].name == "Vehicle Detection");
  CHECK(tools[2].name == "License Plate Detection");
  CHECK(tools[3].name == "Traffic Sign Detection");
  CHECK(tools[4].name == "Vehicle Motion Detection");
  CHECK(tools[5].name == "Lane Number Detection");
  CHECK(tools[6].name == "Traffic Flow Estimation");
  CHECK(tools[7].name == "Vehicle Density Estimation");
  for (std::size_t i = 0; i < tools.size(); ++i)
    CHECK(tools[i].index == static_cast<int>(i) + 1);
}

TEST_CASE("label sets follow the key-term mapping") {
  CHECK(toolbox::find_tool("Object Detection")->labels.size() == 80);
  CHECK(toolbox::find_tool("Vehicle Detection")->labels == vocab::vehicle_types());
  CHECK(toolbox::find_tool("Traffic Sign Detection")->labels ==
        std::vector<std::string>{"traffic sign"});
  auto motion = toolbox::find_tool("Vehicle Motion Detection");
  CHECK(motion->labels == std::vector<std::string>{"accident", "collision"});
  CHECK(motion->labels_are_proxies);
  CHECK(toolbox::find_tool("License Plate Detection")->labels.empty());
  CHECK(toolbox::find_tool("Lane Number Detection")->labels.empty());
  CHECK(toolbox::find_tool("Traffic Flow Estimation")->labels.empty());
  CHECK(toolbox::find_tool("Vehicle Density Estimation")->labels.empty());
}

TEST_CASE("tool descriptions carry the three-part structure") {
  for (const auto& tool : toolbox::registry()) {
    auto text = toolbox::describe_tool(tool);
    CHECK(text.find(tool.name) != std::string::npos);
    CHECK(text.find("The algorithm can") != std::string::npos);
    CHECK(text.find("example of the output") != std::string::npos);
  }
  auto density = toolbox::describe_tool(*toolbox::find_tool("Vehicle Density Estimation"));
  CHECK(density.find("The algorithm cannot") != std::string::npos);
  CHECK(density.find("0.23") != std::string::npos);
}

TEST_CASE("object detection sorts findings by descending confidence") {
  AnnotatedClip clip = two_frame_clip(900, 900);
  clip.frames[0].objects.push_back({"person", 0.88, {0, 0, 5, 5}});
  clip.frames[0].objects.push_back({"motorcycle", 0.91, {0, 0, 5, 5}});
  auto result = toolbox::run_object_detection(clip, {0, 1});
  const auto& findings = result.per_frame.at(0);
  REQUIRE(findings.size() == 2);
  CHECK(findings[0].text == "(0.91, 'motorcycle')");
  CHECK(findings[1].text == "(0.88, 'person')");
  CHECK(result.summary.find("[(0.91, 'motorcycle'), (0.88, 'person')]") != std::string::npos);
  CHECK(result.per_frame.at(1).empty());
  CHECK(result.matched_frame_ids("motorcycle") == std::set<std::uint32_t>{0});
  CHECK_THROWS_AS(toolbox::run_object_detection(clip, {7}), ToolError);
}

TEST_CASE("annotation lookups render their output formats") {
  AnnotatedClip clip = two_frame_clip(900, 900);
  clip.frames[1].plates.push_back({"B", "C", "5", "4", "9", "5", "0"});
  clip.frames[1].signs.push_back({0.95, "Speed Limit 70"});
  clip.frames[0].lane_count = 3;
  clip.frames[1].lane_count = 3;

  SUBCASE("vehicle detection") {
    auto result = toolbox::run_annotation_lookup("Vehicle Detection", clip, {0});
    CHECK(result.per_frame.at(0).size() == 1);
    CHECK(result.summary.find("0: [('Color: blue', 'Type: sedan')]") != std::string::npos);
    CHECK(result.matched_frame_ids("sedan") == std::set<std::uint32_t>{0});
    CHECK(result.matched_frame_ids("blue") == std::set<std::uint32_t>{0});
  }
  SUBCASE("license plates") {
    auto result = toolbox::run_annotation_lookup("License Plate Detection", clip, {0, 1});
    CHECK(result.per_frame.at(0).empty());
    REQUIRE(result.per_frame.at(1).size() == 1);
    CHECK(result.per_frame.at(1)[0].text == "['B', 'C', '5', '4', '9', '5', '0']");
    CHECK(result.summary.find("1: ['B', 'C', '5', '4', '9', '5', '0']") != std::string::npos);
  }
  SUBCASE("traffic signs") {
    auto result = toolbox::run_annotation_lookup("Traffic Sign Detection", clip, {0, 1});
    CHECK(result.per_frame.at(0).empty());
    CHECK(result.per_frame.at(1)[0].text == "(0.95, 'Speed Limit 70')");
    CHECK(result.matched_frame_ids("traffic sign") == std::set<std::uint32_t>{1});
  }
  SUBCASE("lane numbers") {
    auto result = toolbox::run_annotation_lookup("Lane Number Detection", clip, {0, 1});
    CHECK(result.summary == "number of lanes : [3]");
    CHECK(result.per_frame.at(0)[0].value == doctest::Approx(3.0));
  }
  SUBCASE("unknown tool") {
    CHECK_THROWS_AS(toolbox::run_annotation_lookup("Teleportation", clip, {0}), ToolError);
    CHECK_THROWS_AS(toolbox::run_annotation_lookup("Object Detection", clip, {0}), ToolError);
  }
}

TEST_CASE("motion classification follows the area-ratio rule") {
  SUBCASE("identical areas are not moving") {
    auto clip = two_frame_clip(1000, 1000);
    auto result = toolbox::run_vehicle_motion_detection(clip, {0, 1}, 1.15);
    CHECK(result.summary == "[not moving]");
    CHECK(result.stats.at("not_moving") == doctest::Approx(1.0));
  }
  SUBCASE("area ratio 1.5 is moving at tau 1.15") {
    auto clip = two_frame_clip(1000, 1500);
    auto result = toolbox::run_vehicle_motion_detection(clip, {0, 1}, 1.15);
    CHECK(result.summary == "[moving]");
  }
  SUBCASE("classification is symmetric in frame order") {
    auto grow = two_frame_clip(1000, 1500);
    auto shrink = two_frame_clip(1500, 1000);
    CHECK(toolbox::run_vehicle_motion_detection(grow, {0, 1}, 1.15).summary ==
          toolbox::run_vehicle_motion_detection(shrink, {0, 1}, 1.15).summary);
  }
  SUBCASE("one stationary and one growing track render in track order") {
    auto clip = two_frame_clip(1000, 1000);  // track 0 stays constant
    clip.frames[0].vehicles.push_back({1, "red", "suv", {0, 0, 10, 10}});
    clip.frames[1].vehicles.push_back({1, "red", "suv", {0, 0, 20, 20}});
    auto result = toolbox::run_vehicle_motion_detection(clip, {0, 1}, 1.15);
    CHECK(result.summary == "[not moving, moving]");
    auto matched = result.matched_frame_ids("accident");
    CHECK(matched == std::set<std::uint32_t>{0, 1});
  }
  SUBCASE("fewer than two frames is an error") {
    auto clip = two_frame_clip(1000, 1000);
    CHECK_THROWS_AS(toolbox::run_vehicle_motion_detection(clip, {0}, 1.15), ToolError);
  }
}

TEST_CASE("traffic flow counts distinct tracks") {
  AnnotatedClip clip = two_frame_clip(900, 900);
  clip.frames[0].vehicles = {{3, "blue", "sedan", {0, 0, 10, 10}},
                             {7, "red", "suv", {0, 0, 10, 10}}};
  clip.frames[1].vehicles = {{7, "red", "suv", {0, 0, 10, 10}},
                             {9, "white", "bus", {0, 0, 10, 10}}};
  auto result = toolbox::run_traffic_flow_estimation(clip, {0, 1});
  CHECK(result.summary == "Total vehicle number: 3");
  CHECK(result.stats.at("total_vehicles") == doctest::Approx(3.0));

  AnnotatedClip empty = two_frame_clip(900, 900);
  empty.frames[0].vehicles.clear();
  empty.frames[1].vehicles.clear();
  CHECK(toolbox::run_traffic_flow_estimation(empty, {0, 1}).summary == "Total vehicle number: 0");
}

TEST_CASE("density matches the sample output value and clamps to [0, 1]") {
  AnnotatedClip clip = two_frame_clip(900, 900);
  clip.road_area_px = 1000.0;
  clip.frames[0].vehicles = {{0, "blue", "sedan", {0, 0, 23, 10}}};  // 230 px
  clip.frames[1].vehicles = {{0, "blue", "sedan", {0, 0, 2000, 10}}};  // exceeds the road
  auto result = toolbox::run_vehicle_density_estimation(clip, {0, 1});
  CHECK(result.per_frame.at(0)[0].value == doctest::Approx(0.23));
  CHECK(result.summary.find("0: 0.23") != std::string::npos);
  CHECK(result.per_frame.at(1)[0].value == doctest::Approx(1.0));

  AnnotatedClip none = two_frame_clip(900, 900);
  none.frames[0].vehicles.clear();
  auto empty = toolbox::run_vehicle_density_estimation(none, {0});
  CHECK(empty.per_frame.at(0)[0].value == doctest::Approx(0.0));
}

TEST_CASE("executor outputs equal brute-force recomputation on generated clips") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    dataset::ClipScenario scenario;
    scenario.clip_id = "oracle" + std::to_string(seed);
    scenario.frame_count = 40 + static_cast<std::uint32_t>(seed * 3);
    scenario.vehicle_count = static_cast<int>(seed % 6);
    scenario.congestion = 0.02 * static_cast<double>(seed % 7);
    if (seed % 2) scenario.stopped_vehicle_span = {{10, scenario.frame_count - 1}};
    if (seed % 3 == 0) scenario.motorcycle_span = {{0, 25}};
    auto clip = dataset::generate_synthetic_clip(seed, scenario);

    std::vector<std::uint32_t> frames;
    for (std::uint32_t f = 0; f < clip.frame_count; f += 5) frames.push_back(f);

    auto density = toolbox::run_vehicle_density_estimation(clip, frames);
    for (auto f : frames)
      CHECK(density.per_frame.at(f)[0].value ==
            doctest::Approx(oracles::brute_density(clip, f)).epsilon(1e-12));

    auto flow = toolbox::run_traffic_flow_estimation(clip, frames);
    CHECK(flow.stats.at("total_vehicles") ==
          doctest::Approx(static_cast<double>(oracles::brute_flow(clip, frames))));

    if (frames.size() >= 2) {
      auto motion = toolbox::run_vehicle_motion_detection(clip, frames, 1.15);
      auto expected = oracles::brute_motion(clip, frames, 1.15);
      std::string summary = "[";
      bool first = true;
      for (const auto& [track, moving] : expected) {
        if (!first) summary += ", ";
        summary += moving ? "moving" : "not moving";
        first = false;
      }
      summary += "]";
      CHECK(motion.summary == summary);
    }

    auto lookup = toolbox::run_annotation_lookup("Vehicle Detection", clip, frames);
    for (auto f : frames)
      CHECK(lookup.per_frame.at(f).size() == clip.frames[f].vehicles.size());
    auto objects = toolbox::run_object_detection(clip, frames);
    for (auto f : frames)
      CHECK(objects.per_frame.at(f).size() == clip.frames[f].objects.size());
  }
}

TEST_CASE("density stays within [0, 1] on random frames") {
  int frames_checked = 0;
  for (std::uint64_t seed = 1; frames_checked < 10000; ++seed) {
    dataset::ClipScenario scenario;
    scenario.clip_id = "rand" + std::to_string(seed);
    scenario.frame_count = 500;
    scenario.vehicle_count = static_cast<int>(seed % 17);
    scenario.congestion = 0.15 * static_cast<double>(seed % 9);  // up to 1.2 nominal
    auto clip = dataset::generate_synthetic_clip(seed, scenario);
    std::vector<std::uint32_t> frames;
    for (std::uint32_t f = 0; f < clip.frame_count; ++f) frames.push_back(f);
    auto result = toolbox::run_vehicle_density_estimation(clip, frames);
    for (auto f : frames) {
      double d = *result.per_frame.at(f)[0].value;
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
    }
    frames_checked += static_cast<int>(frames.size());
  }
}

TEST_CASE("keyword table files override the built-in terms") {
  auto path = testsupport::data_path("keywords.txt");
  toolbox::load_keyword_table(path);
  auto density = toolbox::find_tool("Vehicle Density Estimation");
  CHECK(std::find(density->keywords.begin(), density->keywords.end(), "jam") !=
        density->keywords.end());
  toolbox::reset_keyword_table();

  // The shipped table matches the built-in defaults term for term.
  auto before = toolbox::registry();
  toolbox::load_keyword_table(path);
  for (std::size_t i = 0; i < before.size(); ++i) {
    auto loaded = toolbox::registry()[i].keywords;
    auto builtin = before[i].keywords;
    std::sort(loaded.begin(), loaded.end());
    std::sort(builtin.begin(), builtin.end());
    CHECK(loaded == builtin);
  }
  toolbox::reset_keyword_table();
}
