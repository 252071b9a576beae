#include "semcom/fixtures.hpp"

namespace semcom::fixtures {

using dataset::ClipScenario;
using dataset::RequestRecord;

std::vector<ClipFixture> bundled_clip_scenarios() {
  std::vector<ClipFixture> out;

  ClipScenario c01;
  c01.clip_id = "c01";
  c01.vehicle_count = 3;
  c01.congestion = 0.0023;  // density rounds to 0.0 until it reaches 0.01 near the end
  out.push_back({101, c01});

  ClipScenario c02;
  c02.clip_id = "c02";
  c02.vehicle_count = 3;
  c02.congestion = 0.01;
  c02.stopped_vehicle_span = {{200, 449}};
  out.push_back({7, c02});

  ClipScenario c03;
  c03.clip_id = "c03";
  c03.vehicle_count = 12;
  c03.congestion = 0.55;  // heavy traffic from the first frame
  out.push_back({103, c03});

  ClipScenario c04;
  c04.clip_id = "c04";
  c04.vehicle_count = 3;
  c04.congestion = 0.01;
  c04.motorcycle_span = {{100, 400}};
  out.push_back({104, c04});

  ClipScenario c05;
  c05.clip_id = "c05";
  c05.vehicle_count = 4;
  c05.congestion = 0.02;
  c05.plate = {"B", "C", "5", "4", "9", "5", "0"};
  c05.sign_span = {{0, 449}};
  c05.sign_name = "Speed Limit 70";
  out.push_back({105, c05});

  return out;
}

namespace {

RequestRecord record(const std::string& id, const std::string& clip, const std::string& text,
                     char label, const std::string& expected_tool = "") {
  RequestRecord r;
  r.request_id = id;
  r.clip_id = clip;
  r.text = text;
  r.label = label;
  if (!expected_tool.empty()) r.expected_tool = expected_tool;
  return r;
}

}  // namespace

std::vector<RequestRecord> bundled_corpus() {
  std::vector<RequestRecord> c;

  c.push_back(record("r001", "c04", "Are there any pedestrians in the video?", 'Y',
                     "Object Detection"));
  c.push_back(record("r002", "c01", "Is there a dog in the video?", 'Y', "Object Detection"));
  c.push_back(record("r003", "c04", "Are there bicycles in the first 5 seconds?", 'Y',
                     "Object Detection"));
  c.push_back(record("r004", "c01", "Is there a fire hydrant in the video?", 'Y',
                     "Object Detection"));
  c.push_back(record("r005", "c01", "What are the colors of the vehicles in the video?", 'Y',
                     "Vehicle Detection"));
  c.push_back(record("r006", "c03", "Are there any blue sedans in the video?", 'Y',
                     "Vehicle Detection"));
  c.push_back(record("r007", "c05", "What types of vehicles appear in the whole video?", 'Y',
                     "Vehicle Detection"));
  c.push_back(record("r008", "c05", "What is the license plate number of the white car?", 'Y',
                     "License Plate Detection"));
  c.push_back(record("r009", "c05", "Can you read the license plates in the video?", 'Y',
                     "License Plate Detection"));
  c.push_back(record("r010", "c05", "Show me the plate numbers at second 3.", 'Y',
                     "License Plate Detection"));
  c.push_back(record("r011", "c05", "Is there a speed limit sign in the video?", 'Y',
                     "Traffic Sign Detection"));
  c.push_back(record("r012", "c05", "What traffic signs appear in the video?", 'Y',
                     "Traffic Sign Detection"));
  c.push_back(record("r013", "c05", "Is there a pedestrian crossing sign?", 'Y',
                     "Traffic Sign Detection"));
  c.push_back(record("r014", "c01", "Are the vehicles moving in the video?", 'Y',
                     "Vehicle Motion Detection"));
  c.push_back(record("r015", "c02", "Is any vehicle stopped in the last 5 seconds?", 'Y',
                     "Vehicle Motion Detection"));
  c.push_back(record("r016", "c02", "Do any cars remain stationary in the video?", 'Y',
                     "Vehicle Motion Detection"));
  c.push_back(record("r017", "c01", "How many lanes does the road have?", 'Y',
                     "Lane Number Detection"));
  c.push_back(record("r018", "c05", "What is the number of lanes in the video?", 'Y',
                     "Lane Number Detection"));
  c.push_back(record("r019", "c01", "How many different vehicles appear in the whole video?", 'Y',
                     "Traffic Flow Estimation"));
  c.push_back(record("r020", "c03", "What is the total number of vehicles in the video?", 'Y',
                     "Traffic Flow Estimation"));
  c.push_back(record("r021", "c02", "Count the vehicles passing in the video.", 'Y',
                     "Traffic Flow Estimation"));
  c.push_back(record("r022", "c01", "Is there a traffic jam in the video?", 'Y',
                     "Vehicle Density Estimation"));
  c.push_back(record("r023", "c03", "Is the road congested in the video?", 'Y',
                     "Vehicle Density Estimation"));
  c.push_back(record("r024", "c01", "How dense is the traffic in the last 5 seconds?", 'Y',
                     "Vehicle Density Estimation"));

  auto accident = record("r025", "c02", "Did an accident happen in the video?", 'N');
  accident.relevant_span = {{200, 449}};
  c.push_back(accident);
  auto collision = record("r026", "c02", "Was there a collision in the video?", 'N');
  collision.relevant_span = {{200, 449}};
  c.push_back(collision);
  c.push_back(record("r027", "c02", "Did any crash occur in the video?", 'N'));
  c.push_back(record("r028", "c02", "Did two vehicles collide in the video?", 'N'));
  // Known planner miss: "how many" matches Traffic Flow Estimation, so this
  // record takes the text path and is counted inaccurate, mirroring an
  // imperfect real-world reflection ratio.
  c.push_back(record("r029", "c04", "How many motorcyclists wearing helmet in the whole video?",
                     'N'));
  c.push_back(record("r030", "c01", "What is the average rainfall in the video?", 'N'));
  c.push_back(record("r031", "c01", "Is it raining in the video?", 'N'));
  c.push_back(record("r032", "c03", "What is the weather like in the video?", 'N'));
  c.push_back(record("r033", "c01", "What time of day was the video recorded?", 'N'));
  c.push_back(record("r034", "c05", "Is the camera shaking during the video?", 'N'));
  c.push_back(record("r035", "c03", "Is anyone speeding in the video?", 'N'));
  c.push_back(record("r036", "c01", "Is the road surface wet in the video?", 'N'));
  c.push_back(record("r037", "c04", "What music is playing in the video?", 'N'));
  c.push_back(record("r038", "c02", "Did anyone honk during the video?", 'N'));
  c.push_back(record("r039", "c05", "How old is the driver in the video?", 'N'));
  c.push_back(record("r040", "c03", "Was the video recorded at night?", 'N'));

  return c;
}

std::vector<RequestRecord> reduction_corpus() {
  std::vector<RequestRecord> c = bundled_corpus();

  const std::vector<std::pair<std::string, std::string>> extra = {
      {"c01", "Is it snowing in the video?"},
      {"c02", "Was the footage captured in winter?"},
      {"c03", "Is the sun visible in the video?"},
      {"c04", "What language are the street names written in?"},
      {"c05", "Is the pavement damaged anywhere in the video?"},
      {"c01", "Did anyone wave at the camera?"},
      {"c02", "Is the wind strong in the video?"},
      {"c03", "What brand is the nearest shop in the video?"},
      {"c04", "Is the video recorded during rush hour?"},
      {"c05", "Are the streetlights switched on in the video?"},
      {"c01", "Did a balloon fly past the camera?"},
      {"c02", "Is anyone jaywalking in the video?"},
      {"c03", "What is the temperature outside in the video?"},
      {"c04", "Is the road being cleaned in the video?"},
      {"c05", "Did an earthquake occur during the video?"},
      {"c01", "Is the camera mounted on a pole?"},
  };
  int i = 0;
  for (const auto& [clip, text] : extra) {
    char id[16];
    std::snprintf(id, sizeof(id), "x%03d", ++i);
    c.push_back(record(id, clip, text, 'N'));
  }
  return c;
}

}  // namespace semcom::fixtures
