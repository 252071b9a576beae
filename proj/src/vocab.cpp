#include "semcom/vocab.hpp"

#include <algorithm>

namespace semcom::vocab {

const std::vector<std::string>& object_labels() {
  static const std::vector<std::string> labels = {
      "person",        "bicycle",      "car",           "motorcycle",    "airplane",
      "bus",           "train",        "truck",         "boat",          "traffic light",
      "fire hydrant",  "stop sign",    "parking meter", "bench",         "bird",
      "cat",           "dog",          "horse",         "sheep",         "cow",
      "elephant",      "bear",         "zebra",         "giraffe",       "backpack",
      "umbrella",      "handbag",      "tie",           "suitcase",      "frisbee",
      "skis",          "snowboard",    "sports ball",   "kite",          "baseball bat",
      "baseball glove", "skateboard",  "surfboard",     "racket",        "bottle",
      "wine glass",    "cup",          "fork",          "knife",         "spoon",
      "bowl",          "banana",       "apple",         "sandwich",      "orange",
      "broccoli",      "carrot",       "hot dog",       "pizza",         "donut",
      "cake",          "chair",        "couch",         "potted plant",  "bed",
      "dining table",  "toilet",       "tv",            "laptop",        "mouse",
      "remote",        "keyboard",     "phone",         "microwave",     "oven",
      "toaster",       "sink",         "refrigerator",  "book",          "clock",
      "vase",          "scissors",     "teddy bear",    "hair drier",    "toothbrush",
  };
  return labels;
}

const std::vector<std::string>& vehicle_types() {
  static const std::vector<std::string> types = {
      "sedan", "suv", "van", "hatchback", "mpv", "pickup", "bus", "truck", "estate",
  };
  return types;
}

const std::vector<std::string>& vehicle_colors() {
  static const std::vector<std::string> colors = {
      "yellow", "orange", "green", "gray", "red", "blue", "white", "golden", "brown", "black",
  };
  return colors;
}

const std::vector<std::string>& traffic_sign_names() {
  static const std::vector<std::string> names = {
      "Speed Limit 80",
      "No Bicycles",
      "No U-Turn",
      "Maximum Weight 55t",
      "Speed Limit 60",
      "Pedestrian Crossing",
      "No Honking",
      "Non-motor Vehicle Lane",
      "No Left Turn",
      "Yield",
      "Minimum Speed Limit 80",
      "Height Limit 4m",
      "Motor Vehicle Lane",
      "Speed Limit 70",
      "No Entry",
      "Height Limit 4.5m",
      "No Motorcycles",
      "No Large Buses",
      "No Rickshaws",
      "Crossroad Motor Vehicle Lane",
      "Speed Limit 30",
      "No Motor Vehicles",
      "No Parking (Except for Loading or Unloading)",
      "Children Crossing",
      "No Trucks",
      "No Two Specific Vehicles",
      "End of Speed Limit",
      "Speed Limit 20",
      "Maximum Weight 30t",
      "Speed Limit 40",
      "Speed Limit 120",
      "Road Work Ahead",
      "Height Limit 5m",
      "Minimum Speed Limit 60",
      "Pedestrians Crossing",
      "Speed Limit 100",
      "Merge Ahead",
      "Minimum Speed Limit 100",
      "No Right Turn",
      "Maximum Weight 20t",
      "Keep Right",
      "No Hazardous Materials",
      "Speed Limit 50",
  };
  return names;
}

namespace {
bool contains(const std::vector<std::string>& values, const std::string& value) {
  return std::find(values.begin(), values.end(), value) != values.end();
}
}  // namespace

bool is_object_label(const std::string& label) { return contains(object_labels(), label); }
bool is_vehicle_type(const std::string& vtype) { return contains(vehicle_types(), vtype); }
bool is_vehicle_color(const std::string& color) { return contains(vehicle_colors(), color); }
bool is_traffic_sign_name(const std::string& name) { return contains(traffic_sign_names(), name); }

}  // namespace semcom::vocab
