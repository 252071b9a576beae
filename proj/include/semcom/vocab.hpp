#pragma once

#include <string>
#include <vector>

// Fixed annotation vocabularies. Object labels, vehicle colors and vehicle
// types are lowercase; traffic sign names keep their display form.
namespace semcom::vocab {

const std::vector<std::string>& object_labels();      // 80 detectable objects
const std::vector<std::string>& vehicle_types();      // 9 types
const std::vector<std::string>& vehicle_colors();     // 10 colors
const std::vector<std::string>& traffic_sign_names();

bool is_object_label(const std::string& label);
bool is_vehicle_type(const std::string& vtype);
bool is_vehicle_color(const std::string& color);
bool is_traffic_sign_name(const std::string& name);

}  // namespace semcom::vocab
