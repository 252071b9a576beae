#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semcom/dataset.hpp"

// Definitions of the bundled desk-scale dataset: five synthetic clips and a
// labeled 40-request corpus (24 Y / 16 N). The datagen tool materializes
// them under fixtures/.
namespace semcom::fixtures {

struct ClipFixture {
  std::uint64_t seed;
  dataset::ClipScenario scenario;
};

// c01 light traffic, c02 stopped vehicle at frames 200..449, c03 heavy
// traffic, c04 motorcycle segment, c05 plates and a speed limit sign.
std::vector<ClipFixture> bundled_clip_scenarios();

std::vector<dataset::RequestRecord> bundled_corpus();

// The bundled corpus extended with more unfulfillable requests to reach a
// 3:4 Y:N mix; used for the bandwidth-reduction measurements.
std::vector<dataset::RequestRecord> reduction_corpus();

}  // namespace semcom::fixtures
