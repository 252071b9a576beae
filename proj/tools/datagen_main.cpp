#include <cstdio>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"

#include "semcom/dataset.hpp"
#include "semcom/fixtures.hpp"

// Materializes the bundled synthetic dataset: clip documents plus the
// labeled request corpus. Regenerating into the same directory is
// byte-stable.
int main(int argc, char** argv) {
  CLI::App app{"semcom datagen: write the bundled synthetic clips and request corpus"};
  std::string out_dir = "fixtures";
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    for (const auto& fixture : semcom::fixtures::bundled_clip_scenarios()) {
      auto clip = semcom::dataset::generate_synthetic_clip(fixture.seed, fixture.scenario);
      std::string path = out_dir + "/" + clip.clip_id + ".json";
      semcom::dataset::write_clip(clip, path);
      std::printf("wrote %s (%u frames, %lld bytes compressed)\n", path.c_str(), clip.frame_count,
                  static_cast<long long>(clip.compressed_size_bytes));
    }
    std::string corpus_path = out_dir + "/corpus40.jsonl";
    std::ofstream corpus(corpus_path, std::ios::binary | std::ios::trunc);
    if (!corpus) throw std::runtime_error("cannot write " + corpus_path);
    corpus << semcom::dataset::corpus_to_jsonl(semcom::fixtures::bundled_corpus());
    std::printf("wrote %s\n", corpus_path.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
