#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "semcom/protocol.hpp"

// Shared test helpers: fixture paths and a pseudorandom message generator
// used by the protocol round-trip properties.
namespace semcom::testsupport {

inline std::string fixture_path(const std::string& name) {
  return std::string(SEMCOM_FIXTURE_DIR) + "/" + name;
}

inline std::string data_path(const std::string& name) {
  return std::string(SEMCOM_DATA_DIR) + "/" + name;
}

// Deterministic message generator over all four variants, including some
// multi-byte UTF-8 text and arbitrary payload bytes.
class MessageGenerator {
 public:
  explicit MessageGenerator(std::uint64_t seed) : rng_(seed) {}

  protocol::Message next() {
    protocol::Message msg;
    msg.session_id = "s" + std::to_string(rng_() % 100000);
    switch (rng_() % 4) {
      case 0: {
        protocol::Request req;
        req.clip_id = "clip-" + std::to_string(rng_() % 1000);
        req.text = text(1 + rng_() % 60);
        msg.body = req;
        break;
      }
      case 1: {
        protocol::FeedbackText text_reply;
        text_reply.answer = text(rng_() % 200);
        if (text_reply.answer.empty()) text_reply.answer = "ok";
        for (std::uint64_t i = 0, n = rng_() % 4; i < n; ++i)
          text_reply.plan_trace.push_back("Video Sampler | Tool " + std::to_string(i) +
                                          " | Analysis");
        text_reply.tool_used = "Tool " + std::to_string(rng_() % 8);
        msg.body = text_reply;
        break;
      }
      case 2: {
        protocol::FeedbackFrames frames;
        std::uint32_t id = rng_() % 16;
        for (std::uint64_t i = 0, n = rng_() % 5; i < n; ++i) {
          frames.frame_ids.push_back(id);
          protocol::FramePayload payload;
          payload.frame_id = id;
          for (std::uint64_t b = 0, m = rng_() % 64; b < m; ++b)
            payload.data.push_back(static_cast<std::uint8_t>(rng_() & 0xff));
          frames.frames.push_back(std::move(payload));
          id += 1 + rng_() % 50;
        }
        frames.explanation = text(1 + rng_() % 80);
        for (std::uint64_t i = 0, n = rng_() % 3; i < n; ++i)
          frames.plan_trace.push_back("Video Sampler | Tool " + std::to_string(i) + " | Analysis");
        msg.body = frames;
        break;
      }
      default: {
        protocol::ErrorReply error;
        error.code = rng_() % 2 ? "NO_CLIP" : "BAD_MESSAGE";
        error.detail = text(rng_() % 40);
        msg.body = error;
        break;
      }
    }
    return msg;
  }

 private:
  std::string text(std::uint64_t length) {
    static const std::vector<std::string> pieces = {
        "a", "b", "z", "9", " ", "?", "\"", "\\", "\n", "jam", "traffic", "é", "中",
    };
    std::string out;
    for (std::uint64_t i = 0; i < length; ++i) out += pieces[rng_() % pieces.size()];
    // Keep REQUEST texts non-blank after trimming.
    if (out.find_first_not_of(" \n") == std::string::npos) out += "x";
    return out;
  }

  std::mt19937_64 rng_;
};

}  // namespace semcom::testsupport
