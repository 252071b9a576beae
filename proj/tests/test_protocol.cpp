#include "doctest.h"

#include "semcom/protocol.hpp"
#include "support.hpp"

using namespace semcom;
using protocol::Message;
using protocol::ProtocolError;

namespace {

Message decode_bytes(const std::vector<std::uint8_t>& bytes) {
  protocol::MemorySource source(bytes);
  return protocol::decode_message(source);
}

}  // namespace

TEST_CASE("smallest variant encodes with type tag and length prefix") {
  Message msg{"s1", protocol::ErrorReply{"NO_CLIP", ""}};
  auto bytes = protocol::encode_message(msg);
  REQUIRE(bytes.size() > 4);
  std::uint32_t len = (bytes[0] << 24) | (bytes[1] << 16) | (bytes[2] << 8) | bytes[3];
  CHECK(len == bytes.size() - 4);
  std::string payload(bytes.begin() + 4, bytes.end());
  CHECK(payload.find("\"type\":\"ERROR_REPLY\"") != std::string::npos);
  CHECK(payload.find("\"code\":\"NO_CLIP\"") != std::string::npos);
  CHECK(decode_bytes(bytes) == msg);
}

TEST_CASE("request round-trips") {
  Message msg{"s7", protocol::Request{"c01", "Is there a traffic jam in the video?"}};
  CHECK(decode_bytes(protocol::encode_message(msg)) == msg);
}

TEST_CASE("1000 generated messages round-trip byte-for-byte") {
  testsupport::MessageGenerator gen(20240521);
  for (int i = 0; i < 1000; ++i) {
    Message msg = gen.next();
    auto bytes = protocol::encode_message(msg);
    Message back = decode_bytes(bytes);
    REQUIRE(back == msg);
    // Canonical encoding: re-encoding the decoded value gives identical bytes.
    REQUIRE(protocol::encode_message(back) == bytes);
  }
}

TEST_CASE("decoding consumes exactly one message and leaves trailing bytes") {
  Message first{"s1", protocol::Request{"c01", "first"}};
  Message second{"s2", protocol::ErrorReply{"NO_CLIP", "second"}};
  auto bytes = protocol::encode_message(first);
  auto more = protocol::encode_message(second);
  bytes.insert(bytes.end(), more.begin(), more.end());
  bytes.push_back(0xEE);  // trailing garbage must stay untouched

  protocol::MemorySource source(bytes);
  CHECK(protocol::decode_message(source) == first);
  CHECK(protocol::decode_message(source) == second);
  CHECK(source.offset() == bytes.size() - 1);
}

TEST_CASE("truncated stream is a distinct error") {
  // Prefix declares 10 payload bytes but only 4 follow.
  std::vector<std::uint8_t> bytes{0, 0, 0, 10, 'a', 'b', 'c', 'd'};
  protocol::MemorySource source(bytes);
  try {
    protocol::decode_message(source);
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.kind == ProtocolError::Kind::Truncated);
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
  }
}

TEST_CASE("unknown type is rejected") {
  std::string payload = R"({"session_id":"s1","type":"BOGUS"})";
  std::vector<std::uint8_t> bytes{0, 0, 0, static_cast<std::uint8_t>(payload.size())};
  bytes.insert(bytes.end(), payload.begin(), payload.end());
  protocol::MemorySource source(bytes);
  try {
    protocol::decode_message(source);
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.kind == ProtocolError::Kind::UnknownType);
  }
}

TEST_CASE("malformed JSON is a distinct error") {
  std::string payload = "{not json";
  std::vector<std::uint8_t> bytes{0, 0, 0, static_cast<std::uint8_t>(payload.size())};
  bytes.insert(bytes.end(), payload.begin(), payload.end());
  protocol::MemorySource source(bytes);
  try {
    protocol::decode_message(source);
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.kind == ProtocolError::Kind::MalformedJson);
  }
}

TEST_CASE("invariants are enforced on encode and decode") {
  SUBCASE("empty session id") {
    Message msg{"", protocol::ErrorReply{"X", ""}};
    CHECK_THROWS_AS(protocol::encode_message(msg), ProtocolError);
  }
  SUBCASE("blank request text") {
    Message msg{"s1", protocol::Request{"c01", "   "}};
    CHECK_THROWS_AS(protocol::encode_message(msg), ProtocolError);
  }
  SUBCASE("non-increasing frame ids") {
    protocol::FeedbackFrames frames;
    frames.frame_ids = {5, 5};
    frames.frames = {{5, {}}, {5, {}}};
    frames.explanation = "e";
    CHECK_THROWS_AS(protocol::encode_message(Message{"s1", frames}), ProtocolError);
  }
  SUBCASE("frames list mismatch") {
    protocol::FeedbackFrames frames;
    frames.frame_ids = {1, 2};
    frames.frames = {{1, {}}};
    frames.explanation = "e";
    CHECK_THROWS_AS(protocol::encode_message(Message{"s1", frames}), ProtocolError);
  }
  SUBCASE("decode enforces the same invariants") {
    std::string payload =
        R"({"clip_id":"c","session_id":"s1","text":"  ","type":"REQUEST"})";
    std::vector<std::uint8_t> bytes{0, 0, 0, static_cast<std::uint8_t>(payload.size())};
    bytes.insert(bytes.end(), payload.begin(), payload.end());
    protocol::MemorySource source(bytes);
    try {
      protocol::decode_message(source);
      FAIL("expected ProtocolError");
    } catch (const ProtocolError& e) {
      CHECK(e.kind == ProtocolError::Kind::Invariant);
    }
  }
}

TEST_CASE("an empty declared payload is malformed, not a crash") {
  std::vector<std::uint8_t> bytes{0, 0, 0, 0};
  protocol::MemorySource source(bytes);
  try {
    protocol::decode_message(source);
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.kind == ProtocolError::Kind::MalformedJson);
  }
}

TEST_CASE("declared length above the limit is an oversize error") {
  std::vector<std::uint8_t> bytes{0x80, 0, 0, 0};  // 2^31
  protocol::MemorySource source(bytes);
  try {
    protocol::decode_message(source);
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.kind == ProtocolError::Kind::Oversize);
  }
}

TEST_CASE("equal feedback-frames messages encode to identical canonical bytes") {
  protocol::FeedbackFrames frames;
  frames.frame_ids = {3, 40};
  frames.frames = {{3, {1, 2, 3}}, {40, {9}}};
  frames.explanation = "two frames";
  frames.plan_trace = {"Video Sampler | Object Detection | Analysis"};
  Message a{"s1", frames};
  Message b{"s1", frames};
  CHECK(protocol::encode_message(a) == protocol::encode_message(b));
  // Keys of the JSON object appear sorted.
  auto bytes = protocol::encode_message(a);
  std::string payload(bytes.begin() + 4, bytes.end());
  CHECK(payload.find("\"explanation\"") < payload.find("\"frame_ids\""));
  CHECK(payload.find("\"frame_ids\"") < payload.find("\"frames\""));
  CHECK(payload.find("\"frames\"") < payload.find("\"plan_trace\""));
  CHECK(payload.find("\"session_id\"") < payload.find("\"type\""));
}

TEST_CASE("base64 helpers round-trip binary payloads") {
  std::vector<std::uint8_t> data;
  for (int i = 0; i < 257; ++i) data.push_back(static_cast<std::uint8_t>(i & 0xff));
  for (std::size_t take = 0; take <= data.size(); take += 51) {
    std::string encoded = protocol::detail::base64_encode(data.data(), take);
    CHECK(protocol::detail::base64_decode(encoded) ==
          std::vector<std::uint8_t>(data.begin(), data.begin() + take));
  }
  CHECK_THROWS_AS(protocol::detail::base64_decode("a==="), ProtocolError);
  CHECK_THROWS_AS(protocol::detail::base64_decode("ab!="), ProtocolError);
}
