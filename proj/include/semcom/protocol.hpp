#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Wire protocol between receiver and transmitter: every message is a 4-byte
// big-endian payload length followed by a canonical JSON object (keys sorted,
// no insignificant whitespace). Binary frame payloads travel inline as
// base64. The codec is pure and reentrant.
namespace semcom::protocol {

constexpr std::size_t kMaxPayloadBytes = 0x7fffffff;  // 2^31 - 1

struct ProtocolError : std::runtime_error {
  enum class Kind { Truncated, MalformedJson, UnknownType, Invariant, Oversize };
  Kind kind;
  ProtocolError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

struct Request {
  std::string clip_id;
  std::string text;
  bool operator==(const Request&) const = default;
};

struct FeedbackText {
  std::string answer;
  std::vector<std::string> plan_trace;  // raw strings of all attempted plans
  std::string tool_used;
  bool operator==(const FeedbackText&) const = default;
};

struct FramePayload {
  std::uint32_t frame_id = 0;
  std::vector<std::uint8_t> data;
  bool operator==(const FramePayload&) const = default;
};

struct FeedbackFrames {
  std::vector<std::uint32_t> frame_ids;  // strictly increasing
  std::vector<FramePayload> frames;      // same length, same id order
  std::string explanation;
  std::vector<std::string> plan_trace;
  bool operator==(const FeedbackFrames&) const = default;
};

struct ErrorReply {
  std::string code;
  std::string detail;
  bool operator==(const ErrorReply&) const = default;
};

using MessageBody = std::variant<Request, FeedbackText, FeedbackFrames, ErrorReply>;

struct Message {
  std::string session_id;
  MessageBody body;
  bool operator==(const Message&) const = default;
};

// Variant tag as it appears in the JSON "type" field.
std::string type_tag(const Message& msg);

// Throws ProtocolError{Invariant} when a message violates its invariants.
void validate(const Message& msg);

// Length-prefixed canonical encoding. Encoding the same value twice yields
// identical bytes.
std::vector<std::uint8_t> encode_message(const Message& msg);

// Incremental byte supplier for decode_message. read() returns the number of
// bytes produced, 0 on end of stream.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::size_t read(std::uint8_t* buf, std::size_t n) = 0;
};

class MemorySource : public ByteSource {
 public:
  MemorySource(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  explicit MemorySource(const std::vector<std::uint8_t>& bytes)
      : MemorySource(bytes.data(), bytes.size()) {}
  std::size_t read(std::uint8_t* buf, std::size_t n) override;
  std::size_t offset() const { return pos_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

// Consumes exactly one length prefix plus payload; bytes past the declared
// payload are never touched.
Message decode_message(ByteSource& source);

namespace detail {
std::string base64_encode(const std::uint8_t* data, std::size_t size);
std::vector<std::uint8_t> base64_decode(const std::string& text);
}  // namespace detail

}  // namespace semcom::protocol
