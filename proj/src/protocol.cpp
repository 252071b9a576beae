#include "semcom/protocol.hpp"

#include <algorithm>

#include "json.hpp"

namespace semcom::protocol {

using nlohmann::json;

namespace detail {

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_sextet(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}
}  // namespace

std::string base64_encode(const std::uint8_t* data, std::size_t size) {
  std::string out;
  out.reserve((size + 2) / 3 * 4);
  for (std::size_t i = 0; i < size; i += 3) {
    std::uint32_t chunk = static_cast<std::uint32_t>(data[i]) << 16;
    if (i + 1 < size) chunk |= static_cast<std::uint32_t>(data[i + 1]) << 8;
    if (i + 2 < size) chunk |= static_cast<std::uint32_t>(data[i + 2]);
    out.push_back(kAlphabet[(chunk >> 18) & 0x3f]);
    out.push_back(kAlphabet[(chunk >> 12) & 0x3f]);
    out.push_back(i + 1 < size ? kAlphabet[(chunk >> 6) & 0x3f] : '=');
    out.push_back(i + 2 < size ? kAlphabet[chunk & 0x3f] : '=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0)
    throw ProtocolError(ProtocolError::Kind::MalformedJson, "base64 length not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      char c = text[i + k];
      if (c == '=' && k >= 2 && i + 4 == text.size()) {
        vals[k] = 0;
        ++pad;
      } else {
        vals[k] = decode_sextet(c);
        if (vals[k] < 0 || pad > 0)
          throw ProtocolError(ProtocolError::Kind::MalformedJson, "invalid base64 character");
      }
    }
    std::uint32_t chunk = (static_cast<std::uint32_t>(vals[0]) << 18) |
                          (static_cast<std::uint32_t>(vals[1]) << 12) |
                          (static_cast<std::uint32_t>(vals[2]) << 6) |
                          static_cast<std::uint32_t>(vals[3]);
    out.push_back(static_cast<std::uint8_t>((chunk >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((chunk >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(chunk & 0xff));
  }
  return out;
}

}  // namespace detail

namespace {

constexpr const char* kTagRequest = "REQUEST";
constexpr const char* kTagFeedbackText = "FEEDBACK_TEXT";
constexpr const char* kTagFeedbackFrames = "FEEDBACK_FRAMES";
constexpr const char* kTagErrorReply = "ERROR_REPLY";

[[noreturn]] void invariant_error(const std::string& what) {
  throw ProtocolError(ProtocolError::Kind::Invariant, what);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string get_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw ProtocolError(ProtocolError::Kind::MalformedJson,
                        std::string("missing or non-string field \"") + key + "\"");
  return it->get<std::string>();
}

std::vector<std::string> get_string_list(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array())
    throw ProtocolError(ProtocolError::Kind::MalformedJson,
                        std::string("missing or non-array field \"") + key + "\"");
  std::vector<std::string> out;
  for (const auto& item : *it) {
    if (!item.is_string())
      throw ProtocolError(ProtocolError::Kind::MalformedJson,
                          std::string("non-string entry in \"") + key + "\"");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string type_tag(const Message& msg) {
  switch (msg.body.index()) {
    case 0: return kTagRequest;
    case 1: return kTagFeedbackText;
    case 2: return kTagFeedbackFrames;
    default: return kTagErrorReply;
  }
}

void validate(const Message& msg) {
  if (msg.session_id.empty()) invariant_error("session_id must be non-empty");
  if (const auto* req = std::get_if<Request>(&msg.body)) {
    if (blank(req->text)) invariant_error("REQUEST.text must be non-empty after trim");
  } else if (const auto* frames = std::get_if<FeedbackFrames>(&msg.body)) {
    for (std::size_t i = 1; i < frames->frame_ids.size(); ++i)
      if (frames->frame_ids[i] <= frames->frame_ids[i - 1])
        invariant_error("FEEDBACK_FRAMES.frame_ids must be strictly increasing");
    if (frames->frames.size() != frames->frame_ids.size())
      invariant_error("FEEDBACK_FRAMES.frames length must match frame_ids");
    for (std::size_t i = 0; i < frames->frames.size(); ++i)
      if (frames->frames[i].frame_id != frames->frame_ids[i])
        invariant_error("FEEDBACK_FRAMES.frames ids must match frame_ids order");
  }
}

std::vector<std::uint8_t> encode_message(const Message& msg) {
  validate(msg);
  json j;  // nlohmann objects keep keys sorted, which makes the bytes canonical
  j["type"] = type_tag(msg);
  j["session_id"] = msg.session_id;
  if (const auto* req = std::get_if<Request>(&msg.body)) {
    j["clip_id"] = req->clip_id;
    j["text"] = req->text;
  } else if (const auto* text = std::get_if<FeedbackText>(&msg.body)) {
    j["answer"] = text->answer;
    j["plan_trace"] = text->plan_trace;
    j["tool_used"] = text->tool_used;
  } else if (const auto* frames = std::get_if<FeedbackFrames>(&msg.body)) {
    j["frame_ids"] = frames->frame_ids;
    json list = json::array();
    for (const auto& frame : frames->frames) {
      list.push_back({{"frame_id", frame.frame_id},
                      {"payload", detail::base64_encode(frame.data.data(), frame.data.size())}});
    }
    j["frames"] = std::move(list);
    j["explanation"] = frames->explanation;
    j["plan_trace"] = frames->plan_trace;
  } else if (const auto* error = std::get_if<ErrorReply>(&msg.body)) {
    j["code"] = error->code;
    j["detail"] = error->detail;
  }

  std::string payload = j.dump();
  if (payload.size() > kMaxPayloadBytes)
    throw ProtocolError(ProtocolError::Kind::Oversize,
                        "payload exceeds 2^31-1 bytes: " + std::to_string(payload.size()));
  std::vector<std::uint8_t> out;
  out.reserve(4 + payload.size());
  std::uint32_t len = static_cast<std::uint32_t>(payload.size());
  out.push_back(static_cast<std::uint8_t>((len >> 24) & 0xff));
  out.push_back(static_cast<std::uint8_t>((len >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((len >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>(len & 0xff));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::size_t MemorySource::read(std::uint8_t* buf, std::size_t n) {
  std::size_t take = std::min(n, size_ - pos_);
  std::copy(data_ + pos_, data_ + pos_ + take, buf);
  pos_ += take;
  return take;
}

namespace {

void read_exact(ByteSource& source, std::uint8_t* buf, std::size_t n, const char* what) {
  std::size_t got = 0;
  while (got < n) {
    std::size_t r = source.read(buf + got, n - got);
    if (r == 0)
      throw ProtocolError(ProtocolError::Kind::Truncated,
                          std::string("stream truncated while reading ") + what + " (" +
                              std::to_string(got) + "/" + std::to_string(n) + " bytes)");
    got += r;
  }
}

Message message_from_json(const json& j) {
  if (!j.is_object())
    throw ProtocolError(ProtocolError::Kind::MalformedJson, "payload is not a JSON object");
  std::string type = get_string(j, "type");
  Message msg;
  msg.session_id = get_string(j, "session_id");
  if (type == kTagRequest) {
    Request req;
    req.clip_id = get_string(j, "clip_id");
    req.text = get_string(j, "text");
    msg.body = std::move(req);
  } else if (type == kTagFeedbackText) {
    FeedbackText text;
    text.answer = get_string(j, "answer");
    text.plan_trace = get_string_list(j, "plan_trace");
    text.tool_used = get_string(j, "tool_used");
    msg.body = std::move(text);
  } else if (type == kTagFeedbackFrames) {
    FeedbackFrames frames;
    auto ids = j.find("frame_ids");
    if (ids == j.end() || !ids->is_array())
      throw ProtocolError(ProtocolError::Kind::MalformedJson, "missing frame_ids array");
    for (const auto& id : *ids) {
      if (!id.is_number_unsigned())
        throw ProtocolError(ProtocolError::Kind::MalformedJson, "frame_ids must be non-negative");
      frames.frame_ids.push_back(id.get<std::uint32_t>());
    }
    auto list = j.find("frames");
    if (list == j.end() || !list->is_array())
      throw ProtocolError(ProtocolError::Kind::MalformedJson, "missing frames array");
    for (const auto& item : *list) {
      FramePayload frame;
      if (!item.is_object() || !item.contains("frame_id") || !item["frame_id"].is_number_unsigned())
        throw ProtocolError(ProtocolError::Kind::MalformedJson, "frame entry missing frame_id");
      frame.frame_id = item["frame_id"].get<std::uint32_t>();
      frame.data = detail::base64_decode(get_string(item, "payload"));
      frames.frames.push_back(std::move(frame));
    }
    frames.explanation = get_string(j, "explanation");
    frames.plan_trace = get_string_list(j, "plan_trace");
    msg.body = std::move(frames);
  } else if (type == kTagErrorReply) {
    ErrorReply error;
    error.code = get_string(j, "code");
    error.detail = get_string(j, "detail");
    msg.body = std::move(error);
  } else {
    throw ProtocolError(ProtocolError::Kind::UnknownType, "unknown message type \"" + type + "\"");
  }
  validate(msg);
  return msg;
}

}  // namespace

Message decode_message(ByteSource& source) {
  std::uint8_t prefix[4];
  read_exact(source, prefix, 4, "length prefix");
  std::uint32_t len = (static_cast<std::uint32_t>(prefix[0]) << 24) |
                      (static_cast<std::uint32_t>(prefix[1]) << 16) |
                      (static_cast<std::uint32_t>(prefix[2]) << 8) |
                      static_cast<std::uint32_t>(prefix[3]);
  if (len > kMaxPayloadBytes)
    throw ProtocolError(ProtocolError::Kind::Oversize,
                        "declared payload length " + std::to_string(len) + " exceeds 2^31-1");
  std::vector<std::uint8_t> payload(len);
  if (len > 0) read_exact(source, payload.data(), len, "payload");
  json j = json::parse(payload.begin(), payload.end(), nullptr, false);
  if (j.is_discarded())
    throw ProtocolError(ProtocolError::Kind::MalformedJson, "payload is not valid JSON");
  return message_from_json(j);
}

}  // namespace semcom::protocol
