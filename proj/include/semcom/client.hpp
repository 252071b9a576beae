#pragma once

#include <string>

#include "semcom/protocol.hpp"

// Receiver-side helper: one request/reply exchange with a transmitter.
namespace semcom::client {

protocol::Message submit_request(const std::string& host, int port, const std::string& session_id,
                                 const std::string& clip_id, const std::string& text);

// Renders a reply for the terminal; frame payloads are written to out_dir
// as frame_<id>.bin when the reply carries frames.
std::string render_feedback(const protocol::Message& reply, const std::string& out_dir);

}  // namespace semcom::client
