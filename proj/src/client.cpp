#include "semcom/client.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "semcom/net.hpp"

namespace semcom::client {

namespace fs = std::filesystem;

protocol::Message submit_request(const std::string& host, int port, const std::string& session_id,
                                 const std::string& clip_id, const std::string& text) {
  net::Socket socket = net::connect_tcp(host, port);
  net::send_message(socket, protocol::Message{session_id, protocol::Request{clip_id, text}});
  return net::read_message(socket);
}

std::string render_feedback(const protocol::Message& reply, const std::string& out_dir) {
  std::ostringstream out;
  if (const auto* text = std::get_if<protocol::FeedbackText>(&reply.body)) {
    out << text->answer << "\n";
    out << "\n(tool used: " << text->tool_used << "; plans tried: " << text->plan_trace.size()
        << ")\n";
  } else if (const auto* frames = std::get_if<protocol::FeedbackFrames>(&reply.body)) {
    out << frames->explanation << "\n";
    fs::create_directories(out_dir);
    for (const auto& frame : frames->frames) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%04u.bin", frame.frame_id);
      fs::path path = fs::path(out_dir) / name;
      std::ofstream file(path, std::ios::binary | std::ios::trunc);
      file.write(reinterpret_cast<const char*>(frame.data.data()),
                 static_cast<std::streamsize>(frame.data.size()));
      out << "wrote " << path.string() << " (" << frame.data.size() << " bytes)\n";
    }
    out << "frame ids:";
    for (auto id : frames->frame_ids) out << " " << id;
    out << "\n";
  } else if (const auto* error = std::get_if<protocol::ErrorReply>(&reply.body)) {
    out << "error " << error->code << ": " << error->detail << "\n";
  } else {
    out << "unexpected reply type " << protocol::type_tag(reply) << "\n";
  }
  return out.str();
}

}  // namespace semcom::client
