#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "interop/common/json.hpp"

namespace interop::transport {

enum class MessageKind : std::uint8_t {
  EnrollReq,
  CreateTopicReq,
  SubscribeReq,
  UnsubscribeReq,
  PublishReq,
  UpdateNotify,
  QueryReq,
  Reply,
};

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> parse_kind(std::string_view text);

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
  std::string base_path;

  /// "host:port/base_path", the registry key in both transports.
  std::string key() const;
  /// "{base_path}/v1/{kind}".
  std::string path_for(MessageKind kind) const;

  bool operator==(const Endpoint&) const = default;
};

/// One request or reply. `body` is canonical JSON text.
struct WireMessage {
  MessageKind kind = MessageKind::Reply;
  std::string correlation_id;
  std::string body;
};

/// Reply status taxonomy. Every reply body carries one of these in "status".
namespace status {
inline constexpr std::string_view kOk = "ok";
inline constexpr std::string_view kBadRequest = "bad_request";
inline constexpr std::string_view kNotFound = "not_found";
inline constexpr std::string_view kConflict = "conflict";
inline constexpr std::string_view kForbidden = "forbidden";
inline constexpr std::string_view kOverloaded = "overloaded";
inline constexpr std::string_view kUnknownTopic = "unknown_topic";
inline constexpr std::string_view kTimeout = "timeout";
inline constexpr std::string_view kError = "error";
}  // namespace status

/// HTTP status code carried alongside a reply body with the given status.
int http_status_for(std::string_view reply_status);

enum class TransportErrc { Timeout, ConnectionRefused, Malformed, AlreadyBound };

std::string_view to_string(TransportErrc code);

class TransportError : public std::runtime_error {
 public:
  TransportError(TransportErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  TransportErrc code() const { return code_; }

 private:
  TransportErrc code_;
};

/// Produces the reply body for a request. Exceptions become
/// {"status":"error"} replies.
using Handler = std::function<std::string(const WireMessage& request)>;

inline constexpr std::chrono::milliseconds kDefaultDeadline{2000};

/// Request/response layer between the broker and remote networks.
class Transport {
 public:
  virtual ~Transport() = default;

  /// Exactly one outcome: a Reply whose correlation_id matches, or a
  /// TransportError (Timeout, ConnectionRefused, Malformed).
  virtual WireMessage send(const Endpoint& to, const WireMessage& msg,
                           std::chrono::milliseconds deadline) = 0;

  /// Throws TransportError(AlreadyBound) if the endpoint is taken.
  virtual void serve(const Endpoint& at, Handler handler) = 0;
  virtual void unserve(const Endpoint& at) = 0;
};

/// Runs `handler`, converting exceptions into an error reply body.
std::string invoke_handler(const Handler& handler, const WireMessage& request);

/// Checks that a reply body is a JSON object with a string "status".
bool well_formed_reply(std::string_view body);

std::string reply_body(std::string_view status, Json fields = Json::object());

}  // namespace interop::transport
