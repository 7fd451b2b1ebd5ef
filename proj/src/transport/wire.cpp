#include "interop/transport/wire.hpp"

#include <array>

namespace interop::transport {

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "EnrollReq",  "CreateTopicReq", "SubscribeReq", "UnsubscribeReq",
    "PublishReq", "UpdateNotify",   "QueryReq",     "Reply"};

}  // namespace

std::string_view to_string(MessageKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<MessageKind> parse_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<MessageKind>(i);
  }
  return std::nullopt;
}

std::string Endpoint::key() const {
  return host + ":" + std::to_string(port) + base_path;
}

std::string Endpoint::path_for(MessageKind kind) const {
  return base_path + "/v1/" + std::string(to_string(kind));
}

int http_status_for(std::string_view s) {
  if (s == status::kOk) return 200;
  if (s == status::kBadRequest) return 400;
  if (s == status::kForbidden) return 403;
  if (s == status::kNotFound || s == status::kUnknownTopic) return 404;
  if (s == status::kConflict) return 409;
  if (s == status::kOverloaded) return 429;
  if (s == status::kTimeout) return 504;
  return 500;
}

std::string_view to_string(TransportErrc code) {
  switch (code) {
    case TransportErrc::Timeout: return "timeout";
    case TransportErrc::ConnectionRefused: return "connection_refused";
    case TransportErrc::Malformed: return "malformed_reply";
    case TransportErrc::AlreadyBound: return "already_bound";
  }
  return "unknown";
}

std::string reply_body(std::string_view s, Json fields) {
  fields["status"] = s;
  return canonical(fields);
}

std::string invoke_handler(const Handler& handler, const WireMessage& request) {
  try {
    return handler(request);
  } catch (const std::exception& e) {
    return reply_body(status::kError, Json{{"error", e.what()}});
  } catch (...) {
    return reply_body(status::kError, Json{{"error", "unknown exception"}});
  }
}

bool well_formed_reply(std::string_view body) {
  auto j = parse_object(body);
  return j && j->contains("status") && (*j)["status"].is_string();
}

}  // namespace interop::transport
