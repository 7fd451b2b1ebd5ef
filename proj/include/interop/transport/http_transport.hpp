#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "interop/transport/wire.hpp"

namespace interop::transport {

/// HTTP/JSON binding: POST {base_path}/v1/{kind}, body = message body,
/// header X-Correlation-Id. The reply body is returned verbatim with an HTTP
/// status derived from its "status" field.
class HttpTransport final : public Transport {
 public:
  HttpTransport();
  ~HttpTransport() override;

  WireMessage send(const Endpoint& to, const WireMessage& msg,
                   std::chrono::milliseconds deadline) override;
  void serve(const Endpoint& at, Handler handler) override;
  void unserve(const Endpoint& at) override;

 private:
  struct Server;

  std::mutex mu_;
  std::map<std::string, std::unique_ptr<Server>> servers_;
};

inline constexpr std::string_view kCorrelationHeader = "X-Correlation-Id";

}  // namespace interop::transport
