#include "interop/transport/http_transport.hpp"

#include <httplib.h>

#include <thread>

namespace interop::transport {

using SteadyClock = std::chrono::steady_clock;

struct HttpTransport::Server {
  httplib::Server http;
  std::thread thread;
  std::mutex mu;
  std::map<std::string, Handler> routes;  // base_path -> handler

  void dispatch(const httplib::Request& req, httplib::Response& res) {
    auto respond = [&](const std::string& body) {
      const auto parsed = parse_object(body);
      const std::string s =
          parsed && parsed->contains("status") && (*parsed)["status"].is_string()
              ? (*parsed)["status"].get<std::string>()
              : std::string(status::kError);
      res.status = http_status_for(s);
      res.set_content(body, "application/json");
    };
    const auto& path = req.path;
    const auto pos = path.rfind("/v1/");
    if (pos == std::string::npos) {
      respond(reply_body(status::kNotFound, Json{{"error", "no such route"}}));
      return;
    }
    const auto base = path.substr(0, pos);
    const auto kind = parse_kind(path.substr(pos + 4));
    Handler handler;
    {
      std::lock_guard lock(mu);
      auto it = routes.find(base);
      if (it != routes.end()) handler = it->second;
    }
    if (!handler) {
      respond(reply_body(status::kNotFound, Json{{"error", "no such route"}}));
      return;
    }
    res.set_header(std::string(kCorrelationHeader),
                   req.get_header_value(std::string(kCorrelationHeader)));
    if (!kind) {
      respond(reply_body(status::kBadRequest, Json{{"error", "unknown message kind"}}));
      return;
    }
    WireMessage msg{*kind, req.get_header_value(std::string(kCorrelationHeader)), req.body};
    respond(invoke_handler(handler, msg));
  }
};

HttpTransport::HttpTransport() = default;

HttpTransport::~HttpTransport() {
  std::lock_guard lock(mu_);
  for (auto& [key, server] : servers_) {
    server->http.stop();
    if (server->thread.joinable()) server->thread.join();
  }
}

WireMessage HttpTransport::send(const Endpoint& to, const WireMessage& msg,
                                std::chrono::milliseconds deadline) {
  const auto start = SteadyClock::now();
  httplib::Client client(to.host, to.port);
  client.set_connection_timeout(deadline);
  client.set_read_timeout(deadline);
  client.set_write_timeout(deadline);
  httplib::Headers headers{{std::string(kCorrelationHeader), msg.correlation_id}};
  auto res = client.Post(to.path_for(msg.kind), headers, msg.body, "application/json");
  const auto elapsed = SteadyClock::now() - start;
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Connection) {
      throw TransportError(TransportErrc::ConnectionRefused, to.key());
    }
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
        err == httplib::Error::Write) {
      if (elapsed >= deadline - std::chrono::milliseconds(5)) {
        throw TransportError(TransportErrc::Timeout, "no reply from " + to.key());
      }
      throw TransportError(TransportErrc::Malformed,
                           "connection closed: " + httplib::to_string(err));
    }
    throw TransportError(TransportErrc::ConnectionRefused, httplib::to_string(err));
  }
  if (elapsed > deadline) {
    throw TransportError(TransportErrc::Timeout, "reply from " + to.key() + " missed deadline");
  }
  if (res->get_header_value(std::string(kCorrelationHeader)) != msg.correlation_id) {
    throw TransportError(TransportErrc::Malformed, "correlation id mismatch");
  }
  if (!well_formed_reply(res->body)) {
    throw TransportError(TransportErrc::Malformed, "reply body is not a status object");
  }
  return {MessageKind::Reply, msg.correlation_id, res->body};
}

void HttpTransport::serve(const Endpoint& at, Handler handler) {
  std::lock_guard lock(mu_);
  const auto server_key = at.host + ":" + std::to_string(at.port);
  auto it = servers_.find(server_key);
  if (it != servers_.end()) {
    std::lock_guard route_lock(it->second->mu);
    if (!it->second->routes.emplace(at.base_path, std::move(handler)).second) {
      throw TransportError(TransportErrc::AlreadyBound, at.key());
    }
    return;
  }
  auto server = std::make_unique<Server>();
  server->routes.emplace(at.base_path, std::move(handler));
  server->http.new_task_queue = [] { return new httplib::ThreadPool(32); };
  auto* raw = server.get();
  server->http.Post(R"(/.*)", [raw](const httplib::Request& req, httplib::Response& res) {
    raw->dispatch(req, res);
  });
  if (!server->http.bind_to_port(at.host, at.port)) {
    throw TransportError(TransportErrc::AlreadyBound, "cannot bind " + server_key);
  }
  server->thread = std::thread([raw] { raw->http.listen_after_bind(); });
  server->http.wait_until_ready();
  servers_.emplace(server_key, std::move(server));
}

void HttpTransport::unserve(const Endpoint& at) {
  std::unique_ptr<Server> doomed;
  {
    std::lock_guard lock(mu_);
    const auto server_key = at.host + ":" + std::to_string(at.port);
    auto it = servers_.find(server_key);
    if (it == servers_.end()) return;
    bool empty = false;
    {
      std::lock_guard route_lock(it->second->mu);
      it->second->routes.erase(at.base_path);
      empty = it->second->routes.empty();
    }
    if (!empty) return;
    doomed = std::move(it->second);
    servers_.erase(it);
  }
  doomed->http.stop();
  if (doomed->thread.joinable()) doomed->thread.join();
}

}  // namespace interop::transport
