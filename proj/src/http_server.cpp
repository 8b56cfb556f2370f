#include "mbtgen/http_server.hpp"

#include <optional>
#include <string_view>

#include "httplib.h"

namespace mbtgen {
namespace {

std::optional<std::string> form_value(const httplib::Request& req, const char* key) {
  if (req.has_param(key)) return req.get_param_value(key);
  if (req.has_file(key)) return req.get_file_value(key).content;
  return std::nullopt;
}

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, "text/plain; charset=utf-8");
}

}  // namespace

HttpServer::HttpServer(SessionService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  // No SO_REUSEPORT: a second instance on a busy port must fail to bind.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  srv.set_default_headers({
      {"Access-Control-Allow-Origin", "*"},
      {"Access-Control-Allow-Methods", "POST, OPTIONS"},
      {"Access-Control-Allow-Headers", "Content-Type"},
      {"Access-Control-Max-Age", "600"},
  });

  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Post("/startrec", [this](const httplib::Request& req, httplib::Response& res) {
    const auto title = form_value(req, "title");
    reply(res, service_.handle_startrec(title ? std::optional<std::string_view>(*title) : std::nullopt));
  });
  srv.Post("/vertex", [this](const httplib::Request& req, httplib::Response& res) {
    const auto name = form_value(req, "name");
    reply(res, service_.handle_vertex(name ? std::optional<std::string_view>(*name) : std::nullopt));
  });
  srv.Post("/edge", [this](const httplib::Request& req, httplib::Response& res) {
    const auto name = form_value(req, "name");
    reply(res, service_.handle_edge(name ? std::optional<std::string_view>(*name) : std::nullopt));
  });
  srv.Post("/keepalive", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, service_.handle_keepalive());
  });
  srv.Post("/stoprec", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, service_.handle_stoprec());
  });

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "INTERNAL_ERROR";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what += std::string(": ") + e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(what, "text/plain; charset=utf-8");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace mbtgen
