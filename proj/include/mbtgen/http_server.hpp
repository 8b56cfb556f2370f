#pragma once

#include <memory>
#include <string>

#include "mbtgen/session_service.hpp"

namespace httplib {
class Server;
}

namespace mbtgen {

/// HTTP/1.1 front end for SessionService.
///
/// POST /startrec (title), /vertex (name), /edge (name), /keepalive, /stoprec.
/// Parameters may arrive url-encoded (query or body) or as multipart form
/// data. Every response carries permissive CORS headers and OPTIONS
/// preflights are answered so a page on another origin can post events.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket. Port 0 picks a free port. Returns the bound
  /// port, or -1 when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  bool listen();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace mbtgen
