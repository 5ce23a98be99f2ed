#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "fourhammer/scenarios.hpp"

namespace fourhammer {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// TCP port; WebSocket listens on port + 1. 0 picks a free pair.
  unsigned short port = 7451;
  ScenarioKind scenario = ScenarioKind::full_game;
  std::uint64_t seed = 0;
  Registry registry;
};

/// TCP (newline-delimited JSON) and WebSocket front ends over one Session,
/// served by a single I/O thread.
class Server {
 public:
  /// Binds both ports; throws Error on bind failure.
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short tcp_port() const;
  unsigned short ws_port() const;

  /// Serve on the calling thread until stop().
  void run();
  /// Serve on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fourhammer
