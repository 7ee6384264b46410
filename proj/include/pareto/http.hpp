#pragma once

#include <memory>
#include <string>

namespace pareto {

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    /// Served under / when not empty (the built web UI).
    std::string static_dir;
    /// Session snapshots are kept here when not empty.
    std::string persist_dir;
};

/// The session API over HTTP.
class Server {
public:
    explicit Server(ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds the socket and returns the port.  Throws Io on failure.
    int bind();
    /// Serves until stop(); bind() must have succeeded.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pareto
