#include "fourhammer/server.hpp"

#include <deque>
#include <map>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "fourhammer/protocol.hpp"

namespace fourhammer {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

class Hub;

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(Hub& hub, int id) : hub_(hub), id_(id) {}
  virtual ~Connection() = default;
  virtual void start() = 0;
  virtual void send(std::string text) = 0;
  virtual void close() = 0;
  int id() const { return id_; }

 protected:
  Hub& hub_;
  int id_;
};

class Hub {
 public:
  Hub(ScenarioKind scenario, std::uint64_t seed, Registry registry)
      : session_(scenario, seed, std::move(registry)) {}

  int next_id() { return ++last_id_; }
  void join(const std::shared_ptr<Connection>& c) { clients_[c->id()] = c; }
  void leave(int id) {
    clients_.erase(id);
    session_.disconnect(id);
  }

  void on_message(Connection& from, std::string_view line) {
    auto out = session_.handle(from.id(), line);
    from.send(out.reply.dump());
    for (const auto& b : out.broadcasts) {
      const std::string text = b.dump();
      for (auto& [id, c] : clients_) c->send(text);
    }
  }

  void close_all() {
    auto clients = clients_;
    for (auto& [id, c] : clients) c->close();
    clients_.clear();
  }

 private:
  Session session_;
  std::map<int, std::shared_ptr<Connection>> clients_;
  int last_id_ = 0;
};

class TcpConnection : public Connection {
 public:
  TcpConnection(Hub& hub, int id, tcp::socket socket) : Connection(hub, id), socket_(std::move(socket)) {}

  void start() override { read(); }

  void send(std::string text) override {
    text.push_back('\n');
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  void close() override {
    beast::error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
    socket_.close(ec);
  }

 private:
  void read() {
    asio::async_read_until(socket_, buffer_, '\n',
                           [self = shared_from_this(), this](beast::error_code ec, std::size_t n) {
                             if (ec) {
                               hub_.leave(id_);
                               return;
                             }
                             std::string line(asio::buffers_begin(buffer_.data()),
                                              asio::buffers_begin(buffer_.data()) +
                                                  static_cast<std::ptrdiff_t>(n) - 1);
                             buffer_.consume(n);
                             if (!line.empty() && line.back() == '\r') line.pop_back();
                             if (!line.empty()) hub_.on_message(*this, line);
                             read();
                           });
  }

  void write() {
    asio::async_write(socket_, asio::buffer(queue_.front()),
                      [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        queue_.pop_front();
                        if (!queue_.empty()) write();
                      });
  }

  tcp::socket socket_;
  asio::streambuf buffer_;
  std::deque<std::string> queue_;
};

class WsConnection : public Connection {
 public:
  WsConnection(Hub& hub, int id, tcp::socket socket) : Connection(hub, id), ws_(std::move(socket)) {}

  void start() override {
    ws_.text(true);
    ws_.async_accept([self = shared_from_this(), this](beast::error_code ec) {
      if (ec) {
        hub_.leave(id_);
        return;
      }
      open_ = true;
      hub_.join(shared_from_this());
      read();
    });
  }

  void send(std::string text) override {
    if (!open_) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  void close() override {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
      if (ec) {
        open_ = false;
        hub_.leave(id_);
        return;
      }
      const std::string text = beast::buffers_to_string(buffer_.data());
      buffer_.consume(buffer_.size());
      hub_.on_message(*this, text);
      read();
    });
  }

  void write() {
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
                      if (ec) return;
                      queue_.pop_front();
                      if (!queue_.empty()) write();
                    });
  }

  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool open_ = false;
};

}  // namespace

struct Server::Impl {
  asio::io_context io{1};
  Hub hub;
  tcp::acceptor tcp_acceptor{io};
  tcp::acceptor ws_acceptor{io};
  std::thread thread;

  explicit Impl(ServerOptions& o) : hub(o.scenario, o.seed, std::move(o.registry)) {
    const auto address = asio::ip::make_address(o.host);
    for (int attempt = 0; attempt < 32; ++attempt) {
      beast::error_code ec;
      open(tcp_acceptor, {address, o.port}, ec);
      if (!ec) {
        const auto port = tcp_acceptor.local_endpoint().port();
        open(ws_acceptor, {address, static_cast<unsigned short>(port + 1)}, ec);
        if (!ec) break;
        tcp_acceptor.close();
      }
      if (o.port != 0 || attempt == 31) {
        throw Error("cannot bind " + o.host + ":" + std::to_string(o.port) + ": " + ec.message());
      }
    }
    accept_tcp();
    accept_ws();
  }

  static void open(tcp::acceptor& a, const tcp::endpoint& ep, beast::error_code& ec) {
    a.open(ep.protocol(), ec);
    if (ec) return;
    a.set_option(asio::socket_base::reuse_address(true), ec);
    if (!ec) a.bind(ep, ec);
    if (!ec) a.listen(asio::socket_base::max_listen_connections, ec);
    if (ec) {
      beast::error_code ignored;
      a.close(ignored);
    }
  }

  void accept_tcp() {
    tcp_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      socket.set_option(tcp::no_delay(true), ec);
      auto c = std::make_shared<TcpConnection>(hub, hub.next_id(), std::move(socket));
      hub.join(c);
      c->start();
      accept_tcp();
    });
  }

  void accept_ws() {
    ws_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<WsConnection>(hub, hub.next_id(), std::move(socket))->start();
      accept_ws();
    });
  }

  void shutdown() {
    beast::error_code ec;
    tcp_acceptor.close(ec);
    ws_acceptor.close(ec);
    hub.close_all();
  }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(options)) {}

Server::~Server() { stop(); }

unsigned short Server::tcp_port() const { return impl_->tcp_acceptor.local_endpoint().port(); }
unsigned short Server::ws_port() const { return impl_->ws_acceptor.local_endpoint().port(); }

void Server::run() { impl_->io.run(); }

void Server::start() {
  impl_->thread = std::thread([this] { impl_->io.run(); });
}

void Server::stop() {
  if (!impl_) return;
  asio::post(impl_->io, [this] { impl_->shutdown(); });
  impl_->io.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace fourhammer
