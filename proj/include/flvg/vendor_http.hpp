#pragma once

#include <memory>
#include <string>
#include <thread>

#include "flvg/vendor_service.hpp"

namespace flvg::vendor {

/// HTTP/JSON front end of a VendorService, versioned under /v1:
///
///   POST /v1/flv/{image|silence}/verify      {media, reference_identity}
///   POST /v1/flv/{voice|action}/challenge    {} or {"length": n}
///   POST /v1/flv/{voice|action}/verify       {session_id, media, reference_identity}
///   GET  /v1/profile/declared
///
/// Errors come back as {"error": code, "message": text} with status 400
/// (malformed), 404 (unknown session), 410 (expired) or 422 (unsupported type).
class VendorHttpServer {
public:
    explicit VendorHttpServer(std::shared_ptr<VendorService> service);
    ~VendorHttpServer();

    VendorHttpServer(const VendorHttpServer&) = delete;
    VendorHttpServer& operator=(const VendorHttpServer&) = delete;

    /// Binds to `port` (0 picks a free one) and returns the bound port.
    int bind(const std::string& host = "127.0.0.1", int port = 0);

    /// Serves on the calling thread until stop().
    void serve();

    /// Serves on a background thread; returns once the server accepts requests.
    void start();
    void stop();

    int port() const { return port_; }
    std::string url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::string host_ = "127.0.0.1";
    int port_ = -1;
    std::thread thread_;
};

}  // namespace flvg::vendor
