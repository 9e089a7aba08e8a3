#include "flvg/vendor_http.hpp"

#include <httplib.h>

#include "flvg/media_json.hpp"

namespace flvg::vendor {

using nlohmann::json;

struct VendorHttpServer::Impl {
    std::shared_ptr<VendorService> service;
    httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
    send_json(res, http_status(code), json{{"error", to_string(code)}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) throw VerifyError(ErrorCode::BadRequest, "request body must be a JSON object");
    return body;
}

// Runs a handler and turns library exceptions into API errors.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const VerifyError& e) {
        send_error(res, e.code(), e.what());
    } catch (const media::MediaError& e) {
        send_error(res, ErrorCode::MalformedMedia, e.what());
    } catch (const ProfileError& e) {
        send_error(res, ErrorCode::BadRequest, e.what());
    } catch (const json::exception& e) {
        send_error(res, ErrorCode::BadRequest, e.what());
    }
}

}  // namespace

VendorHttpServer::VendorHttpServer(std::shared_ptr<VendorService> service) : impl_(std::make_unique<Impl>()) {
    impl_->service = std::move(service);
    VendorService* svc = impl_->service.get();
    httplib::Server& server = impl_->server;

    server.Get("/v1/profile/declared", [svc](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, to_json(svc->declared()));
    });

    server.Post(R"(/v1/flv/(image|silence|voice|action)/challenge)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const FlvType type = flv_type_from_string(req.matches[1].str());
            const json body = parse_body(req);
            media::reject_unknown_fields(body, {"length"}, "challenge request");
            std::optional<int> length;
            if (body.contains("length")) {
                if (!body["length"].is_number_integer()) throw VerifyError(ErrorCode::BadRequest, "length must be an integer");
                length = body["length"].get<int>();
            }
            const ChallengeSession session = svc->challenge(type, length);
            send_json(res, 200,
                      json{{"session_id", session.session_id},
                           {"challenge", challenge_to_json(session.challenge)},
                           {"ttl_seconds", session.ttl.count()}});
        });
    });

    server.Post(R"(/v1/flv/(image|silence|voice|action)/verify)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const FlvType type = flv_type_from_string(req.matches[1].str());
            json body = json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.is_object()) throw VerifyError(ErrorCode::MalformedMedia, "request body must be a JSON object");
            media::reject_unknown_fields(body, {"session_id", "media", "reference_identity"}, "verify request");
            if (!body.contains("media") || !body.contains("reference_identity")) {
                throw VerifyError(ErrorCode::MalformedMedia, "verify request needs media and reference_identity");
            }
            const media::FacialMedia media = media::media_from_json(body["media"]);
            const media::IdentityVector reference = media::identity_from_json(body["reference_identity"]);
            std::optional<std::string> session_id;
            if (body.contains("session_id") && !body["session_id"].is_null()) {
                if (!body["session_id"].is_string()) throw VerifyError(ErrorCode::BadRequest, "session_id must be a string");
                session_id = body["session_id"].get<std::string>();
            }
            send_json(res, 200, to_json(svc->verify(type, media, reference, session_id)));
        });
    });
}

VendorHttpServer::~VendorHttpServer() { stop(); }

int VendorHttpServer::bind(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
    } else {
        port_ = impl_->server.bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    return port_;
}

void VendorHttpServer::serve() {
    if (port_ < 0) bind();
    impl_->server.listen_after_bind();
}

void VendorHttpServer::start() {
    if (port_ < 0) bind();
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void VendorHttpServer::stop() {
    impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

std::string VendorHttpServer::url() const { return "http://" + host_ + ":" + std::to_string(port_); }

}  // namespace flvg::vendor
