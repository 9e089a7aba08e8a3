#include "flvg/flv_client.hpp"

#include <httplib.h>

#include "flvg/media_json.hpp"

namespace flvg {

using nlohmann::json;
using vendor::ErrorCode;
using vendor::VerifyError;

vendor::DeclaredFeatures LocalFlvClient::declared() { return service_->declared(); }

ChallengeTicket LocalFlvClient::challenge(vendor::FlvType type, std::optional<int> length) {
    const vendor::ChallengeSession s = service_->challenge(type, length);
    return {s.session_id, s.challenge, static_cast<long>(s.ttl.count())};
}

vendor::VerificationOutcome LocalFlvClient::verify(vendor::FlvType type, const media::FacialMedia& media,
                                                   const media::IdentityVector& reference, const std::optional<std::string>& session_id) {
    return service_->verify(type, media, reference, session_id);
}

namespace {

ErrorCode code_from_status(int status, const json& body) {
    if (body.is_object() && body.contains("error") && body["error"].is_string()) {
        const auto name = body["error"].get<std::string>();
        for (ErrorCode c : {ErrorCode::MalformedMedia, ErrorCode::UnknownSession, ErrorCode::ExpiredSession, ErrorCode::UnsupportedType,
                            ErrorCode::BadRequest}) {
            if (name == vendor::to_string(c)) return c;
        }
    }
    switch (status) {
        case 404: return ErrorCode::UnknownSession;
        case 410: return ErrorCode::ExpiredSession;
        case 422: return ErrorCode::UnsupportedType;
        default: return ErrorCode::BadRequest;
    }
}

json call(const std::string& base_url, int timeout, const std::string& method, const std::string& path, const json* body) {
    httplib::Client client(base_url);
    client.set_connection_timeout(timeout, 0);
    client.set_read_timeout(timeout, 0);
    client.set_write_timeout(timeout, 0);
    httplib::Result res = method == "GET" ? client.Get(path) : client.Post(path, body ? body->dump() : std::string("{}"), "application/json");
    if (!res) throw TransportError(method + " " + base_url + path + " failed: " + httplib::to_string(res.error()));
    json reply = json::parse(res->body, nullptr, false);
    if (res->status != 200) {
        const std::string message = reply.is_object() && reply.contains("message") ? reply["message"].get<std::string>() : res->body;
        throw VerifyError(code_from_status(res->status, reply), message);
    }
    if (reply.is_discarded()) throw TransportError(method + " " + path + ": reply is not JSON");
    return reply;
}

}  // namespace

HttpFlvClient::HttpFlvClient(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

vendor::DeclaredFeatures HttpFlvClient::declared() {
    const json reply = call(base_url_, timeout_seconds_, "GET", "/v1/profile/declared", nullptr);
    try {
        return vendor::declared_from_json(reply);
    } catch (const std::exception& e) {
        throw TransportError(std::string("declared features reply: ") + e.what());
    }
}

ChallengeTicket HttpFlvClient::challenge(vendor::FlvType type, std::optional<int> length) {
    json body = json::object();
    if (length) body["length"] = *length;
    const json reply = call(base_url_, timeout_seconds_, "POST", std::string("/v1/flv/") + vendor::to_string(type) + "/challenge", &body);
    try {
        return {reply.at("session_id").get<std::string>(), vendor::challenge_from_json(reply.at("challenge"), type),
                reply.at("ttl_seconds").get<long>()};
    } catch (const json::exception& e) {
        throw TransportError(std::string("challenge reply: ") + e.what());
    }
}

vendor::VerificationOutcome HttpFlvClient::verify(vendor::FlvType type, const media::FacialMedia& media, const media::IdentityVector& reference,
                                                  const std::optional<std::string>& session_id) {
    json body{{"media", media::to_json(media)}, {"reference_identity", media::to_json(reference)}};
    if (session_id) body["session_id"] = *session_id;
    const json reply = call(base_url_, timeout_seconds_, "POST", std::string("/v1/flv/") + vendor::to_string(type) + "/verify", &body);
    try {
        return vendor::outcome_from_json(reply);
    } catch (const json::exception& e) {
        throw TransportError(std::string("verify reply: ") + e.what());
    }
}

}  // namespace flvg
