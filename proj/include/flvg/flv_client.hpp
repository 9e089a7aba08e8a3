#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "flvg/vendor_service.hpp"

namespace flvg {

/// The connection could not be made or the reply was unusable.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChallengeTicket {
    std::string session_id;
    vendor::Challenge challenge;
    long ttl_seconds = 0;

    friend bool operator==(const ChallengeTicket&, const ChallengeTicket&) = default;
};

/// Black-box view of an FLV API. Implementations expose only what a real
/// vendor would: the public declaration, challenges and verification results.
/// API-level rejections surface as vendor::VerifyError, connectivity problems
/// as TransportError.
class FlvClient {
public:
    virtual ~FlvClient() = default;

    virtual vendor::DeclaredFeatures declared() = 0;
    virtual ChallengeTicket challenge(vendor::FlvType type, std::optional<int> length = std::nullopt) = 0;
    virtual vendor::VerificationOutcome verify(vendor::FlvType type, const media::FacialMedia& media,
                                               const media::IdentityVector& reference,
                                               const std::optional<std::string>& session_id = std::nullopt) = 0;
};

/// Calls a VendorService in the same process.
class LocalFlvClient final : public FlvClient {
public:
    explicit LocalFlvClient(std::shared_ptr<vendor::VendorService> service) : service_(std::move(service)) {}

    vendor::DeclaredFeatures declared() override;
    ChallengeTicket challenge(vendor::FlvType type, std::optional<int> length) override;
    vendor::VerificationOutcome verify(vendor::FlvType type, const media::FacialMedia& media, const media::IdentityVector& reference,
                                       const std::optional<std::string>& session_id) override;

private:
    std::shared_ptr<vendor::VendorService> service_;
};

/// Talks to the vendor HTTP service. Safe to use from several threads.
class HttpFlvClient final : public FlvClient {
public:
    /// `base_url` like "http://127.0.0.1:8080".
    explicit HttpFlvClient(std::string base_url, int timeout_seconds = 30);

    vendor::DeclaredFeatures declared() override;
    ChallengeTicket challenge(vendor::FlvType type, std::optional<int> length) override;
    vendor::VerificationOutcome verify(vendor::FlvType type, const media::FacialMedia& media, const media::IdentityVector& reference,
                                       const std::optional<std::string>& session_id) override;

private:
    std::string base_url_;
    int timeout_seconds_;
};

}  // namespace flvg
