#include "flvg/vendor_service.hpp"

#include <vector>

#include "flvg/rng.hpp"

namespace flvg::vendor {

VendorService::VendorService(VendorProfile profile, std::uint64_t seed, ClockFn clock)
    : profile_(std::move(profile)), seed_(seed), clock_(std::move(clock)) {
    validate(profile_);
}

void VendorService::purge_locked(Clock::time_point now) {
    // Expired sessions stay around for one extra ttl so late callers get 410 rather than 404.
    std::erase_if(sessions_, [now](const auto& entry) { return now >= entry.second.issued_at + 2 * entry.second.ttl; });
}

ChallengeSession VendorService::challenge(FlvType type, std::optional<int> length) {
    const Clock::time_point t = now();
    std::lock_guard lock(mutex_);
    purge_locked(t);
    ChallengeSession session;
    do {
        session = issue_challenge(profile_, type, mix_seed(seed_, issued_++), length, t);
    } while (sessions_.contains(session.session_id));
    sessions_.emplace(session.session_id, session);
    return session;
}

VerificationOutcome VendorService::verify(FlvType type, const media::FacialMedia& media, const media::IdentityVector& reference,
                                          const std::optional<std::string>& session_id) {
    if (!profile_.supports(type)) throw VerifyError(ErrorCode::UnsupportedType, profile_.name + " does not offer " + to_string(type) + " FLV");
    const Clock::time_point t = now();
    if (type == FlvType::Image || type == FlvType::Silence) return vendor::verify(profile_, type, media, reference, nullptr, t);

    if (!session_id) throw VerifyError(ErrorCode::UnknownSession, "session_id is required");
    std::optional<ChallengeSession> session;
    {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(*session_id);
        if (it == sessions_.end()) throw VerifyError(ErrorCode::UnknownSession, "unknown session " + *session_id);
        session = std::move(it->second);
        sessions_.erase(it);
    }
    return vendor::verify(profile_, type, media, reference, &*session, t);
}

std::size_t VendorService::open_sessions() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

}  // namespace flvg::vendor
