#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "flvg/vendor_sim.hpp"

namespace flvg::vendor {

/// A running vendor: the profile plus the session store. The store is the only
/// mutable state and is guarded for concurrent challenge/verify calls.
///
/// Challenge seeds are derived from (seed, issue counter), so a fresh service
/// fed the same sequence of challenge requests hands out the same challenges.
class VendorService {
public:
    using ClockFn = std::function<Clock::time_point()>;

    explicit VendorService(VendorProfile profile, std::uint64_t seed = 0, ClockFn clock = {});

    const std::string& name() const { return profile_.name; }
    DeclaredFeatures declared() const { return profile_.declared(); }

    ChallengeSession challenge(FlvType type, std::optional<int> length = std::nullopt);

    /// Sessions are single use: a verify call consumes the session whatever the outcome.
    VerificationOutcome verify(FlvType type, const media::FacialMedia& media, const media::IdentityVector& reference,
                               const std::optional<std::string>& session_id = std::nullopt);

    std::size_t open_sessions() const;

private:
    Clock::time_point now() const { return clock_ ? clock_() : Clock::now(); }
    void purge_locked(Clock::time_point now);

    const VendorProfile profile_;
    const std::uint64_t seed_;
    const ClockFn clock_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, ChallengeSession> sessions_;
    std::uint64_t issued_ = 0;
};

}  // namespace flvg::vendor
