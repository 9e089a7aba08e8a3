#pragma once

#include <initializer_list>
#include <string_view>

#include <nlohmann/json.hpp>

#include "flvg/media.hpp"

namespace flvg::media {

/// Version tag written into every serialized media document.
inline constexpr int kMediaFormatVersion = 1;

nlohmann::json to_json(const IdentityVector& identity);
IdentityVector identity_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Frame& frame);
Frame frame_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FacialMedia& media);

/// Strict parse: unknown fields, missing fields, wrong types and invariant
/// violations all raise MediaError.
FacialMedia media_from_json(const nlohmann::json& j);

SceneTag scene_tag_from_string(std::string_view s);
SynthesisCategory category_from_string(std::string_view s);

/// Throws MediaError naming the first key of `j` not in `allowed`.
void reject_unknown_fields(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, std::string_view where);

}  // namespace flvg::media
