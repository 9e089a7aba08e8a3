#include "flvg/vendor_profile.hpp"

#include <algorithm>

#include "flvg/media_json.hpp"

namespace flvg::vendor {

using nlohmann::json;

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

std::optional<IntRange> range_from_json(const json& j, const char* what) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw ProfileError(std::string(what) + " must be a [lo, hi] integer pair or null");
    }
    return IntRange{j[0].get<int>(), j[1].get<int>()};
}

json range_to_json(const std::optional<IntRange>& r) { return r ? json::array({r->lo, r->hi}) : json(nullptr); }

std::set<FlvType> types_from_json(const json& j) {
    if (!j.is_array()) throw ProfileError("supported_types must be an array");
    std::set<FlvType> out;
    for (const json& t : j) out.insert(flv_type_from_string(t.get<std::string>()));
    return out;
}

json types_to_json(const std::set<FlvType>& types) {
    json out = json::array();
    for (FlvType t : types) out.push_back(to_string(t));
    return out;
}

std::vector<Action> actions_from_json(const json& j) {
    if (!j.is_array()) throw ProfileError("action_set must be an array");
    std::set<Action> unique;
    for (const json& a : j) unique.insert(action_from_string(a.get<std::string>()));
    return {unique.begin(), unique.end()};
}

json actions_to_json(const std::vector<Action>& actions) {
    json out = json::array();
    for (Action a : actions) out.push_back(to_string(a));
    return out;
}

std::optional<int> opt_int(const json& j, const char* what) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_number_integer()) throw ProfileError(std::string(what) + " must be an integer or null");
    return j.get<int>();
}

void apply_declared(DeclaredFeatures& d, const json& j) {
    media::reject_unknown_fields(j,
                                 {"name", "supported_types", "voice_code_length_range", "default_code_length", "action_set",
                                  "action_length_range", "lip_language", "anti_deepfake", "replay_detection"},
                                 "declared");
    if (j.contains("name")) d.name = j["name"].get<std::string>();
    if (j.contains("supported_types")) d.supported_types = types_from_json(j["supported_types"]);
    if (j.contains("voice_code_length_range")) d.voice_code_length_range = range_from_json(j["voice_code_length_range"], "voice_code_length_range");
    if (j.contains("default_code_length")) d.default_code_length = opt_int(j["default_code_length"], "default_code_length");
    if (j.contains("action_set")) d.action_set = actions_from_json(j["action_set"]);
    if (j.contains("action_length_range")) d.action_length_range = range_from_json(j["action_length_range"], "action_length_range");
    if (j.contains("lip_language")) d.lip_language = lip_language_from_string(j["lip_language"].get<std::string>());
    if (j.contains("anti_deepfake")) d.anti_deepfake = j["anti_deepfake"].get<bool>();
    if (j.contains("replay_detection")) d.replay_detection = j["replay_detection"].get<bool>();
}

DeclaredFeatures truthful_declaration(const VendorProfile& p) {
    return {p.name,         p.supported_types,     p.voice_code_length_range, p.default_code_length, p.action_set,
            p.action_length_range, p.lip_language, p.anti_deepfake,           p.replay_detection};
}

VendorProfile make_preset(std::string name, std::set<FlvType> types) {
    VendorProfile p;
    p.name = std::move(name);
    p.supported_types = std::move(types);
    p.replay_detection = true;
    return p;
}

std::vector<VendorProfile> build_presets() {
    using enum Action;
    constexpr FlvType Image = FlvType::Image, Silence = FlvType::Silence, Voice = FlvType::Voice;
    std::vector<VendorProfile> presets;

    VendorProfile bd = make_preset("BD", {Image, Silence, Voice, FlvType::Action});
    bd.voice_code_length_range = IntRange{3, 6};
    bd.default_code_length = 3;
    bd.action_set = {Blink, TurnLeft, TurnRight, LookUp, ChinDown, TurnRightAndLeft};
    bd.action_length_range = IntRange{1, 3};
    bd.lip_language = LipLanguage::None;
    bd.anti_deepfake = true;
    // Documents lip language detection that is not actually enforced.
    DeclaredFeatures bd_declared = truthful_declaration(bd);
    bd_declared.lip_language = LipLanguage::FullMatch;
    bd.declared_override = bd_declared;
    presets.push_back(bd);

    VendorProfile tc = make_preset("TC", {Image, Silence, Voice, FlvType::Action});
    tc.voice_code_length_range = IntRange{1, 6};
    tc.default_code_length = 4;
    tc.action_set = {Blink, OpenMouth};
    tc.action_length_range = IntRange{1, 2};
    tc.lip_language = LipLanguage::MovementOnly;
    tc.anti_deepfake = true;
    presets.push_back(tc);

    VendorProfile hw = make_preset("HW", {Image, FlvType::Action});
    hw.action_set = {TurnLeft, TurnRight, Blink, OpenMouth};
    std::sort(hw.action_set.begin(), hw.action_set.end());
    hw.action_length_range = IntRange{1, 4};
    presets.push_back(hw);

    VendorProfile cw = make_preset("CW", {Image, Silence, Voice});
    cw.voice_code_length_range = IntRange{4, 6};
    cw.default_code_length = 4;
    cw.lip_language = LipLanguage::FullMatch;
    presets.push_back(cw);

    VendorProfile st = make_preset("ST", {Silence, Voice});
    st.voice_code_length_range = IntRange{4, 4};
    st.default_code_length = 4;
    presets.push_back(st);

    VendorProfile ift = make_preset("iFT", {Image, Silence});
    presets.push_back(ift);

    for (const auto& p : presets) validate(p);
    return presets;
}

}  // namespace

DeclaredFeatures VendorProfile::declared() const { return declared_override ? *declared_override : truthful_declaration(*this); }

void validate(const VendorProfile& p) {
    if (p.name.empty()) throw ProfileError("profile needs a name");
    if (p.supported_types.empty()) throw ProfileError(p.name + ": no supported FLV type");
    const Thresholds& t = p.thresholds;
    for (double v : {t.replay, t.deepfake, t.face_match, t.quality, t.lip_movement}) {
        if (!in_unit(v)) throw ProfileError(p.name + ": thresholds must lie in [0,1]");
    }
    if (p.deepfake_band_upper && !(*p.deepfake_band_upper >= t.deepfake && *p.deepfake_band_upper <= 1.0)) {
        throw ProfileError(p.name + ": deepfake band upper edge must lie in [threshold, 1]");
    }
    if (p.supports(FlvType::Voice)) {
        if (!p.voice_code_length_range || !p.default_code_length) throw ProfileError(p.name + ": voice FLV needs code length settings");
        const IntRange& r = *p.voice_code_length_range;
        if (r.lo < 1 || r.hi < r.lo) throw ProfileError(p.name + ": invalid voice code length range");
        if (!r.contains(*p.default_code_length)) throw ProfileError(p.name + ": default code length outside its range");
    }
    const bool action = p.supports(FlvType::Action);
    if (action != !p.action_set.empty()) throw ProfileError(p.name + ": action_set must be non-empty iff action FLV is supported");
    if (action) {
        if (!p.action_length_range) throw ProfileError(p.name + ": action FLV needs an action length range");
        const IntRange& r = *p.action_length_range;
        if (r.lo < 1 || r.hi < r.lo) throw ProfileError(p.name + ": invalid action length range");
    }
    if (p.session_ttl.count() <= 0) throw ProfileError(p.name + ": session ttl must be positive");
    if (p.capture.min_brightness > p.capture.max_brightness) throw ProfileError(p.name + ": empty capture brightness window");
}

VendorProfile default_profile() {
    VendorProfile p = make_preset("default", {FlvType::Image, FlvType::Silence, FlvType::Voice, FlvType::Action});
    p.voice_code_length_range = IntRange{3, 6};
    p.default_code_length = 4;
    p.action_set = {std::begin(kAllActions), std::end(kAllActions)};
    p.action_length_range = IntRange{1, 4};
    p.lip_language = LipLanguage::FullMatch;
    p.coherence_detection = true;
    p.anti_deepfake = true;
    p.replay_detection = true;
    return p;
}

const std::vector<VendorProfile>& vendor_presets() {
    static const std::vector<VendorProfile> presets = build_presets();
    return presets;
}

const VendorProfile& vendor_preset(std::string_view name) {
    for (const auto& p : vendor_presets()) {
        if (p.name == name) return p;
    }
    throw ProfileError("unknown vendor preset '" + std::string(name) + "'");
}

const char* to_string(FlvType t) {
    switch (t) {
        case FlvType::Image: return "image";
        case FlvType::Silence: return "silence";
        case FlvType::Voice: return "voice";
        case FlvType::Action: return "action";
    }
    return "?";
}

const char* to_string(Action a) {
    switch (a) {
        case Action::Blink: return "Blink";
        case Action::OpenMouth: return "OpenMouth";
        case Action::TurnLeft: return "TurnLeft";
        case Action::TurnRight: return "TurnRight";
        case Action::LookUp: return "LookUp";
        case Action::ChinDown: return "ChinDown";
        case Action::TurnRightAndLeft: return "TurnRightAndLeft";
    }
    return "?";
}

const char* to_string(LipLanguage l) {
    switch (l) {
        case LipLanguage::None: return "None";
        case LipLanguage::MovementOnly: return "MovementOnly";
        case LipLanguage::FullMatch: return "FullMatch";
    }
    return "?";
}

FlvType flv_type_from_string(std::string_view s) {
    for (FlvType t : kAllFlvTypes) {
        if (s == to_string(t)) return t;
    }
    throw ProfileError("unknown FLV type '" + std::string(s) + "'");
}

Action action_from_string(std::string_view s) {
    for (Action a : kAllActions) {
        if (s == to_string(a)) return a;
    }
    throw ProfileError("unknown action '" + std::string(s) + "'");
}

LipLanguage lip_language_from_string(std::string_view s) {
    for (LipLanguage l : {LipLanguage::None, LipLanguage::MovementOnly, LipLanguage::FullMatch}) {
        if (s == to_string(l)) return l;
    }
    throw ProfileError("unknown lip language level '" + std::string(s) + "'");
}

json to_json(const DeclaredFeatures& d) {
    return json{{"name", d.name},
                {"supported_types", types_to_json(d.supported_types)},
                {"voice_code_length_range", range_to_json(d.voice_code_length_range)},
                {"default_code_length", d.default_code_length ? json(*d.default_code_length) : json(nullptr)},
                {"action_set", actions_to_json(d.action_set)},
                {"action_length_range", range_to_json(d.action_length_range)},
                {"lip_language", to_string(d.lip_language)},
                {"anti_deepfake", d.anti_deepfake},
                {"replay_detection", d.replay_detection}};
}

DeclaredFeatures declared_from_json(const json& j) {
    if (!j.is_object()) throw ProfileError("declared features must be an object");
    DeclaredFeatures d;
    try {
        apply_declared(d, j);
    } catch (const json::exception& e) {
        throw ProfileError(std::string("declared features: ") + e.what());
    } catch (const media::MediaError& e) {
        throw ProfileError(e.what());
    }
    return d;
}

json to_json(const VendorProfile& p) {
    json j{{"name", p.name},
           {"supported_types", types_to_json(p.supported_types)},
           {"voice_code_length_range", range_to_json(p.voice_code_length_range)},
           {"default_code_length", p.default_code_length ? json(*p.default_code_length) : json(nullptr)},
           {"action_set", actions_to_json(p.action_set)},
           {"action_length_range", range_to_json(p.action_length_range)},
           {"lip_language", to_string(p.lip_language)},
           {"coherence_detection", p.coherence_detection},
           {"anti_deepfake", p.anti_deepfake},
           {"replay_detection", p.replay_detection},
           {"thresholds",
            {{"replay", p.thresholds.replay},
             {"deepfake", p.thresholds.deepfake},
             {"face_match", p.thresholds.face_match},
             {"quality", p.thresholds.quality},
             {"lip_movement", p.thresholds.lip_movement}}},
           {"deepfake_band_upper", p.deepfake_band_upper ? json(*p.deepfake_band_upper) : json(nullptr)},
           {"capture_envelope",
            {{"min_brightness", p.capture.min_brightness},
             {"max_brightness", p.capture.max_brightness},
             {"max_abs_posture", p.capture.max_abs_posture}}},
           {"session_ttl_seconds", p.session_ttl.count()}};
    if (p.declared_override) j["declared"] = to_json(*p.declared_override);
    return j;
}

VendorProfile profile_from_json(const json& j) {
    if (!j.is_object()) throw ProfileError("profile document must be an object");
    try {
        media::reject_unknown_fields(j,
                                     {"preset", "name", "supported_types", "voice_code_length_range", "default_code_length",
                                      "action_set", "action_length_range", "lip_language", "coherence_detection", "anti_deepfake",
                                      "replay_detection", "thresholds", "deepfake_band_upper", "capture_envelope",
                                      "session_ttl_seconds", "declared"},
                                     "profile");
        VendorProfile p;
        if (j.contains("preset")) {
            const auto preset = j["preset"].get<std::string>();
            p = preset == "default" ? default_profile() : vendor_preset(preset);
        } else if (!j.contains("name") || !j.contains("supported_types")) {
            throw ProfileError("profile needs either a preset or name + supported_types");
        }
        if (j.contains("name")) p.name = j["name"].get<std::string>();
        if (j.contains("supported_types")) p.supported_types = types_from_json(j["supported_types"]);
        if (j.contains("voice_code_length_range")) p.voice_code_length_range = range_from_json(j["voice_code_length_range"], "voice_code_length_range");
        if (j.contains("default_code_length")) p.default_code_length = opt_int(j["default_code_length"], "default_code_length");
        if (j.contains("action_set")) p.action_set = actions_from_json(j["action_set"]);
        if (j.contains("action_length_range")) p.action_length_range = range_from_json(j["action_length_range"], "action_length_range");
        if (j.contains("lip_language")) p.lip_language = lip_language_from_string(j["lip_language"].get<std::string>());
        if (j.contains("coherence_detection")) p.coherence_detection = j["coherence_detection"].get<bool>();
        if (j.contains("anti_deepfake")) p.anti_deepfake = j["anti_deepfake"].get<bool>();
        if (j.contains("replay_detection")) p.replay_detection = j["replay_detection"].get<bool>();
        if (j.contains("thresholds")) {
            const json& t = j["thresholds"];
            media::reject_unknown_fields(t, {"replay", "deepfake", "face_match", "quality", "lip_movement"}, "thresholds");
            if (t.contains("replay")) p.thresholds.replay = t["replay"].get<double>();
            if (t.contains("deepfake")) p.thresholds.deepfake = t["deepfake"].get<double>();
            if (t.contains("face_match")) p.thresholds.face_match = t["face_match"].get<double>();
            if (t.contains("quality")) p.thresholds.quality = t["quality"].get<double>();
            if (t.contains("lip_movement")) p.thresholds.lip_movement = t["lip_movement"].get<double>();
        }
        if (j.contains("deepfake_band_upper")) {
            const json& b = j["deepfake_band_upper"];
            p.deepfake_band_upper = b.is_null() ? std::nullopt : std::optional<double>(b.get<double>());
        }
        if (j.contains("capture_envelope")) {
            const json& c = j["capture_envelope"];
            media::reject_unknown_fields(c, {"min_brightness", "max_brightness", "max_abs_posture"}, "capture_envelope");
            if (c.contains("min_brightness")) p.capture.min_brightness = c["min_brightness"].get<double>();
            if (c.contains("max_brightness")) p.capture.max_brightness = c["max_brightness"].get<double>();
            if (c.contains("max_abs_posture")) p.capture.max_abs_posture = c["max_abs_posture"].get<double>();
        }
        if (j.contains("session_ttl_seconds")) p.session_ttl = std::chrono::seconds(j["session_ttl_seconds"].get<long>());
        if (j.contains("declared")) {
            DeclaredFeatures d = p.declared_override ? *p.declared_override : truthful_declaration(p);
            apply_declared(d, j["declared"]);
            p.declared_override = d;
        }
        validate(p);
        return p;
    } catch (const json::exception& e) {
        throw ProfileError(std::string("profile: ") + e.what());
    } catch (const media::MediaError& e) {
        throw ProfileError(e.what());
    }
}

}  // namespace flvg::vendor
