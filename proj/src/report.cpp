#include "flvg/report.hpp"

#include <algorithm>
#include <cstdio>

namespace flvg::harness {

using nlohmann::json;

namespace {

std::string table(const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> width;
    for (const auto& row : cells) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::string cell = row[c];
            if (c == 0) {
                cell.resize(width[c], ' ');
            } else {
                cell.insert(0, width[c] - cell.size(), ' ');
            }
            line += (c ? "  " : "") + cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string pct(const json& v) { return analysis::format_rate(v.get<double>()); }

std::string p_cell(const json& test) {
    std::string s = analysis::format_p(test.at("p").get<double>());
    if (test.at("significant_01").get<bool>()) return s + " **";
    if (test.at("significant_05").get<bool>()) return s + " *";
    return s;
}

}  // namespace

json to_json(const CampaignReport& r) {
    json plans = json::array();
    for (const auto& p : r.plans) plans.push_back(planner::to_json(p));
    json rows = json::array();
    for (const auto& row : r.rows) {
        json j{{"label", row.label}, {"method", row.method}};
        j["metrics"] = row.metrics ? analysis::to_json(*row.metrics) : json("MISSING");
        if (!row.error.empty()) j["error"] = row.error;
        rows.push_back(std::move(j));
    }
    json comparisons = json::array();
    for (const auto& c : r.comparisons) {
        json j{{"label", c.label}};
        j["comparison"] = c.comparison ? analysis::to_json(*c.comparison) : json("MISSING");
        if (!c.error.empty()) j["error"] = c.error;
        comparisons.push_back(std::move(j));
    }
    return json{{"kind", r.kind},
                {"target", r.target},
                {"flv_type", r.flv_type},
                {"intelligence", r.intelligence ? intel::to_json(*r.intelligence) : json(nullptr)},
                {"plans", std::move(plans)},
                {"metrics", std::move(rows)},
                {"comparisons", std::move(comparisons)},
                {"invariant_violations", r.invariant_violations},
                {"status", {{"partial", r.partial}, {"error", r.error}}},
                {"run", {{"seed", r.seed}, {"config_digest", r.config_digest}, {"elapsed_seconds", r.elapsed_seconds}}}};
}

std::string render_text(const json& r) {
    std::string out;
    out += "Experiment: " + r.value("kind", std::string("?")) + "\n";
    out += "Target:     " + r.value("target", std::string("?")) + "\n";
    out += "FLV type:   " + r.value("flv_type", std::string("?")) + "\n";

    if (r.contains("intelligence") && r["intelligence"].is_object()) {
        const json& in = r["intelligence"]["inferred"];
        out += "\nInferred defenses\n";
        std::vector<std::vector<std::string>> cells{{"Feature", "Verdict"}};
        for (const char* f : {"coherence", "lip_language", "presentation_attack", "anti_deepfake"}) cells.push_back({f, in.at(f).get<std::string>()});
        out += table(cells);
        const json& probes = r["intelligence"]["probes"];
        if (!probes.empty()) {
            std::vector<std::vector<std::string>> pc{{"Probe", "Variant", "Bypassed", "Rate"}};
            for (const json& p : probes) {
                for (const json& v : p.at("rates")) {
                    pc.push_back({p.at("feature").get<std::string>(), v.at("label").get<std::string>(),
                                  std::to_string(v.at("bypassed").get<std::size_t>()) + "/" + std::to_string(v.at("submitted").get<std::size_t>()),
                                  pct(v.at("rate"))});
                }
            }
            out += "\n" + table(pc);
        }
        for (const json& c : r["intelligence"]["contradictions"]) {
            out += "Contradiction: " + c.at("feature").get<std::string>() + " declared " + c.at("declared").get<std::string>() + ", inferred " +
                   c.at("inferred").get<std::string>() + "\n";
        }
    }

    if (r.contains("plans") && !r["plans"].empty()) {
        out += "\nAttack plans\n";
        for (const json& p : r["plans"]) {
            out += "  " + p.at("flv_type").get<std::string>() + ": " + p.at("method").get<std::string>() + ", " + p.at("driving_recipe").get<std::string>() +
                   ", " + p.at("stages").at("kind").get<std::string>() + "\n";
            for (const json& e : p.at("rationale")) out += "    " + e.at("fact").get<std::string>() + " -> " + e.at("decision").get<std::string>() + "\n";
        }
    }

    if (r.contains("metrics") && !r["metrics"].empty()) {
        out += "\nEvasion rates\n";
        std::vector<std::vector<std::string>> cells{{"", "n", "Liveness", "Anti-deepfake", "Face match", "Overall"}};
        for (const json& row : r["metrics"]) {
            const json& m = row.at("metrics");
            if (!m.is_object()) {
                cells.push_back({row.at("label").get<std::string>(), "-", "MISSING", "MISSING", "MISSING", "MISSING"});
                continue;
            }
            const bool adf = m.at("anti_deepfake_applicable").get<bool>();
            cells.push_back({row.at("label").get<std::string>(), std::to_string(m.at("n").get<std::size_t>()), pct(m.at("liveness_evasion_rate")),
                             adf ? pct(m.at("anti_deepfake_evasion_rate")) : "N/A", pct(m.at("face_matching_rate")),
                             pct(m.at("overall_evasion_rate"))});
        }
        out += table(cells);
    }

    if (r.contains("comparisons") && !r["comparisons"].empty()) {
        out += "\nGroup comparisons (* p<0.05, ** p<0.01)\n";
        std::vector<std::vector<std::string>> cells{{"", "Liveness", "", "P", "Anti-deepfake", "", "P", "Overall", ""}};
        for (const json& c : r["comparisons"]) {
            const json& g = c.at("comparison");
            if (!g.is_object()) {
                cells.push_back({c.at("label").get<std::string>(), "MISSING", "MISSING", "-", "MISSING", "MISSING", "-", "MISSING", "MISSING"});
                continue;
            }
            const json& a = g.at("group_a").at("metrics");
            const json& b = g.at("group_b").at("metrics");
            std::string lp = "-", ap = "-";
            for (const json& t : g.at("tests")) (t.at("metric") == "liveness" ? lp : ap) = p_cell(t);
            cells.push_back({c.at("label").get<std::string>(), pct(a.at("liveness_evasion_rate")), pct(b.at("liveness_evasion_rate")), lp,
                             pct(a.at("anti_deepfake_evasion_rate")), pct(b.at("anti_deepfake_evasion_rate")), ap, pct(a.at("overall_evasion_rate")),
                             pct(b.at("overall_evasion_rate"))});
        }
        out += table(cells);
    }

    if (r.contains("invariant_violations")) {
        for (const json& v : r["invariant_violations"]) out += "INVARIANT VIOLATION: " + v.get<std::string>() + "\n";
    }
    if (r.contains("status") && r["status"].value("partial", false)) {
        out += "\nPARTIAL RUN: " + r["status"].value("error", std::string()) + "\n";
    }
    if (r.contains("run")) {
        const json& run = r["run"];
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f", run.value("elapsed_seconds", 0.0));
        out += "\nseed " + std::to_string(run.value("seed", std::uint64_t{0})) + ", config " + run.value("config_digest", std::string()) + ", " + buf + " s\n";
    }
    return out;
}

std::string emit_report(const CampaignReport& report, ReportFormat format) {
    const json doc = to_json(report);
    return format == ReportFormat::Json ? doc.dump(2) + "\n" : render_text(doc);
}

json strip_run_metadata(json report) {
    report.erase("run");
    return report;
}

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "text") return ReportFormat::Text;
    throw ConfigError("unknown report format " + s);
}

}  // namespace flvg::harness
