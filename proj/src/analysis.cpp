#include "flvg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "flvg/numerics.hpp"

namespace flvg::analysis {

using nlohmann::json;

namespace {

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

std::string pad(const std::string& s, std::size_t width, bool left) {
    if (s.size() >= width) return s;
    return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        if (width.size() < r.size()) width.resize(r.size(), 0);
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            if (c) out << "  ";
            out << pad(rows[i][c], width[c], c == 0);
        }
        out << '\n';
        if (i == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
            out << std::string(total, '-') << '\n';
        }
    }
    return out.str();
}

}  // namespace

StageIndicators stage_indicators(std::span<const vendor::VerificationOutcome> outcomes, bool require_requirement) {
    if (outcomes.empty()) throw AnalysisError("no outcomes to analyse");
    const bool applicable = outcomes.front().anti_deepfake_pass.has_value();
    StageIndicators ind;
    for (const auto& o : outcomes) {
        if (o.anti_deepfake_pass.has_value() != applicable) throw AnalysisError("outcomes mix vendors with and without anti-deepfake detection");
        const bool live = o.liveness_pass && (!require_requirement || o.requirement_met);
        const bool adf = o.anti_deepfake_pass.value_or(true);
        const bool match = o.face_match_pass.value_or(false);
        ind.liveness.push_back(live ? 1.0 : 0.0);
        ind.anti_deepfake.push_back(adf ? 1.0 : 0.0);
        ind.face_match.push_back(match ? 1.0 : 0.0);
        ind.overall.push_back(live && adf && match ? 1.0 : 0.0);
    }
    return ind;
}

MetricsReport compute_metrics(std::span<const vendor::VerificationOutcome> outcomes, bool require_requirement) {
    const StageIndicators ind = stage_indicators(outcomes, require_requirement);
    MetricsReport m;
    m.n = outcomes.size();
    m.anti_deepfake_applicable = outcomes.front().anti_deepfake_pass.has_value();
    m.liveness_evasion_rate = mean(ind.liveness);
    m.anti_deepfake_evasion_rate = m.anti_deepfake_applicable ? mean(ind.anti_deepfake) : 1.0;
    m.face_matching_rate = mean(ind.face_match);
    m.overall_evasion_rate = mean(ind.overall);
    return m;
}

bool metrics_consistent(const MetricsReport& m) {
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(m.liveness_evasion_rate) || !unit(m.anti_deepfake_evasion_rate) || !unit(m.face_matching_rate) || !unit(m.overall_evasion_rate)) {
        return false;
    }
    if (!m.anti_deepfake_applicable && m.anti_deepfake_evasion_rate != 1.0) return false;
    return m.overall_evasion_rate <= m.liveness_evasion_rate && m.overall_evasion_rate <= m.face_matching_rate &&
           m.overall_evasion_rate <= m.anti_deepfake_evasion_rate;
}

TTestResult welch_t_test(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() < 2 || ys.size() < 2) throw AnalysisError("welch_t_test needs at least two observations per sample");
    const double nx = static_cast<double>(xs.size());
    const double ny = static_cast<double>(ys.size());
    const double mx = mean(xs);
    const double my = mean(ys);
    const double vx = sample_variance(xs, mx) / nx;
    const double vy = sample_variance(ys, my) / ny;
    TTestResult r;
    if (vx == 0.0 && vy == 0.0) {
        r.degenerate = true;
        r.dof = nx + ny - 2.0;
        if (mx == my) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = mx > my ? INFINITY : -INFINITY;
            r.p = 0.0;
        }
        return r;
    }
    const double se2 = vx + vy;
    r.t = (mx - my) / std::sqrt(se2);
    r.dof = se2 * se2 / (vx * vx / (nx - 1.0) + vy * vy / (ny - 1.0));
    r.p = std::clamp(2.0 * numerics::student_t_sf(std::abs(r.t), r.dof), 0.0, 1.0);
    return r;
}

GroupComparison compare_groups(std::span<const vendor::VerificationOutcome> a, std::span<const vendor::VerificationOutcome> b,
                               std::string label_a, std::string label_b, bool require_requirement) {
    if (a.empty() || b.empty()) throw AnalysisError("compare_groups needs two non-empty groups");
    GroupComparison g;
    g.label_a = std::move(label_a);
    g.label_b = std::move(label_b);
    g.metrics_a = compute_metrics(a, require_requirement);
    g.metrics_b = compute_metrics(b, require_requirement);
    const StageIndicators ia = stage_indicators(a, require_requirement);
    const StageIndicators ib = stage_indicators(b, require_requirement);
    auto add = [&](const char* metric, const std::vector<double>& xa, const std::vector<double>& xb) {
        StageTest st{metric, welch_t_test(xa, xb), false, false};
        st.significant_05 = st.test.p < 0.05;
        st.significant_01 = st.test.p < 0.01;
        g.tests.push_back(std::move(st));
    };
    add("liveness", ia.liveness, ib.liveness);
    if (g.metrics_a.anti_deepfake_applicable && g.metrics_b.anti_deepfake_applicable) add("anti_deepfake", ia.anti_deepfake, ib.anti_deepfake);
    return g;
}

json to_json(const MetricsReport& m) {
    return json{{"n", m.n},
                {"liveness_evasion_rate", m.liveness_evasion_rate},
                {"anti_deepfake_evasion_rate", m.anti_deepfake_evasion_rate},
                {"face_matching_rate", m.face_matching_rate},
                {"overall_evasion_rate", m.overall_evasion_rate},
                {"anti_deepfake_applicable", m.anti_deepfake_applicable}};
}

json to_json(const TTestResult& t) {
    // JSON has no infinity; degenerate unequal groups report t as null.
    return json{{"t", std::isfinite(t.t) ? json(t.t) : json(nullptr)}, {"dof", t.dof}, {"p", t.p}, {"degenerate", t.degenerate}};
}

json to_json(const GroupComparison& g) {
    json tests = json::array();
    for (const StageTest& s : g.tests) {
        json t = to_json(s.test);
        t["metric"] = s.metric;
        t["significant_05"] = s.significant_05;
        t["significant_01"] = s.significant_01;
        tests.push_back(std::move(t));
    }
    return json{{"group_a", {{"label", g.label_a}, {"metrics", to_json(g.metrics_a)}}},
                {"group_b", {{"label", g.label_b}, {"metrics", to_json(g.metrics_b)}}},
                {"tests", std::move(tests)}};
}

std::string format_rate(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", rate * 100.0);
    return buf;
}

std::string format_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", p);
    return buf;
}

std::string metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    std::vector<std::vector<std::string>> cells{{"", "n", "Liveness", "Anti-deepfake", "Face match", "Overall"}};
    for (const auto& [label, m] : rows) {
        cells.push_back({label, std::to_string(m.n), format_rate(m.liveness_evasion_rate),
                         m.anti_deepfake_applicable ? format_rate(m.anti_deepfake_evasion_rate) : format_rate(1.0) + "*",
                         format_rate(m.face_matching_rate), format_rate(m.overall_evasion_rate)});
    }
    return render(cells);
}

std::string comparison_table(const std::vector<GroupComparison>& comparisons) {
    std::vector<std::vector<std::string>> cells{{"Groups", "Liveness", "", "P", "Anti-deepfake", "", "P", "Overall", ""}};
    for (const auto& g : comparisons) {
        std::string lp = "-", ap = "-";
        for (const auto& s : g.tests) {
            std::string p = format_p(s.test.p) + (s.significant_01 ? " **" : s.significant_05 ? " *" : "");
            (s.metric == "liveness" ? lp : ap) = p;
        }
        cells.push_back({g.label_a + " / " + g.label_b, format_rate(g.metrics_a.liveness_evasion_rate), format_rate(g.metrics_b.liveness_evasion_rate),
                         lp, format_rate(g.metrics_a.anti_deepfake_evasion_rate), format_rate(g.metrics_b.anti_deepfake_evasion_rate), ap,
                         format_rate(g.metrics_a.overall_evasion_rate), format_rate(g.metrics_b.overall_evasion_rate)});
    }
    return render(cells);
}

}  // namespace flvg::analysis
