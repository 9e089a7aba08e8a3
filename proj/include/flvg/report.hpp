#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "flvg/campaign.hpp"

namespace flvg::harness {

enum class ReportFormat { Json, Text };

nlohmann::json to_json(const CampaignReport& report);

/// Aligned plain-text tables from a report document; rows without metrics
/// show MISSING.
std::string render_text(const nlohmann::json& report);

std::string emit_report(const CampaignReport& report, ReportFormat format);

/// Drops the "run" block (seed, digest, timings) so reports from different
/// transports can be compared.
nlohmann::json strip_run_metadata(nlohmann::json report);

ReportFormat report_format_from_string(const std::string& s);

}  // namespace flvg::harness
