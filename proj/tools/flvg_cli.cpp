#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flvg/campaign.hpp"
#include "flvg/report.hpp"
#include "flvg/vendor_http.hpp"

using namespace flvg;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kTransportError = 3;
constexpr int kInvariantViolation = 4;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw harness::ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw harness::ConfigError(path + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw harness::ConfigError("cannot write " + path.string());
    out << content;
}

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("FLVG_SEED");
    if (!s || !*s) return std::nullopt;
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(s, &used);
        if (used != std::string(s).size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw harness::ConfigError(std::string("FLVG_SEED is not an unsigned integer: ") + s);
    }
}

/// A profile file, or the name of a built-in preset.
vendor::VendorProfile load_profile(const std::string& arg) {
    if (std::filesystem::exists(arg)) return vendor::profile_from_json(read_json(arg));
    return vendor::vendor_preset(arg);
}

vendor::VendorHttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Facial liveness verification security assessment"};
    app.require_subcommand(1);

    auto* corpus = app.add_subcommand("corpus", "Synthetic corpus")->require_subcommand(1);
    auto* corpus_gen = corpus->add_subcommand("gen", "Expand a corpus spec into media");
    std::string corpus_spec, corpus_out;
    corpus_gen->add_option("--spec", corpus_spec, "Corpus spec JSON (defaults if omitted)");
    corpus_gen->add_option("--out", corpus_out, "Output file (stdout if omitted)");

    auto* vendor_cmd = app.add_subcommand("vendor", "Simulated vendor API")->require_subcommand(1);
    auto* serve = vendor_cmd->add_subcommand("serve", "Serve a vendor profile over HTTP");
    std::string profile_arg, host = "127.0.0.1";
    int port = 8080;
    std::uint64_t vendor_seed = 0;
    serve->add_option("--profile", profile_arg, "Profile JSON file or preset name")->required();
    serve->add_option("--port", port, "Port (0 picks a free one)");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--seed", vendor_seed, "Challenge generator seed");

    auto* intel_cmd = app.add_subcommand("intel", "Defense intelligence")->require_subcommand(1);
    auto* probe = intel_cmd->add_subcommand("probe", "Infer deployed defenses of a vendor API");
    std::string probe_target, probe_corpus;
    std::size_t probe_n = 20;
    std::uint64_t probe_seed = 1;
    probe->add_option("--target", probe_target, "Vendor base URL")->required();
    probe->add_option("--n", probe_n, "Items per probe variant");
    probe->add_option("--seed", probe_seed, "Probe seed");
    probe->add_option("--corpus", probe_corpus, "Corpus spec JSON for probe material");

    auto* campaign = app.add_subcommand("campaign", "Attack campaigns")->require_subcommand(1);
    auto* run = campaign->add_subcommand("run", "Run a campaign config");
    std::string config_path, out_dir;
    run->add_option("--config", config_path, "Campaign config JSON")->required();
    run->add_option("--out", out_dir, "Directory for report.json and report.txt")->required();

    auto* report = app.add_subcommand("report", "Reports")->require_subcommand(1);
    auto* render = report->add_subcommand("render", "Render a report document");
    std::string report_in, report_format = "text";
    render->add_option("--in", report_in, "report.json")->required();
    render->add_option("--format", report_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        const std::optional<std::uint64_t> seed = env_seed();

        if (corpus_gen->parsed()) {
            harness::CorpusSpec spec = corpus_spec.empty() ? harness::CorpusSpec{} : harness::corpus_spec_from_json(read_json(corpus_spec));
            if (seed) spec.seed = *seed;
            const std::string doc = harness::to_json(harness::generate_corpus(spec)).dump(2) + "\n";
            if (corpus_out.empty()) {
                std::cout << doc;
            } else {
                write_file(corpus_out, doc);
            }
            return kOk;
        }

        if (serve->parsed()) {
            if (seed) vendor_seed = *seed;
            auto service = std::make_shared<vendor::VendorService>(load_profile(profile_arg), vendor_seed);
            vendor::VendorHttpServer server(service);
            const int bound = server.bind(host, port);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "serving " << service->declared().name << " on http://" << host << ":" << bound << std::endl;
            server.serve();
            g_server = nullptr;
            return kOk;
        }

        if (probe->parsed()) {
            if (seed) probe_seed = *seed;
            harness::CorpusSpec spec = probe_corpus.empty() ? harness::CorpusSpec{} : harness::corpus_spec_from_json(read_json(probe_corpus));
            if (seed) spec.seed = *seed;
            const harness::Corpus c = harness::generate_corpus(spec);
            HttpFlvClient client(probe_target);
            intel::ProbeOptions options;
            options.n = probe_n;
            const auto videos = c.genuine_videos();
            std::cout << intel::to_json(intel::collect_intelligence(client, videos, probe_seed, options)).dump(2) << "\n";
            return kOk;
        }

        if (run->parsed()) {
            const harness::CampaignConfig config = harness::campaign_config_from_json(read_json(config_path), seed);
            const harness::CampaignReport result = harness::run_campaign(config);
            std::filesystem::create_directories(out_dir);
            const json doc = harness::to_json(result);
            write_file(std::filesystem::path(out_dir) / "report.json", doc.dump(2) + "\n");
            const std::string text = harness::render_text(doc);
            write_file(std::filesystem::path(out_dir) / "report.txt", text);
            std::cout << text;
            if (!result.invariant_violations.empty()) return kInvariantViolation;
            if (result.partial) return kTransportError;
            return kOk;
        }

        if (render->parsed()) {
            const json doc = read_json(report_in);
            std::cout << (harness::report_format_from_string(report_format) == harness::ReportFormat::Json ? doc.dump(2) + "\n" : harness::render_text(doc));
            return kOk;
        }
    } catch (const harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const vendor::ProfileError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const planner::PlanError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kTransportError;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
