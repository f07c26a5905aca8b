// pactree: PAC/polar code simulator with SC, SC-List, stack and Fano decoding.
//
// Subcommands:
//   simulate    Monte-Carlo FER/complexity campaign over an SNR grid
//   spectrum    SCL-based distance-spectrum search (weight,count CSV)
//   profile     emit a rate-profile file ("N K" header, one index per line)
//   genie-hist  distribution of channel-induced bit errors per failed frame

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "pactree/pactree.hpp"

using namespace pactree;

namespace {

struct CodeArgs {
    int N = 128;
    int K = 64;
    std::string profile = "rm";
    std::string g_octal = "133";
    double dsnr = 3.5;
    double bias_dsnr = 4.0;
    std::string profile_file;
    std::string crc = "off";
    std::string crc_poly;
};

void add_code_options(CLI::App* cmd, CodeArgs& a) {
    cmd->add_option("--N", a.N, "block length (power of two)");
    cmd->add_option("--K", a.K, "message bits");
    cmd->add_option("--profile", a.profile, "rate profile: rm|dega|pw|pwm")
        ->check(CLI::IsMember({"rm", "dega", "pw", "pwm"}));
    cmd->add_option("--g", a.g_octal, "convolutional generator polynomial, octal (1 = plain polar)");
    cmd->add_option("--dsnr", a.dsnr, "design SNR (dB) for profile selection");
    cmd->add_option("--bias-dsnr", a.bias_dsnr, "design SNR (dB) for the Fano bias tables");
    cmd->add_option("--code", a.profile_file, "read the information set from a profile file");
    cmd->add_option("--crc", a.crc, "CRC hex literal (e.g. 0xA6) or 'off'");
    cmd->add_option("--crc-poly", a.crc_poly, "explicit CRC polynomial as a binary string");
}

ProfileKind parse_kind(const std::string& s) {
    if (s == "rm") return ProfileKind::RM;
    if (s == "dega") return ProfileKind::DEGA;
    if (s == "pw") return ProfileKind::PW;
    return ProfileKind::PWModified;
}

CodeSpec build_code(const CodeArgs& a) {
    CodeSpec code;
    code.g = parse_octal(a.g_octal);
    if (!a.crc_poly.empty())
        code.crc = CrcSpec::from_binary_string(a.crc_poly);
    else if (a.crc != "off") {
        uint64_t bits = std::stoull(a.crc, nullptr, 16);
        code.crc = CrcSpec::from_hex(bits, 8);
    }
    const int extra = code.crc ? code.crc->width : 0;
    if (!a.profile_file.empty()) {
        code.profile = load_profile(a.profile_file, a.bias_dsnr);
        if (code.profile.K < extra) throw std::runtime_error("profile smaller than CRC width");
    } else {
        code.profile = build_profile(a.N, a.K + extra, parse_kind(a.profile), a.dsnr, a.bias_dsnr);
    }
    return code;
}

nlohmann::json campaign_json(const CodeArgs& a, const Campaign& c) {
    nlohmann::json j;
    j["code"] = {{"N", a.N},
                 {"K", a.K},
                 {"profile", a.profile},
                 {"g", a.g_octal},
                 {"dsnr", a.dsnr},
                 {"bias_dsnr", a.bias_dsnr},
                 {"profile_file", a.profile_file},
                 {"crc", a.crc},
                 {"crc_poly", a.crc_poly}};
    j["decoder"] = decoder_name(c.decoder);
    j["list_size"] = c.list_size;
    j["stack_depth"] = c.stack_depth;
    j["fano"] = {{"delta", c.fano.delta},
                 {"delta_q", c.fano.delta_q},
                 {"ibu", c.fano.bias_update_index},
                 {"max_div", c.fano.max_diversions},
                 {"cs", c.fano.use_critical_set},
                 {"topdown", c.fano.use_top_down},
                 {"adaptive", c.fano.use_adaptive_bias},
                 {"one_shot_threshold", c.fano.use_one_shot_threshold},
                 {"metric", c.fano.metric == MetricMode::Approx ? "approx" : "exact"}};
    j["snr_start"] = c.snr_start;
    j["snr_stop"] = c.snr_stop;
    j["snr_step"] = c.snr_step;
    j["min_frame_errors"] = c.min_frame_errors;
    j["max_frames"] = c.max_frames;
    j["seed"] = c.seed;
    return j;
}

int cmd_simulate(const CodeArgs& ca, Campaign& c, const std::string& decoder,
                 const std::string& metric, int cs_least, const std::string& out_csv,
                 const std::string& out_json) {
    if (decoder == "sc") c.decoder = DecoderKind::SC;
    else if (decoder == "scl") c.decoder = DecoderKind::SCL;
    else if (decoder == "stack") c.decoder = DecoderKind::Stack;
    else c.decoder = DecoderKind::Fano;
    c.fano.metric = (metric == "exact") ? MetricMode::Exact : MetricMode::Approx;

    CodeSpec code = build_code(ca);
    if (cs_least > 0)
        code.profile.critical = critical_set_least_reliable(
            code.profile.N, code.profile.info_set, code.profile.reliability, cs_least);
    std::ofstream csv;
    std::ostream* live = nullptr;
    if (!out_csv.empty()) {
        csv.open(out_csv);
        if (!csv) throw std::runtime_error("cannot write " + out_csv);
        csv << kSimCsvHeader << "\n";
        live = &csv;
    } else {
        std::cout << kSimCsvHeader << "\n";
        live = &std::cout;
    }
    auto records = run_campaign(code, c, live);
    if (!out_json.empty()) {
        nlohmann::json j;
        j["campaign"] = campaign_json(ca, c);
        j["records"] = nlohmann::json::array();
        for (const SimRecord& r : records)
            j["records"].push_back({{"ebn0_db", r.ebn0_db},
                                    {"frames", r.frames},
                                    {"frame_errors", r.frame_errors},
                                    {"bit_errors", r.bit_errors},
                                    {"fer", r.fer},
                                    {"ber", r.ber},
                                    {"avg_time_steps", r.avg_time_steps},
                                    {"avg_operations", r.avg_operations},
                                    {"wall_seconds", r.wall_seconds}});
        std::ofstream jf(out_json);
        if (!jf) throw std::runtime_error("cannot write " + out_json);
        jf << j.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC/polar code simulator: SC, SC-List, stack and Fano decoding"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file; command line wins");

    CodeArgs ca;
    Campaign c;
    std::string decoder = "sc", metric = "approx", out_csv, out_json, out_file;
    double snr = 2.5;
    uint64_t failures = 1000;
    int list_size = 0;

    auto* sim = app.add_subcommand("simulate", "Monte-Carlo FER campaign");
    add_code_options(sim, ca);
    sim->add_option("--decoder", decoder, "sc|scl|stack|fano")
        ->check(CLI::IsMember({"sc", "scl", "stack", "fano"}));
    sim->add_option("--list-size", c.list_size, "SCL list size");
    sim->add_option("--stack-depth", c.stack_depth, "stack bound D");
    sim->add_option("--delta", c.fano.delta, "Fano threshold step");
    sim->add_option("--delta-q", c.fano.delta_q, "bias quantizer step");
    sim->add_option("--ibu", c.fano.bias_update_index, "bias update bit index (-1: 0.6K)");
    sim->add_option("--max-div", c.fano.max_diversions, "diversion budget (0: unlimited)");
    int cs_least = 0;
    sim->add_flag("--cs,!--no-cs", c.fano.use_critical_set, "restrict diversions to the critical set");
    sim->add_option("--cs-least", cs_least,
                    "critical set fallback: flag the q least-reliable information bits instead");
    sim->add_flag("--topdown,!--no-topdown", c.fano.use_top_down, "top-down first backtracking");
    sim->add_flag("--adaptive,!--no-adaptive", c.fano.use_adaptive_bias, "adaptive metric scaling");
    sim->add_flag("--one-shot,!--no-one-shot", c.fano.use_one_shot_threshold,
                  "one-shot threshold updates");
    sim->add_option("--metric", metric, "approx|exact branch metric")
        ->check(CLI::IsMember({"approx", "exact"}));
    sim->add_option("--snr-start", c.snr_start, "Eb/N0 grid start (dB)");
    sim->add_option("--snr-stop", c.snr_stop, "Eb/N0 grid stop (dB)");
    sim->add_option("--snr-step", c.snr_step, "Eb/N0 grid step (dB)");
    sim->add_option("--min-errors", c.min_frame_errors, "frame errors per point");
    sim->add_option("--max-frames", c.max_frames, "frame cap per point");
    sim->add_option("--seed", c.seed, "campaign seed");
    sim->add_option("--threads", c.threads, "worker threads");
    sim->add_option("--out", out_csv, "CSV output path (default stdout)");
    sim->add_option("--json", out_json, "JSON mirror with embedded config");

    auto* spec = app.add_subcommand("spectrum", "SCL-based distance spectrum search");
    add_code_options(spec, ca);
    spec->add_option("--list-size", list_size, "search list size")->required();
    spec->add_option("--threads", c.threads, "worker threads");
    spec->add_option("--out", out_file, "CSV output path (default stdout)");

    auto* prof = app.add_subcommand("profile", "emit a rate-profile file");
    add_code_options(prof, ca);
    prof->add_option("--out", out_file, "output path (default stdout)");

    auto* genie = app.add_subcommand("genie-hist", "channel-error histogram from genie-aided SC");
    add_code_options(genie, ca);
    genie->add_option("--snr", snr, "Eb/N0 (dB)");
    genie->add_option("--failures", failures, "decoding failures to collect");
    genie->add_option("--seed", c.seed, "seed");
    genie->add_option("--out", out_file, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(ca, c, decoder, metric, cs_least, out_csv, out_json);

        if (spec->parsed()) {
            CodeSpec code = build_code(ca);
            auto ws = spectrum_scl(code, list_size, std::max(1, c.threads));
            std::ofstream f;
            std::ostream& os = out_file.empty() ? std::cout : (f.open(out_file), f);
            os << "weight,count\n";
            for (auto& [w, cnt] : ws.counts) os << w << "," << cnt << "\n";
            return 0;
        }
        if (prof->parsed()) {
            CodeSpec code = build_code(ca);
            if (out_file.empty()) save_profile(code.profile, std::cout);
            else save_profile(code.profile, out_file);
            return 0;
        }
        if (genie->parsed()) {
            CodeSpec code = build_code(ca);
            auto h = genie_error_histogram(code, snr, failures, c.seed);
            std::ofstream f;
            std::ostream& os = out_file.empty() ? std::cout : (f.open(out_file), f);
            os << "errors,count\n";
            for (auto& [k, cnt] : h.counts) os << k << "," << cnt << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
