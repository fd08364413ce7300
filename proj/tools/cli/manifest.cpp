#include "manifest.hpp"

#include "impact_lattice/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

namespace impact_lattice::cli {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("sha256 unavailable");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::sweep: return "sweep";
        case Mode::replay: return "replay";
        case Mode::run: break;
    }
    return "run";
}

}  // namespace

nlohmann::json to_json(const RunManifest& m) {
    const auto& p = m.job.params;
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"kind", o.kind}, {"path", o.path}, {"sha256", o.sha256}});
    return {
        {"tool_version", m.tool_version},
        {"created_at", m.created_at},
        {"mode", mode_name(m.job.mode)},
        {"params",
         {{"L", p.L},
          {"K", p.K},
          {"alpha", p.alpha},
          {"temperature", p.temperature},
          {"steps", p.steps},
          {"seed", p.seed},
          {"scaling", std::string(to_string(p.scaling))},
          {"update", std::string(to_string(p.update))},
          {"impact_scale", p.impact_scale},
          {"self_support", p.self_support}}},
        {"engine", std::string(to_string(m.job.engine))},
        {"n_runs", m.job.runs},
        {"snapshot_schedule", m.job.effective_snapshots()},
        {"alphas", m.job.alphas},
        {"temperatures", m.job.temperatures},
        {"sustain", std::string(to_string(m.job.sustain))},
        {"sustain_samples", m.job.sustain_samples},
        {"seed_derivation", "seed_r = splitmix64_mix(master + (r + 1) * 0x9E3779B97F4A7C15), r = 0..n_runs-1"},
        {"outputs", outputs},
    };
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    try {
        const auto& p = j.at("params");
        Job& job = m.job;
        const std::string mode = j.at("mode");
        job.mode = mode == "sweep" ? Mode::sweep : Mode::run;
        job.params.L = p.at("L");
        job.params.K = p.at("K");
        job.params.alpha = p.at("alpha");
        job.params.temperature = p.at("temperature");
        job.params.steps = p.at("steps");
        job.params.seed = p.at("seed");
        job.params.impact_scale = p.at("impact_scale");
        job.params.self_support = p.at("self_support");
        const std::string scaling = p.at("scaling"), update = p.at("update");
        const std::string engine = j.at("engine"), sustain = j.at("sustain");
        auto sf = parse_scaling_form(scaling);
        auto us = parse_update_scheme(update);
        auto ek = parse_engine_kind(engine);
        auto sm = parse_sustain_method(sustain);
        if (!sf || !us || !ek || !sm) throw UsageError("manifest", "manifest holds an unknown enum value");
        job.params.scaling = *sf;
        job.params.update = *us;
        job.engine = *ek;
        job.sustain = *sm;
        job.runs = j.at("n_runs");
        job.snapshots = j.at("snapshot_schedule").get<std::vector<std::size_t>>();
        job.alphas = j.at("alphas").get<std::vector<double>>();
        job.temperatures = j.at("temperatures").get<std::vector<double>>();
        job.sustain_samples = j.at("sustain_samples");
        m.tool_version = j.at("tool_version");
        m.created_at = j.at("created_at");
        for (const auto& o : j.at("outputs")) m.outputs.push_back({o.at("kind"), o.at("path"), o.at("sha256")});
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("manifest", std::string("malformed manifest: ") + e.what());
    }
    return m;
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("manifest", std::string("malformed manifest: ") + e.what());
    }
    return manifest_from_json(j);
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    write_file(path, to_json(manifest).dump(2) + "\n");
}

}  // namespace impact_lattice::cli
