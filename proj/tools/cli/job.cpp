#include "job.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <sstream>

namespace impact_lattice::cli {

std::string_view to_string(SustainMethod m) noexcept {
    return m == SustainMethod::analytic ? "analytic" : "montecarlo";
}

std::optional<SustainMethod> parse_sustain_method(std::string_view s) noexcept {
    if (s == "analytic") return SustainMethod::analytic;
    if (s == "montecarlo") return SustainMethod::montecarlo;
    return std::nullopt;
}

void Job::validate() const {
    params.validate();
    if (runs < 1) throw ParameterError("runs", "must be >= 1");
    for (std::size_t s : snapshots)
        if (s > params.steps) throw ParameterError("snapshots", "step " + std::to_string(s) + " exceeds steps");
    if (mode == Mode::sweep) {
        if (alphas.empty()) throw ParameterError("alphas", "sweep needs at least one value");
        if (temperatures.empty()) throw ParameterError("temperatures", "sweep needs at least one value");
        for (double a : alphas)
            if (!(std::isfinite(a) && a >= 0.0)) throw ParameterError("alphas", "values must be finite and >= 0");
        for (double t : temperatures)
            if (!(std::isfinite(t) && t >= 0.0))
                throw ParameterError("temperatures", "values must be finite and >= 0");
    }
    if (sustain_samples < 1) throw ParameterError("sustain-samples", "must be >= 1");
}

namespace {

// CLI11 messages are of the form "--flag: ..." or "The following argument was
// not expected: --x"; recover the flag name for the diagnostic.
std::string flag_from_message(const std::string& message) {
    const auto dashes = message.find("--");
    if (dashes == std::string::npos) return {};
    auto end = message.find_first_of(" :=", dashes);
    return message.substr(dashes + 2, end == std::string::npos ? std::string::npos : end - dashes - 2);
}

}  // namespace

std::variant<Job, InfoRequest> parse_config(const std::vector<std::string>& args) {
    Job job;
    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    if (!rest.empty()) {
        if (rest.front() == "sweep") job.mode = Mode::sweep;
        else if (rest.front() == "replay") job.mode = Mode::replay;
        if (rest.front() == "run" || rest.front() == "sweep" || rest.front() == "replay") rest.erase(rest.begin());
    }

    CLI::App app{"Multi-opinion social impact simulation on a square lattice", "impact_lattice"};
    app.set_version_flag("--version", std::string("impact_lattice ") + kToolVersion);
    app.allow_config_extras(false);
    app.set_config("--config", "", "flat key=value file; flags on the command line win");

    std::string engine = "kernel", update = "sync", scaling = "1+d^a", sustain = "analytic";
    std::string out = ".";
    bool no_self_support = false;

    app.add_option("--L", job.params.L, "lattice side")->capture_default_str();
    app.add_option("--K", job.params.K, "number of opinions")->capture_default_str();
    app.add_option("--alpha", job.params.alpha, "distance scaling exponent")->capture_default_str();
    app.add_option("--temperature", job.params.temperature, "social temperature T")->capture_default_str();
    app.add_option("--steps", job.params.steps, "time steps")->capture_default_str();
    app.add_option("--seed", job.params.seed, "master seed")->capture_default_str();
    app.add_option("--runs", job.runs, "ensemble size")->capture_default_str();
    app.add_option("--engine", engine, "naive|kernel")->capture_default_str();
    app.add_option("--snapshots", job.snapshots, "comma-separated step list (default: final step)")->delimiter(',');
    app.add_option("--out", out, "output directory")->capture_default_str();
    app.add_option("--update", update, "sync|async")->capture_default_str();
    app.add_option("--scaling", scaling, "(1+d)^a|1+d^a")->capture_default_str();
    app.add_option("--impact-scale", job.params.impact_scale, "constant multiplying every impact")
        ->capture_default_str();
    app.add_flag("--no-self-support", no_self_support, "exclude an agent's own support from its impact");
    app.add_option("--sustain", sustain, "analytic|montecarlo")->capture_default_str();
    app.add_option("--sustain-samples", job.sustain_samples, "redraws per agent for montecarlo")
        ->capture_default_str();
    app.add_option("--alphas", job.alphas, "sweep: comma-separated alpha values")->delimiter(',');
    app.add_option("--temperatures", job.temperatures, "sweep: comma-separated T values")->delimiter(',');
    std::string manifest;
    if (job.mode == Mode::replay) app.add_option("manifest", manifest, "manifest.json to replay")->required();

    std::vector<std::string> reversed(rest.rbegin(), rest.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return InfoRequest{app.help()};
    } catch (const CLI::CallForVersion&) {
        return InfoRequest{std::string("impact_lattice ") + kToolVersion};
    } catch (const CLI::ParseError& e) {
        std::string flag = flag_from_message(e.what());
        throw UsageError(flag, e.what());
    }

    if (auto v = parse_engine_kind(engine)) job.engine = *v;
    else throw UsageError("engine", "--engine: expected naive or kernel, got '" + engine + "'");
    if (auto v = parse_update_scheme(update)) job.params.update = *v;
    else throw UsageError("update", "--update: expected sync or async, got '" + update + "'");
    if (auto v = parse_scaling_form(scaling)) job.params.scaling = *v;
    else throw UsageError("scaling", "--scaling: expected (1+d)^a or 1+d^a, got '" + scaling + "'");
    if (auto v = parse_sustain_method(sustain)) job.sustain = *v;
    else throw UsageError("sustain", "--sustain: expected analytic or montecarlo, got '" + sustain + "'");
    job.params.self_support = !no_self_support;
    job.out = out;
    job.manifest = manifest;

    try {
        job.validate();
    } catch (const ParameterError& e) {
        throw UsageError(e.field(), std::string("--") + e.what());
    }
    return job;
}

}  // namespace impact_lattice::cli
