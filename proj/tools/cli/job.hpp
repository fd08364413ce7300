#pragma once
// Command-line / config-file job description.

#include "impact_lattice/engine.hpp"
#include "impact_lattice/params.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace impact_lattice::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Mode { run, sweep, replay };
enum class SustainMethod { analytic, montecarlo };

struct Job {
    Mode mode = Mode::run;
    ModelParams params{.steps = 100};
    EngineKind engine = EngineKind::kernel;
    std::size_t runs = 1;
    std::vector<std::size_t> snapshots;  ///< empty means {steps}
    std::filesystem::path out = ".";
    std::vector<double> alphas;        ///< sweep only
    std::vector<double> temperatures;  ///< sweep only
    SustainMethod sustain = SustainMethod::analytic;
    std::size_t sustain_samples = 10000;
    std::filesystem::path manifest;  ///< replay only

    std::vector<std::size_t> effective_snapshots() const {
        return snapshots.empty() ? std::vector<std::size_t>{params.steps} : snapshots;
    }

    /// Throws ParameterError naming the offending flag.
    void validate() const;
};

/// Bad flag, unparsable value or domain violation. `flag()` names the flag.
class UsageError : public std::runtime_error {
public:
    UsageError(std::string flag, const std::string& message)
        : std::runtime_error(message), flag_{std::move(flag)} {}
    const std::string& flag() const noexcept { return flag_; }

private:
    std::string flag_;
};

/// Help or version text that should be printed with exit code 0.
struct InfoRequest {
    std::string text;
};

/// Parses argv (including argv[0]). The first token may be a subcommand
/// (`run`, `sweep`, `replay`); without one, `run` is assumed.
/// Returns InfoRequest for --help / --version; throws UsageError otherwise.
std::variant<Job, InfoRequest> parse_config(const std::vector<std::string>& args);

std::string_view to_string(SustainMethod m) noexcept;
std::optional<SustainMethod> parse_sustain_method(std::string_view s) noexcept;

}  // namespace impact_lattice::cli
