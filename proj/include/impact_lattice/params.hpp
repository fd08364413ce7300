#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace impact_lattice {

/// Raised when a parameter lies outside its domain. `field()` names the
/// offending parameter using its CLI/config key.
class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_{std::move(field)} {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Distance scaling g(d). `power_of_shifted` is (1+d)^a, `shifted_power` is 1+d^a.
enum class ScalingForm { shifted_power, power_of_shifted };

enum class UpdateScheme { synchronous, asynchronous };

inline std::string_view to_string(ScalingForm f) noexcept {
    return f == ScalingForm::power_of_shifted ? "(1+d)^a" : "1+d^a";
}

inline std::optional<ScalingForm> parse_scaling_form(std::string_view s) noexcept {
    if (s == "(1+d)^a") return ScalingForm::power_of_shifted;
    if (s == "1+d^a") return ScalingForm::shifted_power;
    return std::nullopt;
}

inline std::string_view to_string(UpdateScheme u) noexcept {
    return u == UpdateScheme::synchronous ? "sync" : "async";
}

inline std::optional<UpdateScheme> parse_update_scheme(std::string_view s) noexcept {
    if (s == "sync") return UpdateScheme::synchronous;
    if (s == "async") return UpdateScheme::asynchronous;
    return std::nullopt;
}

struct ModelParams {
    std::size_t L = 41;
    std::size_t K = 2;
    double alpha = 2.0;
    double temperature = 0.0;
    std::size_t steps = 100;
    std::uint64_t seed = 0;

    ScalingForm scaling = ScalingForm::shifted_power;
    UpdateScheme update = UpdateScheme::synchronous;
    /// Constant multiplying every impact; sets the unit in which T is measured.
    double impact_scale = 4.0;
    bool self_support = true;

    std::size_t agent_count() const noexcept { return L * L; }

    /// Throws ParameterError naming the first violated field.
    void validate() const {
        if (L < 1) throw ParameterError("L", "must be >= 1");
        if (K < 1) throw ParameterError("K", "must be >= 1");
        if (!(std::isfinite(alpha) && alpha >= 0.0)) throw ParameterError("alpha", "must be finite and >= 0");
        if (!(std::isfinite(temperature) && temperature >= 0.0))
            throw ParameterError("temperature", "must be finite and >= 0");
        if (!(std::isfinite(impact_scale) && impact_scale > 0.0))
            throw ParameterError("impact-scale", "must be finite and > 0");
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

}  // namespace impact_lattice
