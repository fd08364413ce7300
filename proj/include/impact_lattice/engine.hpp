#pragma once
// Runtime engine selection.

#include "core.hpp"
#include "kernel.hpp"

#include <optional>
#include <string_view>
#include <variant>

namespace impact_lattice {

enum class EngineKind { naive, kernel };

inline std::string_view to_string(EngineKind e) noexcept { return e == EngineKind::naive ? "naive" : "kernel"; }

inline std::optional<EngineKind> parse_engine_kind(std::string_view s) noexcept {
    if (s == "naive") return EngineKind::naive;
    if (s == "kernel") return EngineKind::kernel;
    return std::nullopt;
}

using AnyEngine = std::variant<NaiveEngine, KernelEngine>;

inline AnyEngine make_engine(EngineKind kind, const ModelParams& params) {
    if (kind == EngineKind::naive) return NaiveEngine{params};
    return KernelEngine{params};
}

/// Calls fn(engine) with the concrete engine type.
template <class Fn>
decltype(auto) with_engine(EngineKind kind, const ModelParams& params, Fn&& fn) {
    return std::visit(std::forward<Fn>(fn), make_engine(kind, params));
}

}  // namespace impact_lattice
