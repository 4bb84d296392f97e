#pragma once

#include <string>

#include <json.hpp>

#include "mnewt/solver.hpp"
#include "mnewt/sphere_eig.hpp"

namespace mnewt {

using nlohmann::json;

inline json config_echo(const SolverConfig& cfg) {
    return json{
        {"eps", cfg.eps},
        {"delta", cfg.gamma_params.delta},
        {"Delta", cfg.gamma_params.cap},
        {"max_iter", cfg.max_iter},
        {"norm", to_string(cfg.norm_rule)},
        {"sigma1", cfg.wolfe.sigma1},
        {"sigma2", cfg.wolfe.sigma2},
        {"alpha0", cfg.wolfe.alpha0},
        {"eig_tol", cfg.eig_tol},
    };
}

inline json to_json(const IterRecord& r) {
    return json{
        {"k", r.k},
        {"f", r.f},
        {"grad_norm", r.grad_norm},
        {"gamma", r.gamma},
        {"alpha", r.alpha},
        {"cos_theta", r.cos_theta},
        {"eig_lo", r.eig_lo},
        {"eig_hi", r.eig_hi},
        {"fallback", r.fallback_used},
        {"case", to_string(r.gamma_case)},
        {"rung", r.rung},
        {"x", r.x},
        {"d", r.d},
    };
}

inline json to_json(const SolveReport& rep) {
    json trace = json::array();
    for (const auto& r : rep.trace) trace.push_back(to_json(r));
    return json{
        {"status", to_string(rep.status)},
        {"iterations", rep.iterations},
        {"f_final", rep.f_final},
        {"grad_norm_final", rep.grad_norm_final},
        {"x_final", rep.x_final},
        {"trace", std::move(trace)},
    };
}

inline json to_json(const EigEstimate& e) {
    return json{
        {"value", e.value},
        {"vector", e.vector},
        {"iterations", e.iterations},
        {"converged", e.converged},
        {"method", to_string(e.method)},
    };
}

/// The single self-describing report document every command emits.
inline json make_report(const std::string& command, json config, json result) {
    return json{
        {"schema_version", 1},
        {"command", command},
        {"config", std::move(config)},
        {"result", std::move(result)},
    };
}

}  // namespace mnewt
