#pragma once

#include <fstream>
#include <set>
#include <string>

#include "json.hpp"

#include "errors.hpp"
#include "model.hpp"

namespace roughex {

inline ModelParams params_from_json(const nlohmann::json& j) {
    static const std::set<std::string> keys{"alpha", "rho", "lambda", "xi", "vbar", "v0"};
    if (!j.is_object()) throw InputError("parameters must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (!keys.count(k)) throw InputError("unknown parameter key: " + k);
        if (!v.is_number()) throw InputError("parameter " + k + " must be a number");
    }
    for (const auto& k : keys)
        if (!j.contains(k)) throw InputError("missing parameter key: " + k);
    ModelParams p;
    p.alpha = j.at("alpha").get<double>();
    p.rho = j.at("rho").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.xi = j.at("xi").get<double>();
    p.vbar = j.at("vbar").get<double>();
    p.v0 = j.at("v0").get<double>();
    p.validate();
    return p;
}

inline nlohmann::json params_to_json(const ModelParams& p) {
    return {{"alpha", p.alpha}, {"rho", p.rho}, {"lambda", p.lambda},
            {"xi", p.xi},       {"vbar", p.vbar}, {"v0", p.v0}};
}

inline ModelParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open parameter file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed parameter file " + path + ": " + e.what());
    }
    return params_from_json(j);
}

} // namespace roughex
