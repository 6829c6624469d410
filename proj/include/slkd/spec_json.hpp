#pragma once

#include <string>

#include <json.hpp>

#include "slkd/model.hpp"

namespace slkd {

using json = nlohmann::json;

inline const char* init_scheme_name(InitScheme s) {
    switch (s) {
        case InitScheme::he_uniform: return "he_uniform";
        case InitScheme::zeros: return "zeros";
        case InitScheme::identity: return "identity";
    }
    return "?";
}

inline InitScheme init_scheme_from(const std::string& s, const std::string& ctx) {
    if (s == "he_uniform") return InitScheme::he_uniform;
    if (s == "zeros") return InitScheme::zeros;
    if (s == "identity") return InitScheme::identity;
    fail(ctx + ": unknown init scheme '" + s + "'");
}

inline LayerKind layer_kind_from(const std::string& s, const std::string& ctx) {
    if (s == "dense") return LayerKind::dense;
    if (s == "relu") return LayerKind::relu;
    if (s == "conv3x3") return LayerKind::conv3x3;
    if (s == "maxpool2x2") return LayerKind::maxpool2x2;
    if (s == "flatten") return LayerKind::flatten;
    fail(ctx + ": unknown layer kind '" + s + "'");
}

inline json spec_to_json(const ModelSpec& spec) {
    json j;
    j["input"] = spec.input_shape;
    j["layers"] = json::array();
    for (const LayerSpec& l : spec.layers) {
        json jl;
        jl["kind"] = layer_kind_name(l.kind);
        if (l.kind == LayerKind::dense || l.kind == LayerKind::conv3x3) {
            jl["in"] = l.in;
            jl["out"] = l.out;
            jl["init"] = {{"scheme", init_scheme_name(l.init.scheme)}, {"seed", l.init.seed}};
        }
        j["layers"].push_back(jl);
    }
    return j;
}

namespace detail {

inline const json& jfield(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    require(it != j.end(), ctx + "." + key + ": missing");
    return *it;
}

} // namespace detail

inline ModelSpec spec_from_json(const json& j, const std::string& ctx) {
    require(j.is_object(), ctx + ": must be an object");
    ModelSpec spec;
    const json& input = detail::jfield(j, "input", ctx);
    require(input.is_array() && !input.empty(), ctx + ".input: must be a non-empty array");
    for (const auto& e : input) {
        require(e.is_number_integer(), ctx + ".input: extents must be integers");
        spec.input_shape.push_back(e.get<int>());
    }
    const json& layers = detail::jfield(j, "layers", ctx);
    require(layers.is_array() && !layers.empty(), ctx + ".layers: must be a non-empty array");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string lctx = ctx + ".layers[" + std::to_string(i) + "]";
        const json& jl = layers[i];
        require(jl.is_object(), lctx + ": must be an object");
        LayerSpec l;
        l.kind = layer_kind_from(detail::jfield(jl, "kind", lctx).get<std::string>(), lctx + ".kind");
        if (l.kind == LayerKind::dense || l.kind == LayerKind::conv3x3) {
            l.in = detail::jfield(jl, "in", lctx).get<int>();
            l.out = detail::jfield(jl, "out", lctx).get<int>();
            if (jl.contains("init")) {
                const json& ji = jl["init"];
                if (ji.contains("scheme"))
                    l.init.scheme = init_scheme_from(ji["scheme"].get<std::string>(), lctx + ".init.scheme");
                if (ji.contains("seed")) l.init.seed = ji["seed"].get<std::uint64_t>();
            }
        }
        spec.layers.push_back(l);
    }
    validate_spec(spec);
    return spec;
}

} // namespace slkd
