#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slkd/bytes.hpp"
#include "slkd/dataset.hpp"
#include "slkd/optim.hpp"
#include "slkd/spec_json.hpp"

// Checkpoint container (all multi-byte integers little-endian unless noted):
//
//   offset 0   magic "SLKD" (4 bytes)
//   offset 4   version        u16   (currently 1)
//   offset 6   role           u8    (0 teacher, 1 student, 2 snapshot, 3 dataset)
//   offset 7   optimizer kind u8    (0 none, 1 sgd, 2 adam)
//   offset 8   adam step      u64   (0 unless kind == adam)
//   offset 16  meta JSON      u32 length + UTF-8 bytes
//              spec JSON      u32 length + UTF-8 bytes
//              tensor count   u32
//              per tensor:    name (u32 length + bytes), rank u8,
//                             extents (rank × u32), data (numel × f32)
//   trailer    crc32          u32 over every preceding byte
//
// Identical inputs serialize to identical bytes; the checkpoint id is the
// 64-bit FNV-1a of the whole file, in hex.

namespace slkd {

constexpr std::uint16_t kCheckpointVersion = 1;
constexpr std::uint8_t kRoleDatasetTag = 3;

enum class OptKind : std::uint8_t { none = 0, sgd = 1, adam = 2 };

inline const char* opt_kind_name(OptKind k) {
    switch (k) {
        case OptKind::none: return "none";
        case OptKind::sgd: return "sgd";
        case OptKind::adam: return "adam";
    }
    return "?";
}

struct OptimizerState {
    OptKind kind = OptKind::none;
    SgdState sgd;
    AdamState adam;
};

inline std::uint32_t crc32(const std::uint8_t* p, std::size_t n) {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i) c = table[(c ^ p[i]) & 0xffu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

inline std::uint32_t crc32(const std::vector<std::uint8_t>& b) { return crc32(b.data(), b.size()); }

namespace detail {

inline void put_tensor(ByteWriter& w, const std::string& name, const Tensor& t) {
    w.str(name);
    w.u8(static_cast<std::uint8_t>(t.rank()));
    for (int e : t.shape) w.u32le(static_cast<std::uint32_t>(e));
    for (float v : t.data) w.f32le(v);
}

struct NamedTensor {
    std::string name;
    Tensor t;
};

inline NamedTensor get_tensor(ByteReader& r) {
    NamedTensor nt;
    nt.name = r.str();
    const int rank = r.u8();
    require(rank >= 1 && rank <= 4, "shape inconsistency in checkpoint: tensor '" + nt.name + "' rank " +
                                        std::to_string(rank));
    std::vector<int> shape(static_cast<std::size_t>(rank));
    for (int& e : shape) {
        const std::uint32_t v = r.u32le();
        require(v >= 1 && v <= 0x7fffffffu,
                "shape inconsistency in checkpoint: tensor '" + nt.name + "' has bad extent");
        e = static_cast<int>(v);
    }
    const std::int64_t numel = shape_numel(shape);
    require(numel >= 1 && static_cast<std::uint64_t>(numel) * 4 <= r.remaining(),
            "shape inconsistency in checkpoint: tensor '" + nt.name + "' data exceeds the file");
    nt.t.shape = shape;
    nt.t.data.resize(static_cast<std::size_t>(numel));
    for (float& v : nt.t.data) v = r.f32le();
    return nt;
}

inline std::vector<std::string> model_tensor_names(const ModelSpec& spec) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerKind k = spec.layers[i].kind;
        if (k == LayerKind::dense || k == LayerKind::conv3x3) {
            names.push_back("layer" + std::to_string(i) + ".w");
            names.push_back("layer" + std::to_string(i) + ".b");
        }
    }
    return names;
}

} // namespace detail

inline std::vector<std::uint8_t> serialize_checkpoint(const Model& model, const OptimizerState& opt,
                                                      const json& meta) {
    for (const Tensor* t : model.param_tensors())
        check_finite(*t, "checkpoint: model parameters");
    ByteWriter w;
    w.bytes("SLKD", 4);
    w.u16le(kCheckpointVersion);
    w.u8(static_cast<std::uint8_t>(model.role));
    w.u8(static_cast<std::uint8_t>(opt.kind));
    w.u64le(opt.kind == OptKind::adam ? opt.adam.step : 0);
    w.str(meta.is_null() ? std::string("{}") : meta.dump());
    w.str(spec_to_json(model.spec).dump());

    const auto names = detail::model_tensor_names(model.spec);
    const auto params = model.param_tensors();
    require(names.size() == params.size(), "checkpoint: parameter bookkeeping mismatch");

    std::vector<std::pair<std::string, const Tensor*>> records;
    for (std::size_t i = 0; i < params.size(); ++i) records.emplace_back(names[i], params[i]);
    if (opt.kind == OptKind::sgd) {
        require(opt.sgd.velocity.size() == params.size() || opt.sgd.velocity.empty(),
                "checkpoint: sgd state does not match parameter count");
        for (std::size_t i = 0; i < opt.sgd.velocity.size(); ++i)
            records.emplace_back("opt.vel." + std::to_string(i), &opt.sgd.velocity[i]);
    } else if (opt.kind == OptKind::adam) {
        require((opt.adam.m.size() == params.size() && opt.adam.v.size() == params.size()) ||
                    (opt.adam.m.empty() && opt.adam.v.empty()),
                "checkpoint: adam state does not match parameter count");
        for (std::size_t i = 0; i < opt.adam.m.size(); ++i)
            records.emplace_back("opt.m." + std::to_string(i), &opt.adam.m[i]);
        for (std::size_t i = 0; i < opt.adam.v.size(); ++i)
            records.emplace_back("opt.v." + std::to_string(i), &opt.adam.v[i]);
    }

    w.u32le(static_cast<std::uint32_t>(records.size()));
    for (const auto& [name, t] : records) detail::put_tensor(w, name, *t);
    w.u32le(crc32(w.buf));
    return w.buf;
}

inline std::string checkpoint_id(const std::vector<std::uint8_t>& bytes) {
    return hex64(fnv1a64(bytes.data(), bytes.size()));
}

inline std::string save_checkpoint(const Model& model, const OptimizerState& opt, const json& meta,
                                   const std::string& path) {
    const auto bytes = serialize_checkpoint(model, opt, meta);
    write_file_bytes(path, bytes);
    return checkpoint_id(bytes);
}

struct Checkpoint {
    Model model;
    OptimizerState opt;
    json meta;
    std::string id;
};

inline Checkpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes, const std::string& where) {
    require(bytes.size() >= 4, "shape inconsistency in checkpoint " + where + ": truncated before magic");
    require(std::memcmp(bytes.data(), "SLKD", 4) == 0, "bad magic in checkpoint " + where);

    ByteReader r(bytes, "shape inconsistency in checkpoint " + where + ": declared sizes overrun the file");
    r.pos = 4;
    const std::uint16_t version = r.u16le();
    require(version == kCheckpointVersion, "unsupported version " + std::to_string(version) + " in checkpoint " +
                                               where + " (this build reads version " +
                                               std::to_string(kCheckpointVersion) + ")");
    const std::uint8_t role_tag = r.u8();
    require(role_tag <= kRoleDatasetTag, "shape inconsistency in checkpoint " + where + ": unknown role tag");
    require(role_tag != kRoleDatasetTag,
            "checkpoint " + where + " holds a dataset, not a model (use the dataset loader)");
    const std::uint8_t opt_tag = r.u8();
    require(opt_tag <= 2, "shape inconsistency in checkpoint " + where + ": unknown optimizer tag");
    const std::uint64_t adam_step = r.u64le();
    const std::string meta_text = r.str();
    const std::string spec_text = r.str();
    const std::uint32_t tensor_count = r.u32le();
    std::vector<detail::NamedTensor> records;
    records.reserve(tensor_count);
    for (std::uint32_t i = 0; i < tensor_count; ++i) records.push_back(detail::get_tensor(r));
    require(r.remaining() == 4,
            "shape inconsistency in checkpoint " + where + ": declared shapes do not account for the payload");
    const std::uint32_t stored_crc = r.u32le();
    const std::uint32_t computed = crc32(bytes.data(), bytes.size() - 4);
    require(stored_crc == computed, "checksum mismatch in checkpoint " + where);

    Checkpoint out;
    out.id = checkpoint_id(bytes);
    try {
        out.meta = json::parse(meta_text);
    } catch (const json::exception& e) {
        fail("checkpoint " + where + ": meta JSON unreadable: " + e.what());
    }
    ModelSpec spec;
    try {
        spec = spec_from_json(json::parse(spec_text), "checkpoint " + where + " spec");
    } catch (const json::exception& e) {
        fail("checkpoint " + where + ": spec JSON unreadable: " + e.what());
    }
    out.model = build_model<float>(spec, static_cast<Role>(role_tag));

    const auto names = detail::model_tensor_names(spec);
    auto params = out.model.param_tensors();
    out.opt.kind = static_cast<OptKind>(opt_tag);
    std::size_t want = names.size();
    if (out.opt.kind == OptKind::sgd)
        want += names.size();
    else if (out.opt.kind == OptKind::adam) {
        want += 2 * names.size();
        out.opt.adam.step = adam_step;
    }
    require(records.size() == want || records.size() == names.size(),
            "shape inconsistency in checkpoint " + where + ": " + std::to_string(records.size()) +
                " tensors, expected " + std::to_string(want));

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (i < names.size()) {
            require(rec.name == names[i], "shape inconsistency in checkpoint " + where + ": tensor '" + rec.name +
                                              "' where '" + names[i] + "' expected");
            require(rec.t.shape == params[i]->shape,
                    "shape inconsistency in checkpoint " + where + ": tensor '" + rec.name + "' is " +
                        shape_str(rec.t.shape) + ", spec wants " + shape_str(params[i]->shape));
            params[i]->data = rec.t.data;
        } else {
            const std::size_t k = i - names.size();
            const std::size_t slot = k % names.size();
            require(rec.t.shape == params[slot]->shape,
                    "shape inconsistency in checkpoint " + where + ": optimizer tensor '" + rec.name + "' is " +
                        shape_str(rec.t.shape) + ", parameters want " + shape_str(params[slot]->shape));
            if (out.opt.kind == OptKind::sgd)
                out.opt.sgd.velocity.push_back(rec.t);
            else if (k < names.size())
                out.opt.adam.m.push_back(rec.t);
            else
                out.opt.adam.v.push_back(rec.t);
        }
    }
    return out;
}

inline Checkpoint load_checkpoint(const std::string& path) {
    return parse_checkpoint(read_file_bytes(path), path);
}

// ---- dataset container (same envelope, role tag 3) --------------------------

inline std::vector<std::uint8_t> serialize_dataset(const Dataset& d) {
    d.validate();
    ByteWriter w;
    w.bytes("SLKD", 4);
    w.u16le(kCheckpointVersion);
    w.u8(kRoleDatasetTag);
    w.u8(0);
    w.u64le(0);
    json meta = {{"kind", "dataset"},
                 {"name", d.name},
                 {"class_count", d.class_count},
                 {"split", split_name(d.split)}};
    w.str(meta.dump());
    w.str(meta.dump()); // spec slot repeats the descriptor for this role
    w.u32le(2);
    detail::put_tensor(w, "images", d.images);
    Tensor labels = Tensor::zeros({d.size()});
    for (int i = 0; i < d.size(); ++i) labels.data[static_cast<std::size_t>(i)] =
        static_cast<float>(d.labels[static_cast<std::size_t>(i)]);
    detail::put_tensor(w, "labels", labels);
    w.u32le(crc32(w.buf));
    return w.buf;
}

inline std::string save_dataset_checkpoint(const Dataset& d, const std::string& path) {
    const auto bytes = serialize_dataset(d);
    write_file_bytes(path, bytes);
    return checkpoint_id(bytes);
}

inline Dataset load_dataset_checkpoint(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    require(bytes.size() >= 4, "shape inconsistency in checkpoint " + path + ": truncated before magic");
    require(std::memcmp(bytes.data(), "SLKD", 4) == 0, "bad magic in checkpoint " + path);
    ByteReader r(bytes, "shape inconsistency in checkpoint " + path + ": declared sizes overrun the file");
    r.pos = 4;
    const std::uint16_t version = r.u16le();
    require(version == kCheckpointVersion,
            "unsupported version " + std::to_string(version) + " in checkpoint " + path);
    const std::uint8_t role_tag = r.u8();
    require(role_tag == kRoleDatasetTag, "checkpoint " + path + " holds a model, not a dataset");
    r.u8();
    r.u64le();
    const std::string meta_text = r.str();
    r.str();
    const std::uint32_t tensor_count = r.u32le();
    require(tensor_count == 2, "shape inconsistency in checkpoint " + path + ": dataset wants 2 tensors, has " +
                                   std::to_string(tensor_count));
    auto images = detail::get_tensor(r);
    auto labels = detail::get_tensor(r);
    require(r.remaining() == 4,
            "shape inconsistency in checkpoint " + path + ": declared shapes do not account for the payload");
    const std::uint32_t stored_crc = r.u32le();
    require(stored_crc == crc32(bytes.data(), bytes.size() - 4), "checksum mismatch in checkpoint " + path);

    json meta;
    try {
        meta = json::parse(meta_text);
    } catch (const json::exception& e) {
        fail("checkpoint " + path + ": meta JSON unreadable: " + e.what());
    }
    Dataset d;
    require(images.name == "images" && labels.name == "labels" && labels.t.rank() == 1,
            "shape inconsistency in checkpoint " + path + ": unexpected dataset tensors");
    d.images = std::move(images.t);
    d.labels.resize(labels.t.data.size());
    for (std::size_t i = 0; i < labels.t.data.size(); ++i) d.labels[i] = static_cast<int>(labels.t.data[i]);
    d.class_count = meta.value("class_count", 0);
    d.name = meta.value("name", std::string("dataset"));
    d.split = meta.value("split", std::string("train")) == "test" ? Split::test : Split::train;
    d.validate();
    return d;
}

} // namespace slkd
