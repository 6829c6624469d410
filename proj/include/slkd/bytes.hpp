#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "slkd/common.hpp"

namespace slkd {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    require(f != nullptr, "cannot open " + path);
    std::fseek(f, 0, SEEK_END);
    const long sz = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(sz < 0 ? 0 : sz));
    if (!buf.empty() && std::fread(buf.data(), 1, buf.size(), f) != buf.size()) {
        std::fclose(f);
        fail("short read on " + path);
    }
    std::fclose(f);
    return buf;
}

// write to <path>.tmp then rename, so readers never see a partial file
inline void write_file_bytes(const std::string& path, const std::uint8_t* data, std::size_t len) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    require(f != nullptr, "cannot open " + tmp + " for writing");
    if (len > 0 && std::fwrite(data, 1, len, f) != len) {
        std::fclose(f);
        std::remove(tmp.c_str());
        fail("short write on " + tmp);
    }
    if (std::fclose(f) != 0) {
        std::remove(tmp.c_str());
        fail("close failed on " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        fail("rename " + tmp + " -> " + path + ": " + ec.message());
    }
}

inline void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    write_file_bytes(path, bytes.data(), bytes.size());
}

inline void write_text_file(const std::string& path, const std::string& text) {
    write_file_bytes(path, reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

inline std::string read_text_file(const std::string& path) {
    auto b = read_file_bytes(path);
    return std::string(b.begin(), b.end());
}

// Append-only byte sink with explicit endianness.
struct ByteWriter {
    std::vector<std::uint8_t> buf;

    void u8(std::uint8_t v) { buf.push_back(v); }
    void u16le(std::uint16_t v) {
        buf.push_back(static_cast<std::uint8_t>(v & 0xff));
        buf.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32le(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void u64le(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void u32be(std::uint32_t v) {
        for (int i = 3; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void f32le(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32le(bits);
    }
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf.insert(buf.end(), b, b + n);
    }
    void str(const std::string& s) {
        u32le(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
};

// Bounds-checked cursor over an in-memory byte buffer; overruns raise with
// the caller-supplied context string.
struct ByteReader {
    const std::uint8_t* p = nullptr;
    std::size_t len = 0;
    std::size_t pos = 0;
    std::string ctx;

    ByteReader(const std::vector<std::uint8_t>& b, std::string context)
        : p(b.data()), len(b.size()), ctx(std::move(context)) {}

    std::size_t remaining() const { return len - pos; }

    void need(std::size_t n) {
        if (remaining() < n) fail(ctx);
    }
    std::uint8_t u8() {
        need(1);
        return p[pos++];
    }
    std::uint16_t u16le() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(p[pos] | (p[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32le() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | p[pos + static_cast<std::size_t>(i)];
        pos += 4;
        return v;
    }
    std::uint64_t u64le() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | p[pos + static_cast<std::size_t>(i)];
        pos += 8;
        return v;
    }
    std::uint32_t u32be() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | p[pos + static_cast<std::size_t>(i)];
        pos += 4;
        return v;
    }
    float f32le() {
        const std::uint32_t bits = u32le();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32le();
        need(n);
        std::string s(reinterpret_cast<const char*>(p + pos), n);
        pos += n;
        return s;
    }
    void raw(void* out, std::size_t n) {
        need(n);
        std::memcpy(out, p + pos, n);
        pos += n;
    }
};

} // namespace slkd
