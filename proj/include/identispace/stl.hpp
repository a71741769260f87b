#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "identispace/mesh.hpp"

namespace identispace {

class StlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StlMode { Binary, Ascii };

inline constexpr std::string_view kStlHeaderTag = "identispace-forge";
inline constexpr std::size_t kStlHeaderSize = 80;
inline constexpr std::size_t kStlTriangleSize = 50;

constexpr std::uint64_t binary_stl_size(std::uint64_t triangles)
{
    return kStlHeaderSize + 4 + kStlTriangleSize * triangles;
}

namespace detail {

inline void put_u32(char* out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b) out[b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
}

inline std::uint32_t get_u32(const char* in)
{
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[b])) << (8 * b);
    return v;
}

inline void put_f32(char* out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }
inline float get_f32(const char* in) { return std::bit_cast<float>(get_u32(in)); }

inline Vec3 facet_normal(const Vec3& a, const Vec3& b, const Vec3& c)
{
    return normalized(cross(b - a, c - a));
}

inline void check_writable(const TriangleMesh& mesh)
{
    if (mesh.triangles.size() >= (std::uint64_t{1} << 32))
        throw StlError("too many triangles for STL (limit is 2^32 - 1)");
    for (const Vec3& v : mesh.vertices)
        if (!is_finite(v)) throw StlError("mesh has a non-finite vertex");
    for (const Triangle& t : mesh.triangles)
        for (auto idx : t)
            if (idx >= mesh.vertices.size()) throw StlError("triangle index out of range");
}

inline void append_number(std::string& out, float f)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, f, std::chars_format::general, 9);
    out.append(buf, res.ptr);
}

}  // namespace detail

/// Binary layout: 80-byte header, u32 count, then per facet 12 f32 (normal,
/// three vertices) and a zero u16 attribute. All little-endian.
inline void write_stl(std::ostream& os, const TriangleMesh& mesh, StlMode mode = StlMode::Binary)
{
    detail::check_writable(mesh);
    if (mode == StlMode::Binary) {
        char header[kStlHeaderSize + 4] = {};
        std::memcpy(header, kStlHeaderTag.data(), kStlHeaderTag.size());
        detail::put_u32(header + kStlHeaderSize, static_cast<std::uint32_t>(mesh.triangles.size()));
        os.write(header, sizeof header);

        constexpr std::size_t kBatch = 4096;
        std::string buf(kBatch * kStlTriangleSize, '\0');
        std::size_t fill = 0;
        for (const Triangle& t : mesh.triangles) {
            const Vec3& a = mesh.vertices[t[0]];
            const Vec3& b = mesh.vertices[t[1]];
            const Vec3& c = mesh.vertices[t[2]];
            const Vec3 n = detail::facet_normal(a, b, c);
            char* rec = buf.data() + fill * kStlTriangleSize;
            int slot = 0;
            for (const Vec3* v : {&n, &a, &b, &c}) {
                detail::put_f32(rec + 4 * slot++, static_cast<float>(v->x));
                detail::put_f32(rec + 4 * slot++, static_cast<float>(v->y));
                detail::put_f32(rec + 4 * slot++, static_cast<float>(v->z));
            }
            rec[48] = rec[49] = 0;
            if (++fill == kBatch) {
                os.write(buf.data(), static_cast<std::streamsize>(fill * kStlTriangleSize));
                fill = 0;
            }
        }
        os.write(buf.data(), static_cast<std::streamsize>(fill * kStlTriangleSize));
    } else {
        std::string out;
        out.append("solid ").append(kStlHeaderTag).append("\n");
        auto triple = [&out](const Vec3& v) {
            detail::append_number(out, static_cast<float>(v.x));
            out += ' ';
            detail::append_number(out, static_cast<float>(v.y));
            out += ' ';
            detail::append_number(out, static_cast<float>(v.z));
            out += '\n';
        };
        for (const Triangle& t : mesh.triangles) {
            const Vec3& a = mesh.vertices[t[0]];
            const Vec3& b = mesh.vertices[t[1]];
            const Vec3& c = mesh.vertices[t[2]];
            out += "  facet normal ";
            triple(detail::facet_normal(a, b, c));
            out += "    outer loop\n";
            for (const Vec3* v : {&a, &b, &c}) {
                out += "      vertex ";
                triple(*v);
            }
            out += "    endloop\n  endfacet\n";
            if (out.size() > (1u << 20)) {
                os.write(out.data(), static_cast<std::streamsize>(out.size()));
                out.clear();
            }
        }
        out.append("endsolid ").append(kStlHeaderTag).append("\n");
        os.write(out.data(), static_cast<std::streamsize>(out.size()));
    }
    if (!os) throw StlError("failed writing STL stream");
}

inline std::string write_stl(const TriangleMesh& mesh, StlMode mode = StlMode::Binary)
{
    std::ostringstream os(std::ios::binary);
    write_stl(os, mesh, mode);
    return std::move(os).str();
}

namespace detail {

/// Deduplicates vertices by the exact bit pattern of their float coordinates.
class VertexWelder {
public:
    explicit VertexWelder(TriangleMesh& mesh, std::size_t expected) : mesh_(mesh) { index_.reserve(expected); }

    std::uint32_t add(float x, float y, float z)
    {
        const Key key{std::bit_cast<std::uint32_t>(x), std::bit_cast<std::uint32_t>(y),
                      std::bit_cast<std::uint32_t>(z)};
        auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(mesh_.vertices.size()));
        if (inserted) mesh_.vertices.push_back({x, y, z});
        return it->second;
    }

private:
    struct Key {
        std::uint32_t x, y, z;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept
        {
            std::uint64_t h = 0x9E3779B97F4A7C15ull;
            for (std::uint32_t w : {k.x, k.y, k.z}) {
                h ^= w;
                h *= 0xBF58476D1CE4E5B9ull;
                h ^= h >> 31;
            }
            return static_cast<std::size_t>(h);
        }
    };
    TriangleMesh& mesh_;
    std::unordered_map<Key, std::uint32_t, KeyHash> index_;
};

inline TriangleMesh read_binary_stl(std::string_view bytes)
{
    if (bytes.size() < kStlHeaderSize + 4)
        throw StlError("truncated STL: " + std::to_string(bytes.size()) + " bytes is shorter than the 84-byte header");
    const std::uint64_t count = get_u32(bytes.data() + kStlHeaderSize);
    const std::uint64_t expected = binary_stl_size(count);
    if (bytes.size() < expected)
        throw StlError("truncated STL: header declares " + std::to_string(count) + " triangles (" +
                       std::to_string(expected) + " bytes) but file has " + std::to_string(bytes.size()));
    if (bytes.size() != expected)
        throw StlError("STL length mismatch: header declares " + std::to_string(count) + " triangles (" +
                       std::to_string(expected) + " bytes) but file has " + std::to_string(bytes.size()));

    TriangleMesh mesh;
    mesh.triangles.reserve(count);
    mesh.component_ids.assign(count, 0);
    VertexWelder welder(mesh, count / 2 + 16);
    const char* rec = bytes.data() + kStlHeaderSize + 4;
    for (std::uint64_t f = 0; f < count; ++f, rec += kStlTriangleSize) {
        Triangle t{};
        for (int v = 0; v < 3; ++v) {
            const char* p = rec + 12 + 12 * v;
            t[v] = welder.add(get_f32(p), get_f32(p + 4), get_f32(p + 8));
        }
        mesh.triangles.push_back(t);
    }
    return mesh;
}

class AsciiTokens {
public:
    explicit AsciiTokens(std::string_view text) : text_(text) {}

    std::string_view next()
    {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void skip_line()
    {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }

    void expect(std::string_view word)
    {
        const auto tok = next();
        if (tok != word)
            throw StlError("malformed ASCII STL: expected '" + std::string(word) + "', found '" +
                           std::string(tok) + "'");
    }

    float number()
    {
        const auto tok = next();
        float value = 0.0f;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw StlError("malformed ASCII STL: bad number '" + std::string(tok) + "'");
        return value;
    }

private:
    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
    std::string_view text_;
    std::size_t pos_{0};
};

inline TriangleMesh read_ascii_stl(std::string_view text)
{
    AsciiTokens tokens(text);
    tokens.expect("solid");
    tokens.skip_line();
    TriangleMesh mesh;
    VertexWelder welder(mesh, 1024);
    for (;;) {
        const auto tok = tokens.next();
        if (tok == "endsolid") break;
        if (tok != "facet")
            throw StlError(tok.empty() ? "malformed ASCII STL: missing 'endsolid'"
                                       : "malformed ASCII STL: unexpected '" + std::string(tok) + "'");
        tokens.expect("normal");
        for (int k = 0; k < 3; ++k) tokens.number();
        tokens.expect("outer");
        tokens.expect("loop");
        Triangle t{};
        for (int v = 0; v < 3; ++v) {
            tokens.expect("vertex");
            const float x = tokens.number();
            const float y = tokens.number();
            const float z = tokens.number();
            t[v] = welder.add(x, y, z);
        }
        tokens.expect("endloop");
        tokens.expect("endfacet");
        mesh.triangles.push_back(t);
    }
    mesh.component_ids.assign(mesh.triangles.size(), 0);
    return mesh;
}

}  // namespace detail

/// Parses binary or ASCII STL. Text starting with "solid" is tried as ASCII
/// first; binary files whose header happens to start with "solid" still load
/// when their length matches the declared count.
inline TriangleMesh read_stl(std::string_view bytes)
{
    if (bytes.starts_with("solid")) {
        try {
            return detail::read_ascii_stl(bytes);
        } catch (const StlError&) {
            if (bytes.size() >= kStlHeaderSize + 4 &&
                bytes.size() == binary_stl_size(detail::get_u32(bytes.data() + kStlHeaderSize)))
                return detail::read_binary_stl(bytes);
            throw;
        }
    }
    return detail::read_binary_stl(bytes);
}

inline TriangleMesh read_stl_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StlError("cannot open '" + path + "'");
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::string bytes(size, '\0');
    if (!in.read(bytes.data(), static_cast<std::streamsize>(size))) throw StlError("failed reading '" + path + "'");
    return read_stl(bytes);
}

inline void write_stl_file(const std::string& path, const TriangleMesh& mesh, StlMode mode = StlMode::Binary)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StlError("cannot open '" + path + "' for writing");
    write_stl(out, mesh, mode);
    out.close();
    if (!out) throw StlError("failed writing '" + path + "'");
}

}  // namespace identispace
