#pragma once

// Command-line front end. Kept header-only so the test suite can drive it
// in-process; tools/main.cpp is a thin wrapper.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "identispace/identispace.hpp"

namespace identispace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // ran, but the mesh is not watertight
inline constexpr int kExitUsage = 2;    // bad arguments, config or input file

inline constexpr const char* kConfigEnv = "IDENTISPACE_CONFIG";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;
    WireframeSpec wireframe{};
    std::string output;  // empty: "<surface>.stl"
    bool ascii{false};
    SpaceName space{SpaceName::Sphere};
    std::optional<int> dim;
    double sample_i{0.0};
    double sample_j{0.0};
    std::string input_path;
    bool json{false};
};

// ---------------------------------------------------------------------------
// Value parsing, locale independent.

inline long long parse_integer(std::string_view key, std::string_view text)
{
    long long v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty())
        throw UsageError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
    return v;
}

inline int parse_int(std::string_view key, std::string_view text)
{
    const long long v = parse_integer(key, text);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw UsageError(std::string(key) + ": value out of range");
    return static_cast<int>(v);
}

inline double parse_real(std::string_view key, std::string_view text)
{
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty())
        throw UsageError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

inline bool parse_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw UsageError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

inline std::string format_number(double v)
{
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
    return std::string(buf, res.ptr);
}

inline std::string format_vec(const Vec3& v)
{
    return format_number(v.x) + " " + format_number(v.y) + " " + format_number(v.z);
}

// ---------------------------------------------------------------------------
// Settable keys. Config files and command-line flags share these names.

using Setter = std::function<void(RunConfig&, std::string_view)>;

inline const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"surface", [](RunConfig& c, std::string_view v) {
             try {
                 c.wireframe.surface.kind = parse_surface_kind(v);
             } catch (const std::invalid_argument& e) {
                 throw UsageError(e.what());
             }
         }},
        {"outer-radius", [](RunConfig& c, std::string_view v) { c.wireframe.surface.outer_radius = parse_real("outer-radius", v); }},
        {"inner-radius", [](RunConfig& c, std::string_view v) { c.wireframe.surface.inner_radius = parse_real("inner-radius", v); }},
        {"lat-ribs", [](RunConfig& c, std::string_view v) { c.wireframe.surface.lat_ribs = parse_int("lat-ribs", v); }},
        {"long-ribs", [](RunConfig& c, std::string_view v) { c.wireframe.surface.long_ribs = parse_int("long-ribs", v); }},
        {"amplitude", [](RunConfig& c, std::string_view v) { c.wireframe.surface.amplitude = parse_real("amplitude", v); }},
        {"outer-density", [](RunConfig& c, std::string_view v) { c.wireframe.outer_density = parse_int("outer-density", v); }},
        {"inner-density", [](RunConfig& c, std::string_view v) { c.wireframe.inner_density = parse_int("inner-density", v); }},
        {"thickness", [](RunConfig& c, std::string_view v) { c.wireframe.thickness = parse_real("thickness", v); }},
        {"resolution", [](RunConfig& c, std::string_view v) { c.wireframe.capsule_resolution = parse_int("resolution", v); }},
        {"legacy-overshoot", [](RunConfig& c, std::string_view v) { c.wireframe.legacy_overshoot = parse_bool("legacy-overshoot", v); }},
        {"output", [](RunConfig& c, std::string_view v) { c.output = std::string(v); }},
        {"ascii", [](RunConfig& c, std::string_view v) { c.ascii = parse_bool("ascii", v); }},
        {"space", [](RunConfig& c, std::string_view v) {
             try {
                 c.space = parse_space_name(v);
             } catch (const std::invalid_argument& e) {
                 throw UsageError(e.what());
             }
         }},
        {"dim", [](RunConfig& c, std::string_view v) { c.dim = parse_int("dim", v); }},
    };
    return table;
}

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Flat `key = value` lines; `#` starts a comment. Unknown keys are rejected.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text,
                                                                         std::string_view origin)
{
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) throw UsageError(where + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!setters().contains(key)) throw UsageError(where + ": unknown key '" + key + "'");
        entries.emplace_back(key, value);
    }
    return entries;
}

inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text, path);
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        check(cfg.wireframe);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const WireframeSpec& spec = cfg.wireframe;
    const auto plan = plan_segments(spec);
    const TriangleMesh mesh = build_wireframe(spec, plan);
    const MeshReport report = validate(mesh);
    const std::string path = cfg.output.empty() ? std::string(to_string(spec.surface.kind)) + ".stl" : cfg.output;

    try {
        write_stl_file(path, mesh, cfg.ascii ? StlMode::Ascii : StlMode::Binary);
    } catch (const StlError& e) {
        throw UsageError(e.what());
    }

    std::size_t closed = 0, manifold = 0, chi_two = 0;
    for (std::size_t c = 0; c < report.component_count; ++c) {
        closed += report.watertight_per_component[c];
        manifold += report.edge_manifold_per_component[c];
        chi_two += report.euler_characteristic_per_component[c] == 2;
    }
    const bool ok = report.all_watertight();
    out << "surface          " << to_string(spec.surface.kind) << '\n'
        << "segments         " << plan.size() << '\n'
        << "sphere capsules  " << count_sphere_capsules(plan) << '\n'
        << "triangles        " << report.triangle_count << '\n'
        << "components       " << report.component_count << '\n'
        << "bbox min         " << format_vec(report.bbox_min) << '\n'
        << "bbox max         " << format_vec(report.bbox_max) << '\n'
        << "closed           " << closed << '/' << report.component_count << '\n'
        << "edge-manifold    " << manifold << '/' << report.component_count << '\n'
        << "euler 2          " << chi_two << '/' << report.component_count << '\n'
        << "watertight       " << (ok ? "yes" : "no") << '\n'
        << "output           " << path << " (" << std::filesystem::file_size(path) << " bytes, "
        << (cfg.ascii ? "ascii" : "binary") << ")\n";
    if (!ok) {
        err << "warning: " << (report.component_count - closed)
            << " component(s) are not watertight; file written anyway\n";
        return kExitInvalid;
    }
    return kExitOk;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out)
{
    TriangleMesh mesh;
    try {
        mesh = read_stl_file(cfg.input_path);
    } catch (const StlError& e) {
        throw UsageError(cfg.input_path + ": " + e.what());
    }
    const MeshReport report = validate(mesh);
    std::size_t closed = 0, manifold = 0;
    for (std::size_t c = 0; c < report.component_count; ++c) {
        closed += report.watertight_per_component[c];
        manifold += report.edge_manifold_per_component[c];
    }
    const bool ok = report.all_watertight();

    if (cfg.json) {
        nlohmann::json j;
        j["file"] = cfg.input_path;
        j["triangle_count"] = report.triangle_count;
        j["component_count"] = report.component_count;
        j["watertight"] = ok;
        j["watertight_per_component"] = report.watertight_per_component;
        j["edge_manifold_per_component"] = report.edge_manifold_per_component;
        j["euler_characteristic_per_component"] = report.euler_characteristic_per_component;
        j["boundary_edge_count"] = report.open_edge_count;
        j["nonmanifold_edge_count"] = report.nonmanifold_edge_count;
        j["degenerate_count"] = report.degenerate_count;
        j["bbox_min"] = {report.bbox_min.x, report.bbox_min.y, report.bbox_min.z};
        j["bbox_max"] = {report.bbox_max.x, report.bbox_max.y, report.bbox_max.z};
        out << j.dump(2) << '\n';
    } else {
        out << "file                " << cfg.input_path << '\n'
            << "triangles           " << report.triangle_count << '\n'
            << "components          " << report.component_count << '\n'
            << "closed              " << closed << '/' << report.component_count << '\n'
            << "edge-manifold       " << manifold << '/' << report.component_count << '\n'
            << "boundary edges      " << report.open_edge_count << '\n'
            << "non-manifold edges  " << report.nonmanifold_edge_count << '\n'
            << "degenerate          " << report.degenerate_count << '\n'
            << "bbox min            " << format_vec(report.bbox_min) << '\n'
            << "bbox max            " << format_vec(report.bbox_max) << '\n'
            << "watertight          " << (ok ? "yes" : "no") << '\n';
    }
    return ok ? kExitOk : kExitInvalid;
}

inline int cmd_homology(const RunConfig& cfg, std::ostream& out)
{
    const ChainComplex complex = builtin_complex(cfg.space);
    int lo = 0, hi = complex.dimension();
    if (cfg.dim) {
        if (*cfg.dim < 0 || *cfg.dim > complex.dimension())
            throw UsageError("dim must be in [0, " + std::to_string(complex.dimension()) + "] for " +
                             std::string(to_string(cfg.space)));
        lo = hi = *cfg.dim;
    }
    for (int k = lo; k <= hi; ++k)
        out << "H_" << k << '(' << to_string(cfg.space) << ") = " << format_group(homology(complex, k)) << '\n';
    return kExitOk;
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& out)
{
    try {
        check(cfg.wireframe.surface);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    out << format_vec(surface_point(cfg.sample_i, cfg.sample_j, cfg.wireframe.surface)) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

/// Runs the CLI on `args` (without the program name). Precedence is
/// command-line flags, then the config file, then built-in defaults.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"identispace: printable wireframes and homology of the square's identification spaces",
                 "identispace"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "key = value file (default: $" + std::string(kConfigEnv) + ")");

    std::map<std::string, std::string> raw;
    bool ascii_flag = false, overshoot_flag = false;
    std::map<CLI::App*, std::vector<std::string>> keys_of;

    auto value = [&](CLI::App* sub, const std::string& key, const std::string& help) {
        sub->add_option("--" + key, raw[key], help);
        keys_of[sub].push_back(key);
    };
    auto surface_opts = [&](CLI::App* sub) {
        value(sub, "surface", "torus | klein | roman");
        value(sub, "outer-radius", "R in mm");
        value(sub, "inner-radius", "r in mm");
        value(sub, "lat-ribs", "grid lines in i");
        value(sub, "long-ribs", "grid lines in j");
        value(sub, "amplitude", "Klein fibre wobble");
    };

    auto* gen = app.add_subcommand("generate", "build a wireframe, validate it and write STL");
    surface_opts(gen);
    value(gen, "outer-density", "capsules per i step");
    value(gen, "inner-density", "capsules per j step");
    value(gen, "thickness", "capsule radius in mm");
    value(gen, "resolution", "capsule tessellation sides");
    value(gen, "output", "STL path (default <surface>.stl)");
    gen->add_flag("--ascii", ascii_flag, "write ASCII STL");
    gen->add_flag("--legacy-overshoot", overshoot_flag, "one extra capsule per grid cell, as the original loop bounds");

    RunConfig cfg;
    auto* val = app.add_subcommand("validate", "check an STL file for watertightness");
    val->add_option("path", cfg.input_path, "STL file")->required();
    val->add_flag("--json", cfg.json, "structured output");

    auto* hom = app.add_subcommand("homology", "integer homology of a built-in space");
    value(hom, "space", "circle | sphere | torus | klein | rp2");
    value(hom, "dim", "single degree");

    auto* smp = app.add_subcommand("sample", "evaluate a parametrization at grid coordinates");
    surface_opts(smp);
    std::string si, sj;
    smp->add_option("i", si, "grid coordinate i")->required();
    smp->add_option("j", sj, "grid coordinate j")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.subcommand = sub->get_name();

        if (config_path.empty())
            if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
        if (!config_path.empty())
            for (const auto& [key, text] : read_config_file(config_path)) setters().at(key)(cfg, text);

        for (const std::string& key : keys_of[sub])
            if (sub->get_option("--" + key)->count() > 0) setters().at(key)(cfg, raw[key]);
        if (sub == gen) {
            if (ascii_flag) cfg.ascii = true;
            if (overshoot_flag) cfg.wireframe.legacy_overshoot = true;
            return cmd_generate(cfg, out, err);
        }
        if (sub == val) return cmd_validate(cfg, out);
        if (sub == hom) return cmd_homology(cfg, out);
        cfg.sample_i = parse_real("i", si);
        cfg.sample_j = parse_real("j", sj);
        return cmd_sample(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace identispace::cli
