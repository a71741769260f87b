#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace identispace {

/// Point or displacement in millimeters.
struct Vec3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& a)
{
    const double n = norm(a);
    return n > 0.0 ? a * (1.0 / n) : Vec3{};
}

inline bool is_finite(const Vec3& a)
{
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Trig in degrees. Quarter turns are exact so that axis-aligned rotations
// and the u = v = 0 grid points carry no rounding noise.
inline double sin_deg(double deg)
{
    double a = std::fmod(deg, 360.0);
    if (a < 0.0) a += 360.0;
    if (a >= 360.0) a -= 360.0;
    if (a == 0.0 || a == 180.0) return 0.0;
    if (a == 90.0) return 1.0;
    if (a == 270.0) return -1.0;
    return std::sin(a * std::numbers::pi / 180.0);
}

inline double cos_deg(double deg)
{
    double a = std::fmod(deg, 360.0);
    if (a < 0.0) a += 360.0;
    if (a >= 360.0) a -= 360.0;
    if (a == 90.0 || a == 270.0) return 0.0;
    if (a == 0.0) return 1.0;
    if (a == 180.0) return -1.0;
    return std::cos(a * std::numbers::pi / 180.0);
}

/// 3x3 rotation acting on column vectors.
class RotationMatrix {
public:
    using Rows = std::array<std::array<double, 3>, 3>;

    constexpr RotationMatrix() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}
    constexpr explicit RotationMatrix(const Rows& rows) : m_(rows) {}

    constexpr double operator()(int r, int c) const { return m_[r][c]; }
    constexpr const Rows& rows() const { return m_; }

    constexpr Vec3 operator*(const Vec3& v) const
    {
        return {m_[0][0] * v.x + m_[0][1] * v.y + m_[0][2] * v.z,
                m_[1][0] * v.x + m_[1][1] * v.y + m_[1][2] * v.z,
                m_[2][0] * v.x + m_[2][1] * v.y + m_[2][2] * v.z};
    }

    constexpr RotationMatrix operator*(const RotationMatrix& o) const
    {
        Rows out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out[r][c] = m_[r][0] * o.m_[0][c] + m_[r][1] * o.m_[1][c] + m_[r][2] * o.m_[2][c];
        return RotationMatrix(out);
    }

    constexpr RotationMatrix transposed() const
    {
        Rows out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out[r][c] = m_[c][r];
        return RotationMatrix(out);
    }

    constexpr double determinant() const
    {
        return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
               m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
               m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
    }

private:
    Rows m_;
};

inline RotationMatrix rotation_x(double deg)
{
    const double c = cos_deg(deg), s = sin_deg(deg);
    return RotationMatrix({{{1, 0, 0}, {0, c, -s}, {0, s, c}}});
}

inline RotationMatrix rotation_y(double deg)
{
    const double c = cos_deg(deg), s = sin_deg(deg);
    return RotationMatrix({{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}});
}

inline RotationMatrix rotation_z(double deg)
{
    const double c = cos_deg(deg), s = sin_deg(deg);
    return RotationMatrix({{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}});
}

/// Euler rotation Rz(az) * Ry(ay) * Rx(ax), angles in degrees.
inline RotationMatrix rotation(double ax, double ay, double az)
{
    return rotation_z(az) * rotation_y(ay) * rotation_x(ax);
}

// ---------------------------------------------------------------------------
// Surface parametrizations

enum class SurfaceKind { Torus, Klein, Roman };

inline std::string_view to_string(SurfaceKind k)
{
    switch (k) {
    case SurfaceKind::Torus: return "torus";
    case SurfaceKind::Klein: return "klein";
    case SurfaceKind::Roman: return "roman";
    }
    return "?";
}

inline SurfaceKind parse_surface_kind(std::string_view name)
{
    if (name == "torus") return SurfaceKind::Torus;
    if (name == "klein") return SurfaceKind::Klein;
    if (name == "roman") return SurfaceKind::Roman;
    throw std::invalid_argument("unknown surface '" + std::string(name) +
                                "' (expected torus, klein or roman)");
}

struct SurfaceParams {
    SurfaceKind kind{SurfaceKind::Torus};
    double outer_radius{30.0};
    double inner_radius{10.0};
    int lat_ribs{18};
    int long_ribs{36};
    double amplitude{0.25};      // Klein only
    double phase_offset{90.0};   // Klein only, degrees
};

/// Throws std::invalid_argument naming the first violated invariant.
inline void check(const SurfaceParams& p)
{
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (!std::isfinite(p.outer_radius) || !std::isfinite(p.inner_radius) ||
        !std::isfinite(p.amplitude) || !std::isfinite(p.phase_offset))
        fail("surface parameters must be finite");
    if (p.kind == SurfaceKind::Roman) {
        if (!(p.outer_radius > 0.0)) fail("outer-radius must be > 0");
    } else {
        if (!(p.inner_radius > 0.0)) fail("inner-radius must be > 0");
        if (!(p.outer_radius > p.inner_radius)) fail("outer-radius must be > inner-radius");
    }
    if (p.lat_ribs < 3) fail("lat-ribs must be >= 3");
    if (p.long_ribs < 3) fail("long-ribs must be >= 3");
    if (p.kind == SurfaceKind::Klein && !(p.amplitude >= 0.0)) fail("amplitude must be >= 0");
}

/// Point on the torus at grid coordinates (i, j); i and j may be fractional.
inline Vec3 torus_point(double i, double j, const SurfaceParams& p)
{
    const double u = i * 360.0 / p.lat_ribs;
    const double v = j * 360.0 / p.long_ribs;
    const Vec3 meridian{p.inner_radius * cos_deg(u) + p.outer_radius, 0.0,
                        p.inner_radius * sin_deg(u)};
    return rotation_z(v) * meridian;
}

/// Gerono lemniscate half-lobe with an out-of-plane cosine wobble.
/// alpha in [0, 1] sweeps the lobe from one crossing to the other.
inline Vec3 half_lemniscate(double alpha, double ampl, double phase_offset = 90.0)
{
    const double beta = 90.0 + 180.0 * alpha;
    const double cb = cos_deg(beta);
    return {cb, sin_deg(beta) * cb, ampl * cos_deg(phase_offset + beta)};
}

/// Figure-8 Klein bottle. Period in i is 2 * lat_ribs: one full turn of the
/// sweep only rotates the figure 8 by half a turn.
inline Vec3 klein_point(double i, double j, const SurfaceParams& p)
{
    const double a_i = 360.0 * i / p.lat_ribs;
    const double a_j = 360.0 * j / p.long_ribs;
    Vec3 pt = Vec3{p.outer_radius, 0.0, 0.0} +
              p.inner_radius * (rotation_z(a_i / 2.0) *
                                half_lemniscate(a_j / 360.0, p.amplitude, p.phase_offset));
    pt = rotation_x(90.0) * pt;
    return rotation_z(a_i) * pt;
}

/// Veronese-type map from the sphere onto the Roman surface.
constexpr Vec3 roman_map(const Vec3& s) { return {s.y * s.z, s.x * s.z, s.x * s.y}; }

/// Sphere point used by the Roman parametrization: u is latitude, v longitude.
inline Vec3 roman_sphere_point(double i, double j, const SurfaceParams& p)
{
    const double u = i * 360.0 / p.lat_ribs;
    const double v = j * 180.0 / p.long_ribs;
    const double cu = cos_deg(u);
    return {p.outer_radius * cu * cos_deg(v), p.outer_radius * cu * sin_deg(v),
            p.outer_radius * sin_deg(u)};
}

inline Vec3 roman_point(double i, double j, const SurfaceParams& p)
{
    return roman_map(roman_sphere_point(i, j, p));
}

inline Vec3 surface_point(double i, double j, const SurfaceParams& p)
{
    switch (p.kind) {
    case SurfaceKind::Torus: return torus_point(i, j, p);
    case SurfaceKind::Klein: return klein_point(i, j, p);
    case SurfaceKind::Roman: return roman_point(i, j, p);
    }
    return {};
}

}  // namespace identispace
