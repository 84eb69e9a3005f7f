#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <ostream>

#include "mahlerlab/error.hpp"

namespace mahler {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/* Scalar triple product det[a b c]. */
constexpr double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalize(const Vec3& v) {
    double n = norm(v);
    if (n < 1e-14) throw ZeroDirection("cannot normalize a (near) zero vector");
    return v / n;
}

inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

struct Vec2 {
    double x = 0.0, y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/* z component of the 3D cross product of the lifted vectors. */
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline double norm2(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }

inline Vec2 normalize(const Vec2& v) {
    double n = norm(v);
    if (n < 1e-14) throw ZeroDirection("cannot normalize a (near) zero vector");
    return v / n;
}

inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

inline Vec2 rotate(const Vec2& v, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << "(" << v.x << ", " << v.y << ")";
}

/* Row-major 3x3 matrix; rows act on column vectors from the left. */
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int r, int c) const { return m[3 * r + c]; }
    double& operator()(int r, int c) { return m[3 * r + c]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
};

inline Mat3 identity3() { return Mat3{}; }

inline Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline Mat3 diag3(double a, double b, double c) {
    Mat3 r;
    r.m = {a, 0, 0, 0, b, 0, 0, 0, c};
    return r;
}

/* Rotation by `angle` about the z axis. */
inline Mat3 rotation_z(double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return r;
}

/* Rodrigues rotation about an arbitrary axis. */
inline Mat3 rotation_axis(const Vec3& axis, double angle) {
    Vec3 u = normalize(axis);
    double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 r;
    r.m = {c + u.x * u.x * t,       u.x * u.y * t - u.z * s, u.x * u.z * t + u.y * s,
           u.y * u.x * t + u.z * s, c + u.y * u.y * t,       u.y * u.z * t - u.x * s,
           u.z * u.x * t - u.y * s, u.z * u.y * t + u.x * s, c + u.z * u.z * t};
    return r;
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
    double d = 0;
    for (int i = 0; i < 9; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
    return d;
}

inline bool is_orthogonal(const Mat3& a, double tol) {
    return max_abs_diff(a * transpose(a), identity3()) <= tol;
}

} // namespace mahler
