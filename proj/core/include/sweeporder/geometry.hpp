#pragma once

#include <cmath>
#include <numbers>

namespace sweeporder {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Points and displacement vectors share a representation.
using Point2 = Vec2;

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
constexpr Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }
constexpr Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// z-component of the 3D cross product; positive when b lies counterclockwise of a.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline Vec2 normalized(Vec2 v) {
    double n = norm(v);
    return {v.x / n, v.y / n};
}

// Rotate v counterclockwise by angle radians.
inline Vec2 rotate(Vec2 v, double angle) {
    double c = std::cos(angle);
    double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Signed angle from a to b in (-pi, pi], counterclockwise positive.
inline double signed_angle(Vec2 a, Vec2 b) {
    double ang = std::atan2(cross(a, b), dot(a, b));
    if (ang <= -std::numbers::pi) ang = std::numbers::pi;
    return ang;
}

}  // namespace sweeporder
