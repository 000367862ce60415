#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace patchfem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Vertices in counterclockwise order for a valid element.
struct Triangle2 {
    std::array<Point2, 3> v;

    Point2 centroid() const {
        return {(v[0].x + v[1].x + v[2].x) / 3.0, (v[0].y + v[1].y + v[2].y) / 3.0};
    }
};

/// Row-major 2x2 matrix.
struct Mat2 {
    double a00 = 1.0, a01 = 0.0, a10 = 0.0, a11 = 1.0;

    double det() const { return a00 * a11 - a01 * a10; }
    Point2 operator*(Point2 p) const { return {a00 * p.x + a01 * p.y, a10 * p.x + a11 * p.y}; }
    Mat2 operator*(const Mat2& o) const {
        return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
                a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
    }
};

/// x -> linear * x + offset
struct AffineMap {
    Mat2 linear;
    Point2 offset;

    Point2 operator()(Point2 p) const { return linear * p + offset; }
    double jacobian() const { return linear.det(); }

    /// (*this)(inner(x))
    AffineMap after(const AffineMap& inner) const {
        return {linear * inner.linear, linear * inner.offset + offset};
    }
};

struct QuadRule {
    std::vector<Point2> points;
    std::vector<double> weights;
    int degree = 0;
};

inline constexpr Triangle2 kReferenceTriangle{{Point2{0.0, 0.0}, Point2{1.0, 0.0}, Point2{0.0, 1.0}}};

double triangle_area(const Triangle2& t);

/// Interior angles in degrees, angle i at vertex i. Throws DegenerateTriangle
/// when |2*area| < 1e-14 * (longest edge)^2.
std::array<double, 3> interior_angles(const Triangle2& t);

double max_interior_angle(const Triangle2& t);

/// Affine map sending source.v[i] to target.v[i].
AffineMap affine_map_between(const Triangle2& source, const Triangle2& target);

/// Rules on the reference triangle {x>=0, y>=0, x+y<=1}; weights sum to 1/2.
/// Supported degrees: 1 (centroid), 2 (three interior points), 5 (seven points).
const QuadRule& reference_quad_rule(int degree);

bool is_degenerate(const Triangle2& t);

}  // namespace patchfem
