#include "patchfem/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "patchfem/errors.hpp"

namespace patchfem {

namespace {

constexpr double kDegenerateRatio = 1e-14;

double longest_edge_squared(const Triangle2& t) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Point2 e = t.v[(i + 1) % 3] - t.v[i];
        m = std::max(m, dot(e, e));
    }
    return m;
}

QuadRule make_rule(int degree) {
    QuadRule rule;
    rule.degree = degree;
    switch (degree) {
        case 1:
            rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
            rule.weights = {0.5};
            break;
        case 2:
            rule.points = {{2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
            rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
            break;
        case 5: {
            // Radon's seven point rule.
            const double sq15 = std::sqrt(15.0);
            const double a = (6.0 - sq15) / 21.0;
            const double b = (6.0 + sq15) / 21.0;
            const double wa = (155.0 - sq15) / 2400.0;
            const double wb = (155.0 + sq15) / 2400.0;
            rule.points = {{1.0 / 3.0, 1.0 / 3.0},
                           {a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a},
                           {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
            rule.weights = {9.0 / 80.0, wa, wa, wa, wb, wb, wb};
            break;
        }
        default:
            break;
    }
    return rule;
}

}  // namespace

double triangle_area(const Triangle2& t) {
    return 0.5 * cross(t.v[1] - t.v[0], t.v[2] - t.v[0]);
}

bool is_degenerate(const Triangle2& t) {
    return std::abs(2.0 * triangle_area(t)) < kDegenerateRatio * longest_edge_squared(t);
}

std::array<double, 3> interior_angles(const Triangle2& t) {
    if (is_degenerate(t)) {
        throw DegenerateTriangle("interior_angles: degenerate triangle");
    }
    std::array<double, 3> angles{};
    for (int i = 0; i < 3; ++i) {
        const Point2 a = t.v[(i + 1) % 3] - t.v[i];
        const Point2 b = t.v[(i + 2) % 3] - t.v[i];
        // atan2 of (|a x b|, a.b) is the angle whose cosine is a.b/(|a||b|),
        // without the loss of accuracy of acos near 0 and 180 degrees.
        angles[i] = std::atan2(std::abs(cross(a, b)), dot(a, b)) * (180.0 / std::numbers::pi);
    }
    return angles;
}

double max_interior_angle(const Triangle2& t) {
    const auto a = interior_angles(t);
    return std::max({a[0], a[1], a[2]});
}

AffineMap affine_map_between(const Triangle2& source, const Triangle2& target) {
    if (is_degenerate(source)) {
        throw DegenerateTriangle("affine_map_between: degenerate source triangle");
    }
    // Both triangles are images of the reference triangle under
    // x -> [e1 e2] x + v0; compose target with the inverse of source.
    const Point2 s1 = source.v[1] - source.v[0];
    const Point2 s2 = source.v[2] - source.v[0];
    const Point2 t1 = target.v[1] - target.v[0];
    const Point2 t2 = target.v[2] - target.v[0];
    const double det = cross(s1, s2);
    const Mat2 s_inv{s2.y / det, -s2.x / det, -s1.y / det, s1.x / det};
    const Mat2 t_mat{t1.x, t2.x, t1.y, t2.y};
    AffineMap map;
    map.linear = t_mat * s_inv;
    map.offset = target.v[0] - map.linear * source.v[0];
    return map;
}

const QuadRule& reference_quad_rule(int degree) {
    static const QuadRule rule1 = make_rule(1);
    static const QuadRule rule2 = make_rule(2);
    static const QuadRule rule5 = make_rule(5);
    switch (degree) {
        case 1: return rule1;
        case 2: return rule2;
        case 5: return rule5;
        default:
            throw UnsupportedDegree("no reference quadrature rule of degree " + std::to_string(degree));
    }
}

}  // namespace patchfem
