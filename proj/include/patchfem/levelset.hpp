#pragma once

#include <variant>
#include <vector>

#include "patchfem/geometry.hpp"

namespace patchfem {

/// Crossings closer than this (relative to segment length, or to the caller's
/// length scale for point queries) are snapped onto the nearby vertex.
inline constexpr double kSnapTolerance = 1e-10;

struct Circle {
    Point2 center;
    double radius = 1.0;
};

/// Line through the origin, phi(x) = cos(alpha) x2 - sin(alpha) x1.
struct TiltedLine {
    double alpha = 0.0;
};

/// phi(x) = x2 - y0.
struct HorizontalLine {
    double y0 = 0.0;
};

/// Implicit interface; phi < 0 is subdomain 1, phi > 0 is subdomain 2.
class LevelSet {
public:
    using Shape = std::variant<Circle, TiltedLine, HorizontalLine>;

    LevelSet(Circle c);  // throws std::invalid_argument for radius <= 0
    LevelSet(TiltedLine l) : shape_(l) {}
    LevelSet(HorizontalLine l) : shape_(l) {}

    double operator()(Point2 p) const;
    Point2 gradient(Point2 p) const;
    const Shape& shape() const { return shape_; }

private:
    Shape shape_;
};

inline double eval(const LevelSet& ls, Point2 p) { return ls(p); }

/// Zeros of phi along a -> b. Roots within kSnapTolerance of an endpoint are
/// not reported in `params` but flagged as endpoint hits.
struct SegmentCut {
    std::vector<double> params;  // strictly inside (0,1), ascending
    bool hits_start = false;
    bool hits_end = false;
};

SegmentCut segment_crossings(const LevelSet& ls, Point2 a, Point2 b);

bool vertex_hits(const LevelSet& ls, Point2 p, double scale = 1.0);

}  // namespace patchfem
