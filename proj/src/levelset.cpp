#include "patchfem/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace patchfem {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Roots of phi(a + t (b - a)) for an affine phi.
std::vector<double> line_roots(double phi_a, double phi_b) {
    if ((phi_a < 0.0 && phi_b > 0.0) || (phi_a > 0.0 && phi_b < 0.0)) {
        return {phi_a / (phi_a - phi_b)};
    }
    if (phi_a == 0.0 && phi_b != 0.0) return {0.0};
    if (phi_b == 0.0 && phi_a != 0.0) return {1.0};
    return {};
}

// |a + t d - c|^2 = R^2, transversal roots only.
std::vector<double> circle_roots(const Circle& c, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const Point2 f = a - c.center;
    const double dd = dot(d, d);
    const double fd = dot(f, d);
    const double ff = dot(f, f) - c.radius * c.radius;
    const double disc = fd * fd - dd * ff;
    if (disc <= 0.0) return {};
    const double q = -(fd + std::copysign(std::sqrt(disc), fd));
    double t1 = q / dd;
    double t2 = (q != 0.0) ? ff / q : -t1;
    if (t1 > t2) std::swap(t1, t2);
    return {t1, t2};
}

}  // namespace

LevelSet::LevelSet(Circle c) : shape_(c) {
    if (!(c.radius > 0.0)) throw std::invalid_argument("LevelSet: circle radius must be positive");
}

double LevelSet::operator()(Point2 p) const {
    return std::visit(Overloaded{
                          [&](const Circle& c) { return norm(p - c.center) - c.radius; },
                          [&](const TiltedLine& l) { return std::cos(l.alpha) * p.y - std::sin(l.alpha) * p.x; },
                          [&](const HorizontalLine& l) { return p.y - l.y0; },
                      },
                      shape_);
}

Point2 LevelSet::gradient(Point2 p) const {
    return std::visit(Overloaded{
                          [&](const Circle& c) {
                              const Point2 d = p - c.center;
                              const double r = norm(d);
                              return r > 0.0 ? (1.0 / r) * d : Point2{0.0, 0.0};
                          },
                          [&](const TiltedLine& l) { return Point2{-std::sin(l.alpha), std::cos(l.alpha)}; },
                          [&](const HorizontalLine&) { return Point2{0.0, 1.0}; },
                      },
                      shape_);
}

SegmentCut segment_crossings(const LevelSet& ls, Point2 a, Point2 b) {
    std::vector<double> roots = std::visit(Overloaded{
                                               [&](const Circle& c) { return circle_roots(c, a, b); },
                                               [&](const auto&) { return line_roots(ls(a), ls(b)); },
                                           },
                                           ls.shape());
    SegmentCut cut;
    for (double t : roots) {
        if (t < -kSnapTolerance || t > 1.0 + kSnapTolerance) continue;
        if (t <= kSnapTolerance) {
            cut.hits_start = true;
        } else if (t >= 1.0 - kSnapTolerance) {
            cut.hits_end = true;
        } else {
            cut.params.push_back(t);
        }
    }
    std::sort(cut.params.begin(), cut.params.end());
    return cut;
}

bool vertex_hits(const LevelSet& ls, Point2 p, double scale) {
    return std::abs(ls(p)) <= kSnapTolerance * scale;
}

}  // namespace patchfem
