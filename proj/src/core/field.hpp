#pragma once

#include <functional>

#include "core/common.hpp"

namespace scaleprobe {

/// An analytic scalar field: evaluates the field and its partial derivatives
/// D^(dx,dy) at a point. Smooth test fields support derivative orders up to 2
/// (the trig helpers support any order).
class ScalarField {
public:
    using Eval = std::function<double(Vec2, int, int)>;

    ScalarField() = default;
    explicit ScalarField(Eval eval) : eval_(std::move(eval)) {}

    double value(Vec2 p) const { return eval_(p, 0, 0); }
    double operator()(Vec2 p) const { return value(p); }
    double derivative(Vec2 p, int dx, int dy) const { return eval_(p, dx, dy); }
    Vec2 gradient(Vec2 p) const { return {eval_(p, 1, 0), eval_(p, 0, 1)}; }
    bool empty() const { return !eval_; }

    static ScalarField constant(double c) {
        return ScalarField([c](Vec2, int dx, int dy) { return (dx == 0 && dy == 0) ? c : 0.0; });
    }

    /// sin(a*x + b*y + phase), with exact derivatives of every order.
    static ScalarField sinWave(double a, double b, double phase = 0.0) {
        return ScalarField([a, b, phase](Vec2 p, int dx, int dy) {
            const double shift = 0.5 * M_PI * (dx + dy);
            const double amp = std::pow(a, dx) * std::pow(b, dy);
            return amp * std::sin(a * p.x + b * p.y + phase + shift);
        });
    }

    /// sin(kx*pi*x) * sin(ky*pi*y), derivatives of every order.
    static ScalarField sineProduct(double kx, double ky) {
        return ScalarField([kx, ky](Vec2 p, int dx, int dy) {
            const double ax = kx * M_PI;
            const double ay = ky * M_PI;
            const double fx = std::pow(ax, dx) * std::sin(ax * p.x + 0.5 * M_PI * dx);
            const double fy = std::pow(ay, dy) * std::sin(ay * p.y + 0.5 * M_PI * dy);
            return fx * fy;
        });
    }

private:
    Eval eval_;
};

ScalarField operator+(const ScalarField& f, const ScalarField& g);
ScalarField operator-(const ScalarField& f, const ScalarField& g);
ScalarField operator*(double s, const ScalarField& f);

} // namespace scaleprobe
