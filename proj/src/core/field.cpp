#include "core/field.hpp"

namespace scaleprobe {

ScalarField operator+(const ScalarField& f, const ScalarField& g) {
    return ScalarField([f, g](Vec2 p, int dx, int dy) {
        return f.derivative(p, dx, dy) + g.derivative(p, dx, dy);
    });
}

ScalarField operator-(const ScalarField& f, const ScalarField& g) {
    return ScalarField([f, g](Vec2 p, int dx, int dy) {
        return f.derivative(p, dx, dy) - g.derivative(p, dx, dy);
    });
}

ScalarField operator*(double s, const ScalarField& f) {
    return ScalarField([s, f](Vec2 p, int dx, int dy) { return s * f.derivative(p, dx, dy); });
}

} // namespace scaleprobe
