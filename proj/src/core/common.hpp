#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace scaleprobe {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Axis-aligned rectangle; the carrier of every region in the code
/// (domain, subdomains, cutoff plateau/support).
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diameter() const { return std::hypot(width(), height()); }
    double area() const { return width() * height(); }

    bool valid() const { return xmax > xmin && ymax > ymin; }
    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    bool contains(const Rect& r) const {
        return r.xmin >= xmin && r.xmax <= xmax && r.ymin >= ymin && r.ymax <= ymax;
    }
    bool operator==(const Rect& r) const {
        return xmin == r.xmin && ymin == r.ymin && xmax == r.xmax && ymax == r.ymax;
    }

    static Rect unitSquare() { return {0.0, 0.0, 1.0, 1.0}; }
};

enum class Err {
    InvalidSubdivision,
    Alignment,
    DegenerateSubdomain,
    Containment,
    Degree,
    Smoothness,
    EmptySupport,
    EmptySpace,
    OutOfDomain,
    Dimension,
    Convergence,
    Definiteness,
    Singularity,
    ScaleOrdering,
    Gap,
    Support,
    Ellipticity,
    Sample,
    Data,
    Parse,
    Schema,
    Filesystem,
    Invariant,
};

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Err code, const std::string& what) {
    if (!cond) fail(code, what);
}

/// Deterministic counter-based PRNG (splitmix64). Streams are derived from a
/// master seed plus counters so grid points stay independent of execution
/// order; the sequence is identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Derive an independent stream from (master, a, b), e.g. (seed, grid point, sample).
    static Rng stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t s = mix(master ^ 0x6a09e667f3bcc909ULL);
        s = mix(s ^ a * 0x9e3779b97f4a7c15ULL);
        s = mix(s ^ b * 0xd1b54a32d192ed03ULL);
        return Rng(s);
    }

    std::uint64_t nextU64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1,1].
    double symmetric() { return 2.0 * uniform() - 1.0; }

private:
    std::uint64_t state_;
};

} // namespace scaleprobe
