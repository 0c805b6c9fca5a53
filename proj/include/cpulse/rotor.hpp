#pragma once

// Rotation algebra on the Bloch sphere.
//
// Conventions used everywhere in the library:
//   * active, right-handed rotations: a positive angle about +z carries +x toward +y;
//   * a rotation by angle a about unit axis n is the quaternion (cos a/2, sin a/2 n),
//     which is the SU(2) element exp(-i a n.sigma/2);
//   * compose(first, then) is the rotation obtained by applying `first` and then `then`.

#include <cmath>
#include <numbers>

namespace cpulse {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Single-spin state as a point in (or on) the unit ball.
struct BlochVector {
    double bx = 0.0;
    double by = 0.0;
    double bz = 1.0;

    double norm() const { return std::sqrt(bx * bx + by * by + bz * bz); }
    constexpr Vec3 vec() const { return {bx, by, bz}; }
    static constexpr BlochVector from(const Vec3& v) { return {v.x, v.y, v.z}; }
};

double distance(const BlochVector& a, const BlochVector& b);

/// Unit quaternion. Construction always normalizes; q and -q are the same rotation.
class Rotation {
public:
    constexpr Rotation() = default;

    /// Normalizes (w, x, y, z); throws PreconditionError for a zero or non-finite quaternion.
    static Rotation from_components(double w, double x, double y, double z);
    static constexpr Rotation identity() { return {}; }

    constexpr double w() const { return w_; }
    constexpr double x() const { return x_; }
    constexpr double y() const { return y_; }
    constexpr double z() const { return z_; }

    constexpr Rotation inverse() const { return Rotation(w_, -x_, -y_, -z_); }
    constexpr Rotation negated() const { return Rotation(-w_, -x_, -y_, -z_); }

private:
    constexpr Rotation(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}

    double w_ = 1.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double z_ = 0.0;

    friend Rotation compose(const Rotation& first, const Rotation& then);
};

struct AxisAngle {
    Vec3 axis{0.0, 0.0, 1.0};
    double angle = 0.0;  // radians, [0, 2*pi)
};

/// Rotation by `angle` about `axis`; |axis| must be 1 within 1e-9.
Rotation rot_from_axis_angle(const Vec3& axis, double angle);

/// Rotation by |w| about w/|w| (the exponential map); identity for w = 0.
Rotation rot_from_vector(const Vec3& w);

Rotation compose(const Rotation& first, const Rotation& then);

Vec3 apply(const Rotation& q, const Vec3& v);
BlochVector apply(const Rotation& q, const BlochVector& v);

/// Axis and angle with the sign of q chosen so that w >= 0. Angle 0 reports axis +z.
AxisAngle axis_angle(const Rotation& q);

/// Rotation vector (axis * angle) of the representative with w >= 0; angle in [0, pi].
Vec3 rotation_vector(const Rotation& q);

/// Absolute 4-dot product |<a, b>|; 1 when a and b are the same rotation.
double quaternion_overlap(const Rotation& a, const Rotation& b);

/// Sign-blind closeness: min(|a - b|, |a + b|) <= tol.
bool equivalent(const Rotation& a, const Rotation& b, double tol = 1e-12);

/// Sign-blind distance min(|a - b|, |a + b|).
double quaternion_distance(const Rotation& a, const Rotation& b);

constexpr double deg(double degrees) { return degrees * std::numbers::pi / 180.0; }
constexpr double to_degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

}  // namespace cpulse
