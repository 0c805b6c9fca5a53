#include "cpulse/rotor.hpp"

#include <algorithm>

#include "cpulse/errors.hpp"

namespace cpulse {

double distance(const BlochVector& a, const BlochVector& b) { return (a.vec() - b.vec()).norm(); }

Rotation Rotation::from_components(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (!std::isfinite(n) || n == 0.0) {
        throw PreconditionError("quaternion must be finite and non-zero");
    }
    return Rotation(w / n, x / n, y / n, z / n);
}

Rotation rot_from_axis_angle(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (!(std::abs(n - 1.0) <= 1e-9)) {
        throw PreconditionError("rotation axis must be a unit vector");
    }
    const double s = std::sin(0.5 * angle) / n;
    return Rotation::from_components(std::cos(0.5 * angle), s * axis.x, s * axis.y, s * axis.z);
}

Rotation rot_from_vector(const Vec3& w) {
    const double angle = w.norm();
    if (angle == 0.0) return Rotation::identity();
    return rot_from_axis_angle(w * (1.0 / angle), angle);
}

Rotation compose(const Rotation& a, const Rotation& b) {
    // Hamilton product b * a: `a` acts first.
    const double w = b.w_ * a.w_ - b.x_ * a.x_ - b.y_ * a.y_ - b.z_ * a.z_;
    const double x = b.w_ * a.x_ + b.x_ * a.w_ + b.y_ * a.z_ - b.z_ * a.y_;
    const double y = b.w_ * a.y_ - b.x_ * a.z_ + b.y_ * a.w_ + b.z_ * a.x_;
    const double z = b.w_ * a.z_ + b.x_ * a.y_ - b.y_ * a.x_ + b.z_ * a.w_;
    return Rotation::from_components(w, x, y, z);
}

Vec3 apply(const Rotation& q, const Vec3& v) {
    // v' = v + 2 u x (u x v + w v), u the vector part.
    const Vec3 u{q.x(), q.y(), q.z()};
    const Vec3 t = cross(u, v) + v * q.w();
    return v + 2.0 * cross(u, t);
}

BlochVector apply(const Rotation& q, const BlochVector& v) { return BlochVector::from(apply(q, v.vec())); }

AxisAngle axis_angle(const Rotation& q) {
    double w = q.w();
    Vec3 u{q.x(), q.y(), q.z()};
    if (w < 0.0) {
        w = -w;
        u = -u;
    }
    const double s = u.norm();
    if (s == 0.0) return {};
    return {u * (1.0 / s), 2.0 * std::atan2(s, w)};
}

Vec3 rotation_vector(const Rotation& q) {
    const AxisAngle aa = axis_angle(q);
    return aa.axis * aa.angle;
}

double quaternion_overlap(const Rotation& a, const Rotation& b) {
    const double d = a.w() * b.w() + a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
    return std::min(1.0, std::abs(d));
}

double quaternion_distance(const Rotation& a, const Rotation& b) {
    const double dw = a.w() - b.w(), dx = a.x() - b.x(), dy = a.y() - b.y(), dz = a.z() - b.z();
    const double sw = a.w() + b.w(), sx = a.x() + b.x(), sy = a.y() + b.y(), sz = a.z() + b.z();
    const double minus = std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz);
    const double plus = std::sqrt(sw * sw + sx * sx + sy * sy + sz * sz);
    return std::min(minus, plus);
}

bool equivalent(const Rotation& a, const Rotation& b, double tol) { return quaternion_distance(a, b) <= tol; }

}  // namespace cpulse
