#include "ntn/geometry.hpp"

#include "ntn/errors.hpp"
#include "ntn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace ntn {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void check_radius(double radius_m) {
    if (!std::isfinite(radius_m) || radius_m <= 0.0)
        throw ConfigError("disc radius must be finite and positive, got " + std::to_string(radius_m));
}

Point3 uniform_in_disc(Rng& rng, double radius_m, double altitude_m) {
    const double r = radius_m * std::sqrt(uniform01(rng));
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    return {r * std::cos(phi), r * std::sin(phi), altitude_m};
}

} // namespace

double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

double distance(const Point3& a, const Point3& b) { return norm(a - b); }

double horizontal_distance(const Point3& a, const Point3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string_view to_string(PlatformKind kind) {
    switch (kind) {
    case PlatformKind::user: return "user";
    case PlatformKind::uav: return "uav";
    case PlatformKind::haps: return "haps";
    case PlatformKind::mbs: return "mbs";
    case PlatformKind::satellite: return "satellite";
    }
    return "unknown";
}

std::vector<Point3> Deployment::positions() const {
    std::vector<Point3> out;
    out.reserve(nodes.size());
    for (const auto& node : nodes) out.push_back(node.position);
    return out;
}

Deployment sample_bpp_disc(std::size_t n, double radius_m, double altitude_m, std::uint64_t seed,
                           PlatformKind kind) {
    check_radius(radius_m);
    Deployment d{{}, seed, BppDisc{n, radius_m, altitude_m}};
    d.nodes.reserve(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) d.nodes.push_back({uniform_in_disc(rng, radius_m, altitude_m), kind});
    return d;
}

Deployment sample_ppp_disc(double density_per_km2, double radius_m, double altitude_m, std::uint64_t seed,
                           PlatformKind kind) {
    check_radius(radius_m);
    if (!std::isfinite(density_per_km2) || density_per_km2 < 0.0)
        throw ConfigError("point density must be finite and non-negative, got " +
                          std::to_string(density_per_km2));
    Deployment d{{}, seed, PppDisc{density_per_km2, radius_m, altitude_m}};
    const double radius_km = radius_m / 1e3;
    const double mean = density_per_km2 * std::numbers::pi * radius_km * radius_km;
    if (mean == 0.0) return d;
    Rng rng(seed);
    const auto count = std::poisson_distribution<std::int64_t>(mean)(rng);
    d.nodes.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) d.nodes.push_back({uniform_in_disc(rng, radius_m, altitude_m), kind});
    return d;
}

Deployment sample_bpp_sphere(std::size_t n, double shell_altitude_m, std::uint64_t seed, PlatformKind kind,
                             double earth_radius_m) {
    if (!std::isfinite(shell_altitude_m) || shell_altitude_m < 0.0)
        throw ConfigError("shell altitude must be finite and non-negative");
    Deployment d{{}, seed, BppSphere{n, shell_altitude_m}};
    d.nodes.reserve(n);
    Rng rng(seed);
    const double shell = earth_radius_m + shell_altitude_m;
    const Point3 center = earth_center(earth_radius_m);
    for (std::size_t i = 0; i < n; ++i) {
        // Archimedes: z uniform on [-1, 1] with uniform longitude is uniform on the sphere.
        const double z = 2.0 * uniform01(rng) - 1.0;
        const double lon = 2.0 * std::numbers::pi * uniform01(rng);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        d.nodes.push_back({center + shell * Point3{s * std::cos(lon), s * std::sin(lon), z}, kind});
    }
    return d;
}

double elevation_angle(const Point3& ground, const Point3& aerial) {
    if (ground == aerial) throw DomainError("elevation_angle: coincident points");
    if (aerial.z <= ground.z) throw DomainError("elevation_angle: aerial node must be above the ground terminal");
    return std::atan2(aerial.z - ground.z, horizontal_distance(ground, aerial)) * kRadToDeg;
}

double elevation_angle_spherical(const Point3& from, const Point3& to, double earth_radius_m) {
    const Point3 ray = to - from;
    const double range = norm(ray);
    if (range == 0.0) throw DomainError("elevation_angle_spherical: coincident points");
    const Point3 up = from - earth_center(earth_radius_m);
    const double s = std::clamp(dot(ray, up) / (range * norm(up)), -1.0, 1.0);
    return std::asin(s) * kRadToDeg;
}

double off_boresight_angle(const Point3& apex, const Point3& boresight_target, const Point3& other) {
    const Point3 a = boresight_target - apex;
    const Point3 b = other - apex;
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::acos(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0)) * kRadToDeg;
}

} // namespace ntn
