#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace ntn {

/// Earth-tangent Cartesian frame, origin at the disc center on the ground,
/// z = altitude. Meters.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
    friend Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Point3 operator*(double s, const Point3& a) { return {s * a.x, s * a.y, s * a.z}; }
};

double dot(const Point3& a, const Point3& b);
double norm(const Point3& a);
double distance(const Point3& a, const Point3& b);
double horizontal_distance(const Point3& a, const Point3& b);

enum class PlatformKind { user, uav, haps, mbs, satellite };

std::string_view to_string(PlatformKind kind);

struct Node {
    Point3 position;
    PlatformKind kind = PlatformKind::user;
};

struct BppDisc {
    std::size_t n = 0;
    double radius_m = 0.0;
    double altitude_m = 0.0;
};

struct PppDisc {
    double density_per_km2 = 0.0;
    double radius_m = 0.0;
    double altitude_m = 0.0;
};

struct BppSphere {
    std::size_t n = 0;
    double shell_altitude_m = 0.0;
};

using ProcessDescriptor = std::variant<BppDisc, PppDisc, BppSphere>;

struct Deployment {
    std::vector<Node> nodes;
    std::uint64_t seed = 0;
    ProcessDescriptor process;

    std::size_t size() const { return nodes.size(); }
    bool empty() const { return nodes.empty(); }
    std::vector<Point3> positions() const;
};

inline constexpr double kEarthRadiusM = 6371.0e3;

/// Earth center expressed in the local tangent frame.
constexpr Point3 earth_center(double earth_radius_m = kEarthRadiusM) { return {0.0, 0.0, -earth_radius_m}; }

// Point processes. Points are drawn one after another from a single stream, so
// the first k points of an n-point BPP equal the k-point BPP with the same seed.
Deployment sample_bpp_disc(std::size_t n, double radius_m, double altitude_m, std::uint64_t seed,
                           PlatformKind kind = PlatformKind::uav);
Deployment sample_ppp_disc(double density_per_km2, double radius_m, double altitude_m, std::uint64_t seed,
                           PlatformKind kind = PlatformKind::user);
Deployment sample_bpp_sphere(std::size_t n, double shell_altitude_m, std::uint64_t seed,
                             PlatformKind kind = PlatformKind::satellite,
                             double earth_radius_m = kEarthRadiusM);

/// Elevation of `aerial` seen from `ground` in the flat local frame, degrees in (0, 90].
double elevation_angle(const Point3& ground, const Point3& aerial);

/// Elevation above the local horizon of a spherical Earth, degrees in [-90, 90].
double elevation_angle_spherical(const Point3& from, const Point3& to,
                                 double earth_radius_m = kEarthRadiusM);

/// Angle at `apex` between the ray towards `boresight_target` and the ray towards `other`, degrees.
double off_boresight_angle(const Point3& apex, const Point3& boresight_target, const Point3& other);

} // namespace ntn
