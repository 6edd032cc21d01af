#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace flame {

using Vec2 = Eigen::Vector2d;
// Marker coordinates or per-marker vectors, one row per marker.
using Points = Eigen::Matrix<double, Eigen::Dynamic, 2>;
// Per-marker scalar field.
using Field = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

class FlameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryError : public FlameError {
public:
    using FlameError::FlameError;
};

class ConfigError : public FlameError {
public:
    using FlameError::FlameError;
};

// Carries the marker positions at the moment of failure so callers can dump them.
class SolveError : public FlameError {
public:
    SolveError(const std::string& what, Points markers)
        : FlameError(what), markers_(std::move(markers)) {}
    const Points& markers() const { return markers_; }

private:
    Points markers_;
};

}  // namespace flame
