#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace nfcrb {

using Vec2 = Eigen::Vector2d;

/// Reactive / Fraunhofer boundary distances of an aperture.
struct RegionBoundaries {
    double reactive = 0.0;    ///< 0.62 sqrt(D^3 / lambda)
    double fraunhofer = 0.0;  ///< 2 D^2 / lambda
};

/// Sums of element offsets about the array centroid.
struct MomentSums {
    double first = 0.0;   ///< sum (x_n - x0), zero for a centered array
    double second = 0.0;  ///< sum (x_n - x0)^2
};

enum class Region { Reactive, Fresnel, Fraunhofer };

const char* to_string(Region region);

/// Element layout of one transmit or receive array.
///
/// The canonical constructor is `ula()`, a centered uniform linear array on the
/// x-axis. `from_positions()` accepts arbitrary planar layouts; such arrays are
/// usable by the exact (steering/FIM) path but not by the closed-form
/// approximations, which assume a ULA on the x-axis.
class ArrayGeometry {
public:
    static ArrayGeometry ula(int count, double spacing, double centroid_x = 0.0);
    static ArrayGeometry from_positions(std::vector<Vec2> positions, double nominal_spacing = 0.0);

    int count() const { return static_cast<int>(positions_.size()); }
    double spacing() const { return spacing_; }
    double centroid_x() const { return centroid_.x(); }
    const Vec2& centroid() const { return centroid_; }
    std::span<const Vec2> positions() const { return positions_; }
    const Vec2& position(int n) const { return positions_[static_cast<std::size_t>(n)]; }

    /// True for arrays built by ula(): all y = 0, uniform spacing, centered at centroid_x.
    bool is_axis_ula() const { return axis_ula_; }

    /// Copy with every element rotated about the origin by `angle` radians.
    ArrayGeometry rotated(double angle) const;

private:
    ArrayGeometry() = default;

    std::vector<Vec2> positions_;
    double spacing_ = 0.0;
    Vec2 centroid_ = Vec2::Zero();
    bool axis_ula_ = false;
};

double aperture(const ArrayGeometry& geom);
RegionBoundaries region_boundaries(const ArrayGeometry& geom, double wavelength);
MomentSums moment_sums(const ArrayGeometry& geom);

/// Classify a distance from the array centroid against the region boundaries.
Region classify_region(const RegionBoundaries& bounds, double range);

} // namespace nfcrb
