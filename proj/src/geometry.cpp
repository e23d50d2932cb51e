#include "nfcrb/geometry.hpp"

#include "nfcrb/errors.hpp"

#include <cmath>
#include <numeric>

namespace nfcrb {

const char* to_string(Region region) {
    switch (region) {
    case Region::Reactive: return "reactive";
    case Region::Fresnel: return "fresnel";
    case Region::Fraunhofer: return "fraunhofer";
    }
    return "unknown";
}

ArrayGeometry ArrayGeometry::ula(int count, double spacing, double centroid_x) {
    if (count < 1) {
        throw InvalidArgument("array element count must be >= 1");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw InvalidArgument("array spacing must be positive and finite");
    }
    if (!std::isfinite(centroid_x)) {
        throw InvalidArgument("array centroid must be finite");
    }

    ArrayGeometry geom;
    geom.positions_.reserve(static_cast<std::size_t>(count));
    const double mid = 0.5 * (count + 1);
    for (int n = 1; n <= count; ++n) {
        geom.positions_.emplace_back(centroid_x + (n - mid) * spacing, 0.0);
    }
    geom.spacing_ = spacing;
    geom.centroid_ = Vec2(centroid_x, 0.0);
    geom.axis_ula_ = true;
    return geom;
}

ArrayGeometry ArrayGeometry::from_positions(std::vector<Vec2> positions, double nominal_spacing) {
    if (positions.empty()) {
        throw InvalidArgument("array needs at least one element");
    }
    for (const auto& p : positions) {
        if (!p.allFinite()) {
            throw InvalidArgument("element positions must be finite");
        }
    }
    ArrayGeometry geom;
    geom.centroid_ = std::accumulate(positions.begin(), positions.end(), Vec2(Vec2::Zero()))
                     / static_cast<double>(positions.size());
    geom.positions_ = std::move(positions);
    geom.spacing_ = nominal_spacing;
    geom.axis_ula_ = false;
    return geom;
}

ArrayGeometry ArrayGeometry::rotated(double angle) const {
    const Eigen::Rotation2Dd rot(angle);
    std::vector<Vec2> pts;
    pts.reserve(positions_.size());
    for (const auto& p : positions_) {
        pts.push_back(rot * p);
    }
    return from_positions(std::move(pts), spacing_);
}

double aperture(const ArrayGeometry& geom) {
    return (geom.count() - 1) * geom.spacing();
}

RegionBoundaries region_boundaries(const ArrayGeometry& geom, double wavelength) {
    if (!(wavelength > 0.0)) {
        throw InvalidArgument("wavelength must be positive");
    }
    const double d = aperture(geom);
    return {0.62 * std::sqrt(d * d * d / wavelength), 2.0 * d * d / wavelength};
}

MomentSums moment_sums(const ArrayGeometry& geom) {
    MomentSums sums;
    for (const auto& p : geom.positions()) {
        const double dx = p.x() - geom.centroid_x();
        sums.first += dx;
        sums.second += dx * dx;
    }
    return sums;
}

Region classify_region(const RegionBoundaries& bounds, double range) {
    if (range < bounds.reactive) {
        return Region::Reactive;
    }
    if (range < bounds.fraunhofer) {
        return Region::Fresnel;
    }
    return Region::Fraunhofer;
}

} // namespace nfcrb
