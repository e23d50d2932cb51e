#pragma once

#include "nfcrb/fim.hpp"
#include "nfcrb/geometry.hpp"
#include "nfcrb/scene.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfcrb {

/// Central-difference steps per parameter family.
struct FdSteps {
    double position = 1e-6;  ///< m
    double velocity = 1e-4;  ///< m/s
    double rcs = 1e-6;

    double for_kind(ParamKind kind) const;
    std::string describe() const;
};

struct OracleReport {
    std::string quantity;
    double analytic = 0.0;
    double oracle = 0.0;
    double rel_error = 0.0;
    std::string steps;
    double tolerance = 0.0;
    bool pass = false;
};

/// |analytic - oracle| / max(|oracle|, 1e-30)
double oracle_rel_error(double analytic, double oracle);

OracleReport make_report(std::string quantity, double analytic, double oracle, double rel_error,
                         double tolerance, std::string steps = {});

/// Fisher information from central differences of the channel matrices
/// (isotropic mode) or of the noiseless received signal (explicit symbols).
FisherInfo fd_fim(const Scene& scene, const FdSteps& steps = {},
                  const TransmitSpec& transmit = TransmitSpec::isotropic(), int workers = 1);

enum class GainKind { G, DotX, DotY, CrossX, CrossY };

const char* to_string(GainKind kind);

/// Exact element sums: G = sum 1/r^2, DotX = sum dx^2/r^4, DotY = sum dy^2/r^4,
/// CrossX = sum dx/r^3, CrossY = sum dy/r^3 with (dx, dy) = target - element.
double brute_gain(const ArrayGeometry& geom, const Target& target, GainKind kind);

/// Average of explicit-symbol FIMs over random-phase symbols of power P per
/// element, against the isotropic FIM. Tolerance 3 / sqrt(draws).
OracleReport monte_carlo_isotropic(const Scene& scene, int draws, std::uint64_t seed,
                                   int workers = 1);

/// Central-difference check of the analytic steering derivatives of target q at
/// snapshot m. One report per (side, family); the error is the max-norm error of
/// the family normalized by the larger of its x and y analytic max-norms.
std::vector<OracleReport> check_steering_derivatives(const Scene& scene, int m, int q,
                                                     const FdSteps& steps = {});

/// ||a - b||_F / ||b||_F
double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace nfcrb
