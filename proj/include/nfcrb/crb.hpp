#pragma once

#include "nfcrb/fim.hpp"
#include "nfcrb/scene.hpp"

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <vector>

namespace nfcrb {

/// Bounds that are analytically infinite (zero Fisher information) are
/// reported as +infinity rather than raised as errors.
inline constexpr double kDivergent = std::numeric_limits<double>::infinity();

inline bool is_divergent(double value) { return value == kDivergent; }

/// Condition number (after Jacobi equilibration) above which inverses are flagged.
inline constexpr double kIllConditionedThreshold = 1e12;

enum class CrbMethod {
    ExactFull,       ///< diagonal of the full inverse FIM (all parameters unknown)
    ExactSchur,      ///< per-target block, other targets eliminated by Schur complement
    FisherDiagonal,  ///< 1 / F_ii, every other parameter known
    ClosedForm33,    ///< per-target closed form from steering-vector norms
};

const char* to_string(CrbMethod method);

enum class CrbStatus { Ok, IllConditioned };

struct CrbRecord {
    double crb_x = 0.0;
    double crb_y = 0.0;
    double crb_vx = 0.0;
    double crb_vy = 0.0;
    double crb_alpha_r = 0.0;
    double crb_alpha_i = 0.0;
    double crb_alpha = 0.0;  ///< crb_alpha_r + crb_alpha_i

    double get(ParamKind kind) const;
};

struct CrbReport {
    std::vector<CrbRecord> targets;
    CrbMethod method = CrbMethod::ExactFull;
    std::optional<double> condition_number;
    CrbStatus status = CrbStatus::Ok;
};

struct FullCrb {
    Eigen::MatrixXd crb;
    CrbReport report;
};

/// Jacobi-equilibrated condition number of a symmetric PSD matrix.
double equilibrated_condition(const Eigen::MatrixXd& m);

/// CRB = F^{-1}. Throws SingularFim when F is numerically singular; reports
/// (but returns) ill-conditioned inverses.
FullCrb full_crb(const FisherInfo& fisher);

/// (F_ss - F_sn F_nn^{-1} F_ns)^{-1} for the given parameter subset.
Eigen::MatrixXd conditional_crb(const FisherInfo& fisher, const std::vector<int>& subset);

/// Per-target bounds with the remaining targets treated as nuisance.
CrbReport schur_crb(const FisherInfo& fisher);

/// 1 / F_ii for every parameter.
CrbReport fisher_diagonal_crb(const FisherInfo& fisher);

/// Single-target closed form: sigma^2 / (2 P |alpha|^2 sum_m (...)) from the
/// steering vectors and their derivatives. Inter-target coupling is ignored.
CrbReport closed_form_single(const Scene& scene, int q);

} // namespace nfcrb
