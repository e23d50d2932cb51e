#include "nfcrb/crb.hpp"

#include "nfcrb/errors.hpp"
#include "nfcrb/steering.hpp"

#include <cmath>

namespace nfcrb {

namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct SpdInverse {
    LMatrix inverse;
    double condition = 1.0;
};

// Inverse of a symmetric PSD matrix through Jacobi equilibration and LDL^T.
// The solve runs in extended precision: the range/phase coupling leaves the
// equilibrated FIM with condition numbers near 1e10.
SpdInverse invert_spd(const LMatrix& m, const char* what) {
    const Eigen::Index n = m.rows();
    if (n == 0) {
        return {LMatrix(0, 0), 1.0};
    }
    const LVector diag = m.diagonal();
    if ((diag.array() <= 0.0L).any() || !diag.allFinite()) {
        throw SingularFim(std::string(what) + ": a parameter carries no information");
    }
    const LVector d = diag.cwiseSqrt().cwiseInverse();
    LMatrix scaled = d.asDiagonal() * m * d.asDiagonal();
    scaled = 0.5L * (scaled + scaled.transpose()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled.cast<double>(),
                                                             Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > static_cast<double>(n) * std::numeric_limits<double>::epsilon() * hi)) {
        throw SingularFim(std::string(what) + " is singular");
    }

    const Eigen::LDLT<LMatrix> ldlt(scaled);
    LMatrix inv = ldlt.solve(LMatrix::Identity(n, n));
    inv = d.asDiagonal() * inv * d.asDiagonal();
    inv = 0.5L * (inv + inv.transpose()).eval();
    return {std::move(inv), hi / lo};
}

CrbRecord record_from_diagonal(const Eigen::VectorXd& diag, int q, int q_count) {
    CrbRecord r;
    r.crb_x = diag(param_index(ParamKind::X, q, q_count));
    r.crb_y = diag(param_index(ParamKind::Y, q, q_count));
    r.crb_vx = diag(param_index(ParamKind::Vx, q, q_count));
    r.crb_vy = diag(param_index(ParamKind::Vy, q, q_count));
    r.crb_alpha_r = diag(param_index(ParamKind::AlphaR, q, q_count));
    r.crb_alpha_i = diag(param_index(ParamKind::AlphaI, q, q_count));
    r.crb_alpha = r.crb_alpha_r + r.crb_alpha_i;
    return r;
}

double reciprocal(double information) {
    return information > 0.0 ? 1.0 / information : kDivergent;
}

} // namespace

const char* to_string(CrbMethod method) {
    switch (method) {
    case CrbMethod::ExactFull: return "exact-full";
    case CrbMethod::ExactSchur: return "exact-schur";
    case CrbMethod::FisherDiagonal: return "fisher-diagonal";
    case CrbMethod::ClosedForm33: return "closed-form-33";
    }
    return "unknown";
}

double CrbRecord::get(ParamKind kind) const {
    switch (kind) {
    case ParamKind::X: return crb_x;
    case ParamKind::Y: return crb_y;
    case ParamKind::Vx: return crb_vx;
    case ParamKind::Vy: return crb_vy;
    case ParamKind::AlphaR: return crb_alpha_r;
    case ParamKind::AlphaI: return crb_alpha_i;
    }
    return 0.0;
}

double equilibrated_condition(const Eigen::MatrixXd& m) {
    const Eigen::VectorXd diag = m.diagonal();
    if ((diag.array() <= 0.0).any()) {
        return std::numeric_limits<double>::infinity();
    }
    const Eigen::VectorXd d = diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = d.asDiagonal() * m * d.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    if (lo <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return eig.eigenvalues().maxCoeff() / lo;
}

FullCrb full_crb(const FisherInfo& fisher) {
    SpdInverse inv = invert_spd(fisher.unscaled().cast<long double>(), "Fisher information");
    FullCrb out;
    out.crb = (inv.inverse / static_cast<long double>(fisher.scale())).cast<double>();
    out.report.method = CrbMethod::ExactFull;
    out.report.condition_number = inv.condition;
    out.report.status = inv.condition > kIllConditionedThreshold ? CrbStatus::IllConditioned
                                                                 : CrbStatus::Ok;
    const Eigen::VectorXd diag = out.crb.diagonal();
    for (int q = 0; q < fisher.target_count(); ++q) {
        out.report.targets.push_back(record_from_diagonal(diag, q, fisher.target_count()));
    }
    return out;
}

Eigen::MatrixXd conditional_crb(const FisherInfo& fisher, const std::vector<int>& subset) {
    const int n = fisher.size();
    std::vector<bool> in_subset(static_cast<std::size_t>(n), false);
    for (int idx : subset) {
        if (idx < 0 || idx >= n || in_subset[static_cast<std::size_t>(idx)]) {
            throw InvalidArgument("subset indices must be distinct and within range");
        }
        in_subset[static_cast<std::size_t>(idx)] = true;
    }
    std::vector<int> nuisance;
    for (int i = 0; i < n; ++i) {
        if (!in_subset[static_cast<std::size_t>(i)]) {
            nuisance.push_back(i);
        }
    }

    const LMatrix u = fisher.unscaled().cast<long double>();
    LMatrix schur = u(subset, subset);
    if (!nuisance.empty()) {
        const LMatrix unn_inv = invert_spd(u(nuisance, nuisance), "nuisance block").inverse;
        const LMatrix usn = u(subset, nuisance);
        schur -= usn * unn_inv * usn.transpose();
    }
    const LMatrix inv = invert_spd(schur, "Schur complement").inverse;
    return (inv / static_cast<long double>(fisher.scale())).cast<double>();
}

CrbReport schur_crb(const FisherInfo& fisher) {
    const int q_count = fisher.target_count();
    CrbReport report;
    report.method = CrbMethod::ExactSchur;
    report.condition_number = equilibrated_condition(fisher.unscaled());
    report.status = *report.condition_number > kIllConditionedThreshold ? CrbStatus::IllConditioned
                                                                        : CrbStatus::Ok;
    for (int q = 0; q < q_count; ++q) {
        std::vector<int> subset;
        for (ParamKind kind : kAllParamKinds) {
            subset.push_back(param_index(kind, q, q_count));
        }
        const Eigen::MatrixXd block = conditional_crb(fisher, subset);
        CrbRecord r;
        r.crb_x = block(0, 0);
        r.crb_y = block(1, 1);
        r.crb_vx = block(2, 2);
        r.crb_vy = block(3, 3);
        r.crb_alpha_r = block(4, 4);
        r.crb_alpha_i = block(5, 5);
        r.crb_alpha = r.crb_alpha_r + r.crb_alpha_i;
        report.targets.push_back(r);
    }
    return report;
}

CrbReport fisher_diagonal_crb(const FisherInfo& fisher) {
    CrbReport report;
    report.method = CrbMethod::FisherDiagonal;
    Eigen::VectorXd diag(fisher.size());
    for (int i = 0; i < fisher.size(); ++i) {
        diag(i) = reciprocal(fisher(i, i));
    }
    for (int q = 0; q < fisher.target_count(); ++q) {
        report.targets.push_back(record_from_diagonal(diag, q, fisher.target_count()));
    }
    return report;
}

CrbReport closed_form_single(const Scene& scene, int q) {
    if (q < 0 || q >= scene.target_count()) {
        throw InvalidArgument("target index out of range");
    }
    // Accumulated |D|^2 for the RCS block and the four kinematic parameters.
    double rcs_sum = 0.0;
    std::array<double, 4> kin_sum{};
    constexpr std::array<ParamKind, 4> kinds = {ParamKind::X, ParamKind::Y, ParamKind::Vx,
                                                ParamKind::Vy};

    for (int m = 1; m <= scene.snapshots(); ++m) {
        const SteeringSet sr = steering_set(scene, Side::Rx, m, q);
        const SteeringSet st = steering_set(scene, Side::Tx, m, q);
        const double ar2 = sr.a.squaredNorm();
        const double at2 = st.a.squaredNorm();
        rcs_sum += ar2 * at2;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            const Eigen::VectorXcd& dr = sr.derivative(kinds[k]);
            const Eigen::VectorXcd& dt = st.derivative(kinds[k]);
            const std::complex<double> cross = dr.dot(sr.a) * st.a.dot(dt);
            kin_sum[k] += dr.squaredNorm() * at2 + 2.0 * cross.real() + ar2 * dt.squaredNorm();
        }
    }

    const double sigma2 = scene.noise_var();
    const double p = scene.power();
    const double alpha2 = std::norm(scene.target(q).rcs());
    auto bound = [&](double denom) { return denom > 0.0 ? sigma2 / denom : kDivergent; };

    CrbRecord r;
    r.crb_alpha_r = bound(2.0 * p * rcs_sum);
    r.crb_alpha_i = r.crb_alpha_r;
    r.crb_alpha = r.crb_alpha_r + r.crb_alpha_i;
    r.crb_x = bound(2.0 * p * alpha2 * kin_sum[0]);
    r.crb_y = bound(2.0 * p * alpha2 * kin_sum[1]);
    r.crb_vx = bound(2.0 * p * alpha2 * kin_sum[2]);
    r.crb_vy = bound(2.0 * p * alpha2 * kin_sum[3]);

    CrbReport report;
    report.method = CrbMethod::ClosedForm33;
    report.targets.push_back(r);
    return report;
}

} // namespace nfcrb
