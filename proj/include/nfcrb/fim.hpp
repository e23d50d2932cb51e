#pragma once

#include "nfcrb/scene.hpp"

#include <Eigen/Dense>

namespace nfcrb {

/// Derivative of the per-snapshot channel matrix A_m with respect to one parameter.
struct ChannelDerivative {
    Eigen::MatrixXcd matrix;  ///< N_r x N_t
    ParamKind kind = ParamKind::X;
    int target_index = 0;
    int snapshot = 1;
};

/// How the transmit symbols enter the Fisher information.
struct TransmitSpec {
    enum class Mode { IsotropicIdeal, ExplicitSymbols };

    Mode mode = Mode::IsotropicIdeal;
    Eigen::MatrixXcd symbols;  ///< N_t x M, used in ExplicitSymbols mode

    static TransmitSpec isotropic() { return {}; }
    static TransmitSpec explicit_symbols(Eigen::MatrixXcd x) {
        return {Mode::ExplicitSymbols, std::move(x)};
    }
};

struct FimOptions {
    int workers = 1;
    /// Test hook: multiplies the analytic location derivatives. Leave at 1.
    double location_derivative_scale = 1.0;
};

/// Real symmetric 6Q x 6Q Fisher information in the stacked parameter order.
///
/// Stored as an unscaled Gram sum times a scalar (2P/sigma^2 for isotropic
/// transmission, 2/sigma^2 for explicit symbols) so that power and noise
/// scaling act exactly.
class FisherInfo {
public:
    FisherInfo(Eigen::MatrixXd unscaled, double scale);

    /// Wrap an already scaled matrix (scale 1).
    static FisherInfo from_matrix(Eigen::MatrixXd matrix) { return {std::move(matrix), 1.0}; }

    Eigen::MatrixXd matrix() const { return scale_ * unscaled_; }
    const Eigen::MatrixXd& unscaled() const { return unscaled_; }
    double scale() const { return scale_; }
    double operator()(int i, int j) const { return scale_ * unscaled_(i, j); }
    int size() const { return static_cast<int>(unscaled_.rows()); }
    int target_count() const { return size() / 6; }

private:
    Eigen::MatrixXd unscaled_;
    double scale_;
};

/// alpha_q a_R(m,q) a_T(m,q)^T
Eigen::MatrixXcd channel_matrix(const Scene& scene, int m, int q);

ChannelDerivative d_channel(const Scene& scene, int m, int q, ParamKind kind);

/// Slepian-Bangs Fisher information assembled from analytic derivatives.
FisherInfo fim(const Scene& scene, const TransmitSpec& transmit = TransmitSpec::isotropic(),
               const FimOptions& options = {});

} // namespace nfcrb
