#pragma once

// Reference computations used only by tests. Nothing here calls into the
// code paths it is used to check (backprop, table decoding, ...).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ndec/mlp.hpp"

namespace ndec::testing {

/// Gaussian tail probability Q(x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

inline std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Mean BCE written out element by element.
inline double bce_reference(const Tensor2& pred, const Tensor2& target) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < pred.rows(); ++i)
        for (Eigen::Index j = 0; j < pred.cols(); ++j) {
            const double p = std::clamp(pred(i, j), 1e-12, 1.0 - 1e-12);
            const double t = target(i, j);
            sum += -t * std::log(p) - (1.0 - t) * std::log(1.0 - p);
        }
    return sum / static_cast<double>(pred.size());
}

/// Central-difference gradient of the train-mode mean BCE with respect to
/// every trainable parameter, in Mlp::trainable_parameters() order.
inline std::vector<Tensor2> finite_difference_gradients(Mlp model, const Tensor2& x, const Tensor2& target,
                                                        double h = 1e-5) {
    auto loss_at = [&](Mlp& m) { return bce_reference(m.forward(x, Mode::train), target); };
    std::vector<Tensor2> grads;
    const auto params = model.trainable_parameters();
    for (auto* p : params) {
        Tensor2 g(p->rows(), p->cols());
        for (Eigen::Index i = 0; i < p->size(); ++i) {
            const double saved = p->data()[i];
            p->data()[i] = saved + h;
            const double up = loss_at(model);
            p->data()[i] = saved - h;
            const double down = loss_at(model);
            p->data()[i] = saved;
            g.data()[i] = (up - down) / (2.0 * h);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

/// max over entries of |a - b| / max(|a|, |b|, floor). The floor sits above the
/// ~1e-11 rounding noise of central differences on entries whose true gradient
/// is zero (a dense bias feeding batch norm).
inline double max_relative_error(const std::vector<Tensor2>& a, const std::vector<Tensor2>& b, double floor = 1e-6) {
    double worst = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t)
        for (Eigen::Index i = 0; i < a[t].size(); ++i) {
            const double x = a[t].data()[i];
            const double y = b[t].data()[i];
            worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor}));
        }
    return worst;
}

}  // namespace ndec::testing
