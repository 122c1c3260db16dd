#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ndec/tensor.hpp"

namespace ndec {

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t step_count = 0;
    std::vector<Tensor2> m;
    std::vector<Tensor2> v;
};

/// Bias-corrected Adam update of params in place. Moment buffers are
/// created on the first call to match the parameter shapes.
void adam_step(std::span<Tensor2* const> params, std::span<const Tensor2> grads, AdamState& state, double lr);

enum class ScheduleKind { constant, plateau, triangular };

/// Learning-rate policy.
///
/// plateau: starts at `initial`, multiplied by `factor` whenever `patience`
/// consecutive epochs fail to strictly improve the best validation loss. The
/// wait counter resets on improvement and after each reduction.
///
/// triangular: piecewise linear between `min_lr` and `max_lr`, period
/// 2 * half_cycle iterations, starting at the minimum.
struct LrSchedule {
    ScheduleKind kind = ScheduleKind::constant;
    double initial = 1e-3;
    double factor = 0.1;
    std::size_t patience = 5;
    double min_lr = 1e-5;
    double max_lr = 1e-3;
    std::size_t half_cycle = 64;

    static LrSchedule constant(double lr);
    static LrSchedule plateau(double initial = 1e-3, double factor = 0.1, std::size_t patience = 5);
    static LrSchedule triangular(double min_lr = 1e-5, double max_lr = 1e-3, std::size_t half_cycle = 64);

    void validate() const;

    /// Per-iteration policies read `iteration`; plateau replays `history`
    /// (validation losses in epoch order) and returns the rate in force after
    /// the last recorded epoch.
    double lr_at(std::uint64_t iteration, std::span<const double> history) const;
};

}  // namespace ndec
