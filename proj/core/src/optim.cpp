#include "ndec/optim.hpp"

#include <cmath>

#include "ndec/errors.hpp"

namespace ndec {

void adam_step(std::span<Tensor2* const> params, std::span<const Tensor2> grads, AdamState& state, double lr) {
    if (params.size() != grads.size()) throw DimensionError("parameter and gradient counts differ");
    if (state.m.empty()) {
        for (const auto* p : params) {
            state.m.emplace_back(Tensor2::Zero(p->rows(), p->cols()));
            state.v.emplace_back(Tensor2::Zero(p->rows(), p->cols()));
        }
    }
    if (state.m.size() != params.size()) throw DimensionError("optimizer state does not match parameters");

    ++state.step_count;
    const auto t = static_cast<double>(state.step_count);
    const double correction1 = 1.0 - std::pow(state.beta1, t);
    const double correction2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = *params[i];
        const auto& g = grads[i];
        if (g.rows() != p.rows() || g.cols() != p.cols()) throw DimensionError("gradient shape mismatch");
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g.cwiseProduct(g);
        p.array() -= lr * (state.m[i].array() / correction1) /
                     ((state.v[i].array() / correction2).sqrt() + state.eps);
    }
}

LrSchedule LrSchedule::constant(double lr) {
    LrSchedule s;
    s.kind = ScheduleKind::constant;
    s.initial = lr;
    return s;
}

LrSchedule LrSchedule::plateau(double initial, double factor, std::size_t patience) {
    LrSchedule s;
    s.kind = ScheduleKind::plateau;
    s.initial = initial;
    s.factor = factor;
    s.patience = patience;
    s.validate();
    return s;
}

LrSchedule LrSchedule::triangular(double min_lr, double max_lr, std::size_t half_cycle) {
    LrSchedule s;
    s.kind = ScheduleKind::triangular;
    s.min_lr = min_lr;
    s.max_lr = max_lr;
    s.half_cycle = half_cycle;
    s.validate();
    return s;
}

void LrSchedule::validate() const {
    switch (kind) {
        case ScheduleKind::constant:
            if (!(initial > 0.0)) throw RangeError("learning rate must be positive");
            break;
        case ScheduleKind::plateau:
            if (!(initial > 0.0) || !(factor > 0.0) || factor >= 1.0) throw RangeError("invalid plateau schedule");
            if (patience < 1) throw RangeError("plateau patience must be >= 1");
            break;
        case ScheduleKind::triangular:
            if (!(min_lr > 0.0) || !(min_lr < max_lr)) throw RangeError("triangular schedule requires 0 < min < max");
            if (half_cycle < 1) throw RangeError("half cycle must be >= 1");
            break;
    }
}

double LrSchedule::lr_at(std::uint64_t iteration, std::span<const double> history) const {
    switch (kind) {
        case ScheduleKind::constant:
            return initial;
        case ScheduleKind::triangular: {
            const auto period = 2 * static_cast<std::uint64_t>(half_cycle);
            const double phase = static_cast<double>(iteration % period) / static_cast<double>(half_cycle);
            return min_lr + (max_lr - min_lr) * (1.0 - std::abs(phase - 1.0));
        }
        case ScheduleKind::plateau: {
            double lr = initial;
            double best = INFINITY;
            std::size_t wait = 0;
            for (double loss : history) {
                if (loss < best) {
                    best = loss;
                    wait = 0;
                } else if (++wait >= patience) {
                    lr *= factor;
                    wait = 0;
                }
            }
            return lr;
        }
    }
    return initial;
}

}  // namespace ndec
