#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "ndec/channel.hpp"
#include "ndec/linear_code.hpp"
#include "ndec/mlp.hpp"
#include "ndec/optim.hpp"
#include "ndec/rng.hpp"

namespace ndec {

struct TrainConfig {
    std::size_t batch_size = 2048;
    std::uint64_t total_examples = 10'000'000;
    std::size_t epochs = 10;
    double train_ebn0_db = 4.0;
    NoiseMode noise_mode = NoiseMode::rate_normalized;
    std::size_t validation_examples = 100'000;
    std::uint64_t seed = 1;

    void validate() const;
    /// floor(total / batch / epochs), at least 1.
    std::size_t batches_per_epoch() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr = 0.0;
};

struct TrainResult {
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
    double best_val_loss = 0.0;
};

/// One Adam step on a batch; returns the batch loss before the update.
double train_step(Mlp& model, AdamState& adam, const Tensor2& inputs, const Tensor2& targets, double lr);

/// Mean BCE of the infer-mode network over a dataset, evaluated in chunks.
double evaluate_loss(const Mlp& model, const Tensor2& inputs, const Tensor2& targets, std::size_t chunk = 4096);

/// Streams fresh zero-codeword batches at the configured Eb/N0, tracks the
/// validation loss on a seed-frozen set after each epoch and leaves the
/// best-validation parameters in `model`. `on_best` fires whenever a new best
/// epoch is reached. On a numeric fault the best parameters seen so far are
/// restored before the exception propagates.
TrainResult train(Mlp& model, const LinearCode& code, const TrainConfig& config, const LrSchedule& schedule, Rng& rng,
                  const std::function<void(const Mlp&, const EpochRecord&)>& on_best = {},
                  std::ostream* progress = nullptr);

/// History CSV: epoch,train_loss,val_loss,lr.
void write_history_csv(const std::vector<EpochRecord>& history, std::ostream& out);

}  // namespace ndec
