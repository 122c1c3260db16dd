#include "ndec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ndec/errors.hpp"

namespace ndec {

void TrainConfig::validate() const {
    if (batch_size < 1) throw RangeError("batch size must be >= 1");
    if (total_examples < batch_size) throw RangeError("total examples must be >= batch size");
    if (epochs < 1) throw RangeError("epoch count must be >= 1");
    if (validation_examples < 1) throw RangeError("validation set must be non-empty");
}

std::size_t TrainConfig::batches_per_epoch() const {
    const auto per_epoch = total_examples / batch_size / epochs;
    return std::max<std::size_t>(1, static_cast<std::size_t>(per_epoch));
}

double train_step(Mlp& model, AdamState& adam, const Tensor2& inputs, const Tensor2& targets, double lr) {
    ForwardCache cache;
    const Tensor2 pred = model.forward(inputs, Mode::train, &cache);
    const double loss = bce_loss(pred, targets);
    const Gradients grads = model.backward(cache, targets);
    const auto params = model.trainable_parameters();
    adam_step(params, grads.tensors, adam, lr);
    return loss;
}

double evaluate_loss(const Mlp& model, const Tensor2& inputs, const Tensor2& targets, std::size_t chunk) {
    const auto rows = inputs.rows();
    const auto step = static_cast<Eigen::Index>(std::max<std::size_t>(chunk, 1));
    double total = 0.0;
    for (Eigen::Index start = 0; start < rows; start += step) {
        const auto count = std::min(step, rows - start);
        const Tensor2 pred = model.predict(inputs.middleRows(start, count));
        total += bce_loss(pred, targets.middleRows(start, count)) * static_cast<double>(count);
    }
    return total / static_cast<double>(rows);
}

TrainResult train(Mlp& model, const LinearCode& code, const TrainConfig& config, const LrSchedule& schedule, Rng& rng,
                  const std::function<void(const Mlp&, const EpochRecord&)>& on_best, std::ostream* progress) {
    config.validate();
    schedule.validate();
    if (model.input_dim() != network_input_dim(code) || model.output_dim() != code.n())
        throw ConfigError("network dimensions do not match the code");

    const double sigma = sigma_from_ebn0(config.train_ebn0_db, code.rate(), config.noise_mode);
    Rng validation_rng(derive_seed(config.seed, 0x7661'6c69'6461'7465ull));
    const TrainingBatch validation = make_training_batch(code, sigma, config.validation_examples, validation_rng);

    TrainResult result;
    result.best_val_loss = std::numeric_limits<double>::infinity();
    Mlp best = model;
    AdamState adam;
    std::vector<double> val_history;
    std::uint64_t iteration = 0;
    const auto batches = config.batches_per_epoch();

    try {
        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
            const double epoch_lr = schedule.lr_at(iteration, val_history);
            double loss_sum = 0.0;
            for (std::size_t b = 0; b < batches; ++b, ++iteration) {
                const double lr = schedule.kind == ScheduleKind::triangular ? schedule.lr_at(iteration, {}) : epoch_lr;
                const TrainingBatch batch = make_training_batch(code, sigma, config.batch_size, rng);
                loss_sum += train_step(model, adam, batch.inputs, batch.targets, lr);
            }

            EpochRecord record;
            record.epoch = epoch;
            record.train_loss = loss_sum / static_cast<double>(batches);
            record.val_loss = evaluate_loss(model, validation.inputs, validation.targets);
            record.lr = epoch_lr;
            if (!std::isfinite(record.val_loss)) throw NumericFault(model.layers().size() - 1, "validation loss");
            val_history.push_back(record.val_loss);
            result.history.push_back(record);

            if (progress) {
                char line[160];
                std::snprintf(line, sizeof line, "epoch %zu  train_loss %.6g  val_loss %.6g  lr %.3g\n", epoch,
                              record.train_loss, record.val_loss, record.lr);
                *progress << line << std::flush;
            }
            if (record.val_loss < result.best_val_loss) {
                result.best_val_loss = record.val_loss;
                result.best_epoch = epoch;
                best = model;
                if (on_best) on_best(best, record);
            }
        }
    } catch (const NumericFault&) {
        model = best;
        throw;
    }
    model = best;
    return result;
}

void write_history_csv(const std::vector<EpochRecord>& history, std::ostream& out) {
    out << "epoch,train_loss,val_loss,lr\n";
    char line[128];
    for (const auto& r : history) {
        std::snprintf(line, sizeof line, "%zu,%.6g,%.6g,%.6g\n", r.epoch, r.train_loss, r.val_loss, r.lr);
        out << line;
    }
}

}  // namespace ndec
