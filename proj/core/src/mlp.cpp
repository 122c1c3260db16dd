#include "ndec/mlp.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "ndec/errors.hpp"

namespace ndec {

namespace {

std::uint64_t next_model_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

void check_finite(const Tensor2& t, std::size_t layer, const char* what) {
    if (!t.allFinite()) throw NumericFault(layer, what);
}

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

const char* to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::dense: return "dense";
        case LayerKind::batch_norm: return "batch_norm";
        case LayerKind::relu: return "relu";
        case LayerKind::sigmoid: return "sigmoid";
        case LayerKind::concat_skip: return "concat_skip";
    }
    return "unknown";
}

Tensor2 glorot_normal_init(std::size_t rows, std::size_t cols, Rng& rng) {
    if (rows < 1 || cols < 1) throw RangeError("weight matrix dimensions must be >= 1");
    const double stddev = std::sqrt(2.0 / static_cast<double>(rows + cols));
    Tensor2 w(idx(rows), idx(cols));
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = stddev * rng.normal();
    return w;
}

Mlp::Mlp(std::size_t input_dim, std::vector<LayerSpec> specs, Rng& rng) : input_dim_(input_dim), id_(next_model_id()) {
    layers_.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) layers_[i].spec = specs[i];
    build(&rng);
}

Mlp::Mlp(std::size_t input_dim, std::vector<LayerSpec> specs) : input_dim_(input_dim), id_(next_model_id()) {
    layers_.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) layers_[i].spec = specs[i];
    build(nullptr);
}

Mlp::Mlp(const Mlp& other)
    : input_dim_(other.input_dim_), layers_(other.layers_), id_(next_model_id()), generation_(0) {}

Mlp& Mlp::operator=(const Mlp& other) {
    if (this != &other) {
        input_dim_ = other.input_dim_;
        layers_ = other.layers_;
        ++generation_;
    }
    return *this;
}

void Mlp::build(Rng* rng) {
    if (input_dim_ < 1) throw ConfigError("network input dimension must be >= 1");
    if (layers_.size() < 2 || layers_.back().spec.kind != LayerKind::sigmoid ||
        layers_[layers_.size() - 2].spec.kind != LayerKind::dense)
        throw ConfigError("network must end with dense + sigmoid");

    std::size_t width = input_dim_;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        auto& layer = layers_[i];
        layer.in_dim = width;
        switch (layer.spec.kind) {
            case LayerKind::dense:
                if (layer.spec.width < 1) throw ConfigError("dense layer " + std::to_string(i) + " has zero width");
                layer.out_dim = layer.spec.width;
                layer.weight = rng ? glorot_normal_init(width, layer.out_dim, *rng) : Tensor2::Zero(idx(width), idx(layer.out_dim));
                layer.bias = Tensor2::Zero(1, idx(layer.out_dim));
                break;
            case LayerKind::batch_norm:
                layer.out_dim = width;
                layer.gamma = Tensor2::Ones(1, idx(width));
                layer.beta = Tensor2::Zero(1, idx(width));
                layer.running_mean = Tensor2::Zero(1, idx(width));
                layer.running_var = Tensor2::Ones(1, idx(width));
                break;
            case LayerKind::relu:
            case LayerKind::sigmoid:
                layer.out_dim = width;
                break;
            case LayerKind::concat_skip:
                if (layer.spec.source >= i)
                    throw ConfigError("concat_skip source must precede layer " + std::to_string(i));
                layer.out_dim = width + layers_[layer.spec.source].out_dim;
                break;
        }
        width = layer.out_dim;
    }
}

std::vector<LayerSpec> Mlp::specs() const {
    std::vector<LayerSpec> out;
    out.reserve(layers_.size());
    for (const auto& l : layers_) out.push_back(l.spec);
    return out;
}

std::vector<Layer>& Mlp::mutable_layers() noexcept {
    ++generation_;
    return layers_;
}

std::vector<Tensor2*> Mlp::trainable_parameters() {
    ++generation_;
    std::vector<Tensor2*> out;
    for (auto& l : layers_) {
        if (l.spec.kind == LayerKind::dense) {
            out.push_back(&l.weight);
            out.push_back(&l.bias);
        } else if (l.spec.kind == LayerKind::batch_norm) {
            out.push_back(&l.gamma);
            out.push_back(&l.beta);
        }
    }
    return out;
}

std::vector<const Tensor2*> Mlp::trainable_parameters() const {
    std::vector<const Tensor2*> out;
    for (const auto& l : layers_) {
        if (l.spec.kind == LayerKind::dense) {
            out.push_back(&l.weight);
            out.push_back(&l.bias);
        } else if (l.spec.kind == LayerKind::batch_norm) {
            out.push_back(&l.gamma);
            out.push_back(&l.beta);
        }
    }
    return out;
}

std::vector<Tensor2*> Mlp::all_parameters() {
    ++generation_;
    std::vector<Tensor2*> out;
    for (auto& l : layers_) {
        if (l.spec.kind == LayerKind::dense) {
            out.push_back(&l.weight);
            out.push_back(&l.bias);
        } else if (l.spec.kind == LayerKind::batch_norm) {
            out.push_back(&l.gamma);
            out.push_back(&l.beta);
            out.push_back(&l.running_mean);
            out.push_back(&l.running_var);
        }
    }
    return out;
}

std::vector<const Tensor2*> Mlp::all_parameters() const {
    std::vector<const Tensor2*> out;
    for (const auto& l : layers_) {
        if (l.spec.kind == LayerKind::dense) {
            out.push_back(&l.weight);
            out.push_back(&l.bias);
        } else if (l.spec.kind == LayerKind::batch_norm) {
            out.push_back(&l.gamma);
            out.push_back(&l.beta);
            out.push_back(&l.running_mean);
            out.push_back(&l.running_var);
        }
    }
    return out;
}

std::size_t Mlp::trainable_count() const {
    std::size_t count = 0;
    for (const auto* p : trainable_parameters()) count += static_cast<std::size_t>(p->size());
    return count;
}

Tensor2 Mlp::run(const Tensor2& x, Mode mode, ForwardCache* cache, std::vector<Layer>* stats) const {
    if (static_cast<std::size_t>(x.cols()) != input_dim_)
        throw DimensionError("input has " + std::to_string(x.cols()) + " columns, network expects " +
                             std::to_string(input_dim_));
    check_finite(x, 0, "non-finite network input");

    const std::size_t count = layers_.size();
    std::vector<Tensor2> local_outputs;
    std::vector<Tensor2>& outputs = cache ? cache->outputs : local_outputs;
    outputs.assign(count, Tensor2());
    if (cache) {
        cache->model_id = id_;
        cache->generation = generation_;
        cache->mode = mode;
        cache->input = x;
        cache->normalized.assign(count, Tensor2());
        cache->inv_std.assign(count, Tensor2());
    }

    const auto batch = static_cast<double>(x.rows());
    for (std::size_t i = 0; i < count; ++i) {
        const Tensor2& in = i == 0 ? x : outputs[i - 1];
        const auto& layer = layers_[i];
        Tensor2& out = outputs[i];
        switch (layer.spec.kind) {
            case LayerKind::dense:
                out.noalias() = in * layer.weight;
                out.rowwise() += layer.bias.row(0);
                break;
            case LayerKind::batch_norm: {
                Tensor2 mean, inv_std;
                if (mode == Mode::train) {
                    mean = in.colwise().mean();
                    Tensor2 centered = in.rowwise() - mean.row(0);
                    Tensor2 var = centered.array().square().colwise().sum() / batch;
                    inv_std = (var.array() + kBatchNormEps).rsqrt();
                    if (stats) {
                        auto& target = (*stats)[i];
                        target.running_mean = kBatchNormMomentum * target.running_mean + (1.0 - kBatchNormMomentum) * mean;
                        target.running_var = kBatchNormMomentum * target.running_var + (1.0 - kBatchNormMomentum) * var;
                    }
                } else {
                    mean = layer.running_mean;
                    inv_std = (layer.running_var.array() + kBatchNormEps).rsqrt();
                }
                Tensor2 xhat = (in.rowwise() - mean.row(0)).array().rowwise() * inv_std.row(0).array();
                out = (xhat.array().rowwise() * layer.gamma.row(0).array()).rowwise() + layer.beta.row(0).array();
                if (cache) {
                    cache->normalized[i] = std::move(xhat);
                    cache->inv_std[i] = std::move(inv_std);
                }
                break;
            }
            case LayerKind::relu:
                out = in.cwiseMax(0.0);
                break;
            case LayerKind::sigmoid:
                out = (1.0 + (-in.array()).exp()).inverse();
                if (i + 1 == count) out = out.cwiseMax(kProbabilityClip).cwiseMin(1.0 - kProbabilityClip);
                break;
            case LayerKind::concat_skip: {
                const Tensor2& skip = outputs[layer.spec.source];
                out.resize(in.rows(), idx(layer.out_dim));
                out.leftCols(in.cols()) = in;
                out.rightCols(skip.cols()) = skip;
                break;
            }
        }
        check_finite(out, i, to_string(layer.spec.kind));
    }
    Tensor2 result = outputs.back();
    return result;
}

Tensor2 Mlp::forward(const Tensor2& x, Mode mode, ForwardCache* cache) {
    return run(x, mode, cache, mode == Mode::train ? &layers_ : nullptr);
}

Tensor2 Mlp::predict(const Tensor2& x) const { return run(x, Mode::infer, nullptr, nullptr); }

Gradients Mlp::backward(const ForwardCache& cache, const Tensor2& target) const {
    if (cache.model_id != id_ || cache.generation != generation_)
        throw ContractViolation("stale forward cache: parameters changed since the forward pass");
    if (cache.mode != Mode::train) throw ContractViolation("backward requires a train-mode forward cache");
    const std::size_t count = layers_.size();
    if (cache.outputs.size() != count) throw ContractViolation("forward cache does not match the network");
    const Tensor2& pred = cache.outputs.back();
    if (target.rows() != pred.rows() || target.cols() != pred.cols())
        throw DimensionError("target shape does not match network output");

    Gradients grads;
    std::vector<std::size_t> slot(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
        slot[i] = grads.tensors.size();
        if (layers_[i].spec.kind == LayerKind::dense) {
            grads.tensors.emplace_back(Tensor2::Zero(layers_[i].weight.rows(), layers_[i].weight.cols()));
            grads.tensors.emplace_back(Tensor2::Zero(1, layers_[i].bias.cols()));
        } else if (layers_[i].spec.kind == LayerKind::batch_norm) {
            grads.tensors.emplace_back(Tensor2::Zero(1, layers_[i].gamma.cols()));
            grads.tensors.emplace_back(Tensor2::Zero(1, layers_[i].beta.cols()));
        }
    }

    // Sigmoid + mean BCE collapse to (pred - target) / (batch * n) at the
    // pre-activation of the output layer.
    const double denom = static_cast<double>(pred.rows()) * static_cast<double>(pred.cols());
    Tensor2 g = (pred - target) / denom;

    std::vector<Tensor2> extra(count);
    const auto batch = static_cast<double>(pred.rows());
    for (std::size_t i = count - 1; i-- > 0;) {
        if (extra[i].size() > 0) g += extra[i];
        const auto& layer = layers_[i];
        const Tensor2& in = i == 0 ? cache.input : cache.outputs[i - 1];
        switch (layer.spec.kind) {
            case LayerKind::dense: {
                grads.tensors[slot[i]].noalias() = in.transpose() * g;
                grads.tensors[slot[i] + 1] = g.colwise().sum();
                Tensor2 next = g * layer.weight.transpose();
                g = std::move(next);
                break;
            }
            case LayerKind::batch_norm: {
                const Tensor2& xhat = cache.normalized[i];
                const Tensor2& inv_std = cache.inv_std[i];
                grads.tensors[slot[i]] = (g.array() * xhat.array()).colwise().sum();
                grads.tensors[slot[i] + 1] = g.colwise().sum();
                Tensor2 dxhat = g.array().rowwise() * layer.gamma.row(0).array();
                Tensor2 sum_d = dxhat.colwise().sum();
                Tensor2 sum_dx = (dxhat.array() * xhat.array()).colwise().sum();
                Tensor2 dx = (batch * dxhat.array() - (xhat.array().rowwise() * sum_dx.row(0).array())).rowwise() -
                             sum_d.row(0).array();
                g = (dx.array().rowwise() * inv_std.row(0).array()) / batch;
                break;
            }
            case LayerKind::relu:
                g = (cache.outputs[i].array() > 0.0).select(g, 0.0);
                break;
            case LayerKind::sigmoid: {
                const Tensor2& s = cache.outputs[i];
                g = g.array() * s.array() * (1.0 - s.array());
                break;
            }
            case LayerKind::concat_skip: {
                const auto skip_cols = idx(layers_[layer.spec.source].out_dim);
                Tensor2 skip_grad = g.rightCols(skip_cols);
                if (extra[layer.spec.source].size() == 0)
                    extra[layer.spec.source] = std::move(skip_grad);
                else
                    extra[layer.spec.source] += skip_grad;
                Tensor2 next = g.leftCols(idx(layer.in_dim));
                g = std::move(next);
                break;
            }
        }
    }
    return grads;
}

double bce_loss(const Tensor2& pred, const Tensor2& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw DimensionError("prediction and target shapes differ");
    if (pred.size() == 0) throw DimensionError("empty prediction");
    const auto p = pred.array().max(kProbabilityClip).min(1.0 - kProbabilityClip);
    const auto losses = -(target.array() * p.log() + (1.0 - target.array()) * (1.0 - p).log());
    return losses.sum() / static_cast<double>(pred.size());
}

}  // namespace ndec
