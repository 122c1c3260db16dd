#include "ndec/inference.hpp"

#include <algorithm>
#include <cmath>

#include "ndec/errors.hpp"

namespace ndec {

InferenceNet::InferenceNet(const Mlp& model) : input_dim_(model.input_dim()), output_dim_(model.output_dim()) {
    const auto& layers = model.layers();
    std::vector<bool> referenced(layers.size(), false);
    for (const auto& l : layers)
        if (l.spec.kind == LayerKind::concat_skip) referenced[l.spec.source] = true;

    std::vector<std::size_t> step_of_layer(layers.size(), 0);
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        Step step;
        step.in_dim = l.in_dim;
        step.out_dim = l.out_dim;
        switch (l.spec.kind) {
            case LayerKind::dense: {
                Eigen::MatrixXd w = l.weight.transpose();
                Eigen::VectorXd b = l.bias.row(0).transpose();
                const bool fold = i + 1 < layers.size() && layers[i + 1].spec.kind == LayerKind::batch_norm &&
                                  !referenced[i];
                if (fold) {
                    const auto& bn = layers[i + 1];
                    const Eigen::VectorXd scale =
                        bn.gamma.row(0).transpose().array() / (bn.running_var.row(0).transpose().array() + kBatchNormEps).sqrt();
                    w = scale.asDiagonal() * w;
                    b = (b - bn.running_mean.row(0).transpose()).cwiseProduct(scale) + bn.beta.row(0).transpose();
                }
                step.op = Op::affine;
                step.weight = w.cast<float>();
                step.shift = b.cast<float>();
                steps_.push_back(std::move(step));
                step_of_layer[i] = steps_.size() - 1;
                if (fold) step_of_layer[++i] = steps_.size() - 1;
                continue;
            }
            case LayerKind::batch_norm: {
                const Eigen::VectorXd scale =
                    l.gamma.row(0).transpose().array() / (l.running_var.row(0).transpose().array() + kBatchNormEps).sqrt();
                step.op = Op::scale_shift;
                step.scale = scale.cast<float>();
                step.shift = (l.beta.row(0).transpose() - l.running_mean.row(0).transpose().cwiseProduct(scale)).cast<float>();
                break;
            }
            case LayerKind::relu: step.op = Op::relu; break;
            case LayerKind::sigmoid: step.op = Op::sigmoid; break;
            case LayerKind::concat_skip:
                step.op = Op::concat;
                step.source = step_of_layer[l.spec.source];
                break;
        }
        steps_.push_back(std::move(step));
        step_of_layer[i] = steps_.size() - 1;
    }
}

void InferenceNet::run(std::span<const float> input, std::span<float> output, Scratch& scratch) const {
    if (input.size() != input_dim_ || output.size() != output_dim_) throw DimensionError("inference buffer size mismatch");
    auto& buf = scratch.buffers;
    if (buf.size() != steps_.size()) buf.resize(steps_.size());

    for (std::size_t s = 0; s < steps_.size(); ++s) {
        const auto& step = steps_[s];
        const float* in_ptr = s == 0 ? input.data() : buf[s - 1].data();
        buf[s].resize(step.out_dim);
        Eigen::Map<const Eigen::VectorXf> in(in_ptr, static_cast<Eigen::Index>(step.in_dim));
        Eigen::Map<Eigen::VectorXf> out(buf[s].data(), static_cast<Eigen::Index>(step.out_dim));
        switch (step.op) {
            case Op::affine:
                out.noalias() = step.weight * in;
                out += step.shift;
                break;
            case Op::scale_shift:
                out = in.cwiseProduct(step.scale) + step.shift;
                break;
            case Op::relu:
                out = in.cwiseMax(0.0f);
                break;
            case Op::sigmoid:
                out = (1.0f + (-in.array()).exp()).inverse();
                break;
            case Op::concat: {
                const auto& skip = buf[step.source];
                std::copy(in_ptr, in_ptr + step.in_dim, buf[s].begin());
                std::copy(skip.begin(), skip.end(), buf[s].begin() + static_cast<std::ptrdiff_t>(step.in_dim));
                break;
            }
        }
    }
    std::copy(buf.back().begin(), buf.back().end(), output.begin());
}

}  // namespace ndec
