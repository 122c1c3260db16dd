#include "ndec/architectures.hpp"

#include <charconv>

#include "ndec/channel.hpp"
#include "ndec/errors.hpp"

namespace ndec {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::bch6345: return "bch6345";
        case Variant::bch6336: return "bch6336";
        case Variant::bch6336_no_bn: return "bch6336_no_bn";
        case Variant::bch6336_relu_no_bn: return "bch6336_relu_no_bn";
        case Variant::custom: return "custom";
    }
    return "custom";
}

Variant parse_variant(const std::string& name) {
    for (auto v : {Variant::bch6345, Variant::bch6336, Variant::bch6336_no_bn, Variant::bch6336_relu_no_bn,
                   Variant::custom})
        if (to_string(v) == name) return v;
    throw ConfigError("unknown architecture variant '" + name + "'");
}

std::vector<LayerSpec> custom_specs(std::size_t output_dim, const CustomArchitecture& arch) {
    if (arch.hidden.empty()) throw ConfigError("architecture needs at least one hidden block");
    if (arch.activation != LayerKind::relu && arch.activation != LayerKind::sigmoid)
        throw ConfigError("hidden activation must be relu or sigmoid");
    if (arch.skip) {
        const auto [from, to] = *arch.skip;
        if (from + 1 >= to || to >= arch.hidden.size()) throw ConfigError("skip must join block a to a later block b > a + 1");
    }

    std::vector<LayerSpec> specs;
    std::vector<std::size_t> block_output(arch.hidden.size());
    for (std::size_t b = 0; b < arch.hidden.size(); ++b) {
        if (arch.skip && arch.skip->second == b) specs.push_back(LayerSpec::concat_skip(block_output[arch.skip->first]));
        specs.push_back(LayerSpec::dense(arch.hidden[b]));
        if (arch.batch_norm) specs.push_back(LayerSpec::batch_norm());
        specs.push_back({arch.activation, 0, 0});
        block_output[b] = specs.size() - 1;
    }
    specs.push_back(LayerSpec::dense(output_dim));
    specs.push_back(LayerSpec::sigmoid());
    return specs;
}

std::vector<LayerSpec> architecture_specs(const LinearCode& code, Variant variant, const CustomArchitecture& custom) {
    const bool is_6345 = code.n() == 63 && code.k() == 45;
    const bool is_6336 = code.n() == 63 && code.k() == 36;
    switch (variant) {
        case Variant::bch6345: {
            if (!is_6345) throw ConfigError("variant bch6345 requires the (63,45) code");
            return custom_specs(code.n(), {std::vector<std::size_t>(6, 300), LayerKind::relu, false, std::nullopt});
        }
        case Variant::bch6336:
        case Variant::bch6336_no_bn:
        case Variant::bch6336_relu_no_bn: {
            if (!is_6336) throw ConfigError("variant " + to_string(variant) + " requires the (63,36) code");
            CustomArchitecture arch;
            arch.hidden.assign(7, 8 * code.n());
            arch.activation = variant == Variant::bch6336_relu_no_bn ? LayerKind::relu : LayerKind::sigmoid;
            arch.batch_norm = variant == Variant::bch6336;
            arch.skip = std::pair<std::size_t, std::size_t>{0, 3};
            return custom_specs(code.n(), arch);
        }
        case Variant::custom:
            return custom_specs(code.n(), custom);
    }
    throw ConfigError("unknown variant");
}

Mlp build_architecture(const LinearCode& code, Variant variant, Rng& rng, const CustomArchitecture& custom) {
    return Mlp(network_input_dim(code), architecture_specs(code, variant, custom), rng);
}

std::vector<std::size_t> parse_hidden_widths(const std::string& text) {
    auto parse_count = [&](std::string_view part) {
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc{} || ptr != part.data() + part.size() || value == 0)
            throw ConfigError("invalid hidden layer specification '" + text + "'");
        return value;
    };

    std::vector<std::size_t> widths;
    if (auto x = text.find('x'); x != std::string::npos) {
        const auto count = parse_count(std::string_view(text).substr(0, x));
        const auto width = parse_count(std::string_view(text).substr(x + 1));
        widths.assign(count, width);
        return widths;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        widths.push_back(parse_count(std::string_view(text).substr(start, comma - start)));
        start = comma + 1;
    }
    return widths;
}

}  // namespace ndec
