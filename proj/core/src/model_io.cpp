#include "ndec/model_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "ndec/errors.hpp"

namespace ndec {

namespace {

class Writer {
public:
    void bytes(const char* s, std::size_t n) { buf_.insert(buf_.end(), s, s + n); }
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    std::vector<std::uint8_t>& data() { return buf_; }

private:
    void put(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    double f64() { return std::bit_cast<double>(get(8)); }
    void expect(const char* s, std::size_t n) {
        need(n);
        for (std::size_t i = 0; i < n; ++i)
            if (data_[pos_ + i] != static_cast<std::uint8_t>(s[i])) throw CorruptModel("bad magic: not a model file");
        pos_ += n;
    }
    std::size_t position() const { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > size_) throw CorruptModel("model file truncated");
    }
    std::uint64_t get(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= std::uint64_t{data_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

std::uint16_t checked_u16(std::size_t v, const char* what) {
    if (v > 0xFFFF) throw ConfigError(std::string(what) + " does not fit the model header");
    return static_cast<std::uint16_t>(v);
}

}  // namespace

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t size) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    while (size > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
        crc = ::crc32(crc, data, chunk);
        data += chunk;
        size -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> serialize_model(const Mlp& model, std::size_t n, std::size_t k) {
    Writer w;
    w.bytes("NDEC", 4);
    w.u16(kModelFormatVersion);
    w.u16(checked_u16(n, "n"));
    w.u16(checked_u16(k, "k"));
    w.u16(checked_u16(model.layers().size(), "layer count"));
    for (const auto& layer : model.layers()) {
        w.u8(static_cast<std::uint8_t>(layer.spec.kind));
        switch (layer.spec.kind) {
            case LayerKind::dense:
                w.u32(static_cast<std::uint32_t>(layer.in_dim));
                w.u32(static_cast<std::uint32_t>(layer.out_dim));
                break;
            case LayerKind::batch_norm:
            case LayerKind::relu:
            case LayerKind::sigmoid:
                w.u32(static_cast<std::uint32_t>(layer.out_dim));
                break;
            case LayerKind::concat_skip:
                w.u32(static_cast<std::uint32_t>(layer.spec.source));
                w.u32(static_cast<std::uint32_t>(layer.in_dim));
                w.u32(static_cast<std::uint32_t>(layer.out_dim));
                break;
        }
    }
    for (const auto* p : model.all_parameters())
        for (Eigen::Index i = 0; i < p->size(); ++i) w.f64(p->data()[i]);
    const auto crc = crc32_of(w.data().data(), w.data().size());
    w.u32(crc);
    return std::move(w.data());
}

StoredModel deserialize_model(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4 + 8 + 4) throw CorruptModel("model file truncated");
    const std::size_t body = bytes.size() - 4;
    Reader tail(bytes.data() + body, 4);
    if (tail.u32() != crc32_of(bytes.data(), body)) throw CorruptModel("model file CRC mismatch");

    Reader r(bytes.data(), body);
    r.expect("NDEC", 4);
    if (const auto version = r.u16(); version != kModelFormatVersion)
        throw CorruptModel("unsupported model format version " + std::to_string(version));
    const auto n = r.u16();
    const auto k = r.u16();
    const auto count = r.u16();

    std::vector<LayerSpec> specs;
    std::vector<std::vector<std::uint32_t>> dims;
    for (std::uint16_t i = 0; i < count; ++i) {
        const auto tag = r.u8();
        if (tag > static_cast<std::uint8_t>(LayerKind::concat_skip)) throw CorruptModel("unknown layer tag");
        const auto kind = static_cast<LayerKind>(tag);
        std::vector<std::uint32_t> d;
        const int dim_count = kind == LayerKind::dense ? 2 : kind == LayerKind::concat_skip ? 3 : 1;
        for (int j = 0; j < dim_count; ++j) d.push_back(r.u32());
        LayerSpec spec{kind, 0, 0};
        if (kind == LayerKind::dense) spec.width = d[1];
        if (kind == LayerKind::concat_skip) spec.source = d[0];
        specs.push_back(spec);
        dims.push_back(std::move(d));
    }
    if (specs.empty() || specs.front().kind != LayerKind::dense) throw CorruptModel("first layer must be dense");

    StoredModel stored{n, k, [&] {
                           try {
                               return Mlp(dims.front()[0], specs);
                           } catch (const ConfigError& e) {
                               throw CorruptModel(std::string("inconsistent layer list: ") + e.what());
                           }
                       }()};
    const auto& layers = stored.model.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& d = dims[i];
        const bool ok = layers[i].spec.kind == LayerKind::dense       ? d[0] == layers[i].in_dim && d[1] == layers[i].out_dim
                        : layers[i].spec.kind == LayerKind::concat_skip ? d[1] == layers[i].in_dim && d[2] == layers[i].out_dim
                                                                        : d[0] == layers[i].out_dim;
        if (!ok) throw CorruptModel("layer " + std::to_string(i) + " dimensions are inconsistent");
    }
    for (auto* p : stored.model.all_parameters())
        for (Eigen::Index i = 0; i < p->size(); ++i) p->data()[i] = r.f64();
    if (r.position() != body) throw CorruptModel("trailing bytes after parameters");
    if (stored.model.output_dim() != n) throw CorruptModel("network output width does not match n");
    return stored;
}

void save_model(const std::string& path, const Mlp& model, std::size_t n, std::size_t k) {
    const auto bytes = serialize_model(model, n, k);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("failed writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move model into place at '" + path + "': " + ec.message());
}

StoredModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace ndec
