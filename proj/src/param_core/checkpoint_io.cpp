// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "param_core/checkpoint_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "param_core/errors.hpp"

namespace lawa {

namespace {

constexpr std::uint8_t kMagic[4] = {0x4C, 0x41, 0x57, 0x41};

class Writer {
public:
    template <typename T>
    void put(T value) {
        static_assert(std::is_unsigned_v<T>);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            out_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
        }
    }
    void put_bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        out_.insert(out_.end(), p, p + n);
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
    T get(const char* what) {
        need(sizeof(T), what);
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            value |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
        }
        pos_ += sizeof(T);
        return value;
    }

    std::span<const std::uint8_t> get_bytes(std::uint64_t n, const char* what) {
        need(n, what);
        auto s = bytes_.subspan(pos_, static_cast<std::size_t>(n));
        pos_ += static_cast<std::size_t>(n);
        return s;
    }

    void need(std::uint64_t n, const char* what) const {
        if (n > bytes_.size() - pos_) {
            throw FormatError(pos_, std::string("truncated checkpoint while reading ") + what);
        }
    }

    [[nodiscard]] std::size_t pos() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
    Writer w;
    w.put_bytes(kMagic, sizeof kMagic);
    w.put(kCheckpointVersion);
    w.put(ckpt.epoch);
    w.put(ckpt.step);
    w.put(static_cast<std::uint32_t>(ckpt.params.size()));
    for (const auto& e : ckpt.params) {
        w.put(static_cast<std::uint32_t>(e.name.size()));
        w.put_bytes(e.name.data(), e.name.size());
        w.put(static_cast<std::uint8_t>(e.tensor.dtype()));
        w.put(static_cast<std::uint32_t>(e.tensor.shape().size()));
        for (auto d : e.tensor.shape()) w.put(d);
        if (e.tensor.dtype() == DType::F32) {
            for (double v : e.tensor.values()) w.put(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        } else {
            for (double v : e.tensor.values()) w.put(std::bit_cast<std::uint64_t>(v));
        }
    }
    return w.take();
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    const auto magic = r.get_bytes(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw FormatError(0, "bad magic, expected \"LAWA\"");
    const auto version_at = r.pos();
    const auto version = r.get<std::uint32_t>("version");
    if (version != kCheckpointVersion) {
        throw FormatError(version_at, "unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint ckpt;
    ckpt.epoch = r.get<std::uint64_t>("epoch");
    ckpt.step = r.get<std::uint64_t>("step");
    const auto count = r.get<std::uint32_t>("tensor count");

    std::vector<Entry> entries;
    entries.reserve(std::min<std::size_t>(count, r.remaining()));
    for (std::uint32_t t = 0; t < count; ++t) {
        const auto name_at = r.pos();
        const auto name_len = r.get<std::uint32_t>("name length");
        const auto name_bytes = r.get_bytes(name_len, "name");
        std::string name(name_bytes.begin(), name_bytes.end());
        if (name.empty()) throw FormatError(name_at, "empty tensor name");
        for (const auto& e : entries) {
            if (e.name == name) throw FormatError(name_at, "duplicate tensor name '" + name + "'");
        }

        const auto dtype_at = r.pos();
        const auto dtype_raw = r.get<std::uint8_t>("dtype");
        if (dtype_raw > 1) throw FormatError(dtype_at, "unknown dtype code " + std::to_string(dtype_raw));
        const auto dtype = static_cast<DType>(dtype_raw);
        if (!entries.empty() && entries.front().tensor.dtype() != dtype) {
            throw FormatError(dtype_at, "tensor '" + name + "' mixes element types within one set");
        }

        const auto rank = r.get<std::uint32_t>("rank");
        r.need(std::uint64_t{rank} * 8, "dims");
        Shape shape(rank);
        const std::size_t width = dtype == DType::F32 ? 4 : 8;
        std::uint64_t n = 1;
        for (auto& d : shape) {
            const auto dim_at = r.pos();
            d = r.get<std::uint64_t>("dims");
            if (d != 0 && n > std::numeric_limits<std::uint64_t>::max() / width / d) {
                throw FormatError(dim_at, "tensor '" + name + "' is too large");
            }
            n *= d;
        }
        const auto data = r.get_bytes(n * width, "tensor data");
        std::vector<double> values(static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (width == 4) {
                std::uint32_t bits = 0;
                for (std::size_t b = 0; b < 4; ++b) bits |= std::uint32_t{data[4 * j + b]} << (8 * b);
                values[j] = static_cast<double>(std::bit_cast<float>(bits));
            } else {
                std::uint64_t bits = 0;
                for (std::size_t b = 0; b < 8; ++b) bits |= std::uint64_t{data[8 * j + b]} << (8 * b);
                values[j] = std::bit_cast<double>(bits);
            }
        }
        entries.push_back({std::move(name), Tensor(dtype, std::move(shape), std::move(values))});
    }
    if (r.remaining() != 0) {
        throw FormatError(r.pos(), std::to_string(r.remaining()) + " trailing bytes after last tensor");
    }
    ckpt.params = ParameterSet(std::move(entries));
    return ckpt;
}

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    const auto bytes = encode_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    try {
        return decode_checkpoint(bytes);
    } catch (const FormatError& e) {
        throw FormatError(e.offset(), path.string() + ": " + e.detail());
    }
}

}  // namespace lawa
