// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cstring>
#include <limits>

#include "catch_amalgamated.hpp"
#include "param_core/checkpoint_io.hpp"
#include "param_core/errors.hpp"
#include "param_core/parameter_set.hpp"
#include "support.hpp"

using namespace lawa;
using lawa_test::make_set;

namespace {

// Hand-assembled little-endian bytes for the file-format oracle.
struct Bytes {
    std::vector<std::uint8_t> b;
    template <typename T>
    Bytes& put(T v) {
        std::uint8_t raw[sizeof(T)];
        std::memcpy(raw, &v, sizeof(T));
        b.insert(b.end(), raw, raw + sizeof(T));
        return *this;
    }
    Bytes& str(const std::string& s) {
        b.insert(b.end(), s.begin(), s.end());
        return *this;
    }
};

}  // namespace

TEST_CASE("tensor shape must match element count") {
    CHECK_THROWS_AS(Tensor(DType::F64, {2, 3}, std::vector<double>(5)), ShapeError);
    CHECK(Tensor(DType::F64, {2, 3}, std::vector<double>(6)).size() == 6);
    CHECK(Tensor::scalar(3.0).size() == 1);
}

TEST_CASE("f32 tensors hold float-representable values") {
    const Tensor t(DType::F32, {1}, {0.1});
    CHECK(t[0] == static_cast<double>(0.1f));
    CHECK(t[0] != 0.1);
}

TEST_CASE("parameter set rejects duplicate names and mixed dtypes") {
    CHECK_THROWS_AS(ParameterSet({{"a", Tensor::scalar(1)}, {"a", Tensor::scalar(2)}}), StructureMismatch);
    CHECK_THROWS_AS(ParameterSet({{"a", Tensor::scalar(1, DType::F32)}, {"b", Tensor::scalar(2)}}),
                    StructureMismatch);
    CHECK_THROWS_AS(ParameterSet({{"", Tensor::scalar(1)}}), StructureMismatch);
}

TEST_CASE("add_scaled and scale follow elementwise arithmetic") {
    const auto p = make_set({1, 2, 3, 4}, {5, 6}, 2, 2);
    const auto q = make_set({1, 1, 1, 1}, {2, 2}, 2, 2);
    const auto r = add_scaled(p, q, 0.5);
    CHECK(r.at("w")[0] == 1.5);
    CHECK(r.at("w")[3] == 4.5);
    CHECK(r.at("b")[1] == 7.0);
    const auto s = scale(p, -2.0);
    CHECK(s.at("w")[2] == -6.0);
    CHECK(s.at("b")[0] == -10.0);
}

TEST_CASE("l2 distance") {
    const auto p = make_set({0, 0, 0, 0}, {0, 0}, 2, 2);
    const auto q = make_set({3, 0, 0, 0}, {0, 4}, 2, 2);
    CHECK(l2_distance(p, q) == Catch::Approx(5.0).epsilon(1e-15));
    CHECK(l2_distance(p, p) == 0.0);
    // Scaled accumulation keeps huge entries from overflowing.
    const auto big = make_set({1e300, 0, 0, 0}, {0, 1e300}, 2, 2);
    CHECK(l2_distance(p, big) == Catch::Approx(std::sqrt(2.0) * 1e300).epsilon(1e-12));
}

TEST_CASE("structure checks name the offending entry") {
    const auto p = make_set({1, 2, 3, 4}, {5, 6}, 2, 2);
    const auto q = make_set({1, 2, 3, 4, 5, 6}, {5, 6, 7}, 2, 3);
    try {
        require_same_structure(p, q);
        FAIL("expected StructureMismatch");
    } catch (const StructureMismatch& e) {
        CHECK(std::string(e.what()).find("'w'") != std::string::npos);
    }
    CHECK_THROWS_AS(add_scaled(p, q, 1.0), StructureMismatch);
    CHECK_FALSE(same_structure(p, q));
    CHECK(same_structure(p, scale(p, 3.0)));
}

TEST_CASE("finiteness check reports the entry") {
    const auto p = make_set({1, std::numeric_limits<double>::quiet_NaN(), 3, 4}, {5, 6}, 2, 2);
    CHECK_FALSE(all_finite(p));
    CHECK_THROWS_AS(require_finite(p, "test"), NonFiniteError);
}

TEST_CASE("checkpoint encoding matches the documented byte layout") {
    const ParameterSet p({{"x", Tensor(DType::F64, {2}, {1.5, -2.0})}});
    Bytes expect;
    expect.str("LAWA").put<std::uint32_t>(1).put<std::uint64_t>(7).put<std::uint64_t>(42).put<std::uint32_t>(1);
    expect.put<std::uint32_t>(1).str("x").put<std::uint8_t>(1).put<std::uint32_t>(1).put<std::uint64_t>(2);
    expect.put<double>(1.5).put<double>(-2.0);
    CHECK(encode_checkpoint({p, 7, 42}) == expect.b);

    const ParameterSet f({{"y", Tensor(DType::F32, {1}, {0.25})}});
    Bytes expect32;
    expect32.str("LAWA").put<std::uint32_t>(1).put<std::uint64_t>(0).put<std::uint64_t>(0).put<std::uint32_t>(1);
    expect32.put<std::uint32_t>(1).str("y").put<std::uint8_t>(0).put<std::uint32_t>(1).put<std::uint64_t>(1);
    expect32.put<float>(0.25f);
    CHECK(encode_checkpoint({f, 0, 0}) == expect32.b);
}

TEST_CASE("checkpoint roundtrip is bitwise") {
    const auto p = make_set({0.1, -0.0, 1e-310, 3}, {5, 6}, 2, 2);
    const Checkpoint c{p, 9, 123};
    const auto bytes = encode_checkpoint(c);
    const auto back = decode_checkpoint(bytes);
    CHECK(back.params == p);
    CHECK(back.epoch == 9);
    CHECK(back.step == 123);
    CHECK(encode_checkpoint(back) == bytes);

    const auto dir = lawa_test::scratch_dir("param_roundtrip");
    write_checkpoint(c, dir / "c.lawa");
    CHECK(read_checkpoint(dir / "c.lawa").params == p);
    const auto f32 = p.cast(DType::F32);
    write_checkpoint({f32, 1, 1}, dir / "f.lawa");
    CHECK(read_checkpoint(dir / "f.lawa").params == f32);
}

TEST_CASE("corrupt checkpoints are rejected with the byte offset") {
    const auto bytes = encode_checkpoint({make_set({1, 2, 3, 4}, {5, 6}, 2, 2), 1, 2});

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    try {
        (void)decode_checkpoint(bad_magic);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 0);
    }

    auto bad_version = bytes;
    bad_version[4] = 2;
    try {
        (void)decode_checkpoint(bad_version);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 4);
    }

    for (std::size_t cut : {std::size_t{3}, std::size_t{20}, bytes.size() - 1}) {
        const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        CHECK_THROWS_AS(decode_checkpoint(truncated), FormatError);
    }

    auto trailing = bytes;
    trailing.push_back(0);
    try {
        (void)decode_checkpoint(trailing);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == bytes.size());
    }
}

TEST_CASE("reading a missing file is an I/O error") {
    CHECK_THROWS_AS(read_checkpoint("does/not/exist.lawa"), IoError);
}
