// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "dtnbgp/bytes.hpp"

#include <doctest.h>

#include <random>

using namespace dtnbgp;

TEST_CASE("big-endian writer/reader round-trip") {
    ByteWriter w;
    w.u8(0xab);
    w.u16be(0x1234);
    w.u32be(0xdeadbeef);
    auto buf = w.take();
    CHECK(to_hex(buf) == "ab1234deadbeef");

    ByteReader r(buf);
    uint8_t a;
    uint16_t b;
    uint32_t c;
    REQUIRE(r.u8(a));
    REQUIRE(r.u16be(b));
    REQUIRE(r.u32be(c));
    CHECK(a == 0xab);
    CHECK(b == 0x1234);
    CHECK(c == 0xdeadbeef);
    CHECK(r.empty());
    CHECK(!r.u8(a));
}

TEST_CASE("hex parsing") {
    auto b = from_hex("5a 02  00\n90");
    REQUIRE(b.ok());
    CHECK(*b == Bytes{0x5a, 0x02, 0x00, 0x90});
    CHECK(!from_hex("5a0").ok());
    CHECK(!from_hex("zz").ok());
}

TEST_CASE("base64 round-trip property") {
    std::mt19937 rng(42);
    for (int i = 0; i < 200; i++) {
        Bytes data(rng() % 100);
        for (auto& x : data) x = static_cast<uint8_t>(rng());
        auto back = base64_decode(base64_encode(data));
        REQUIRE(back.ok());
        CHECK(*back == data);
    }
    CHECK(base64_encode(Bytes{'h', 'i'}) == "aGk=");
    CHECK(!base64_decode("a=b=").ok());
    CHECK(!base64_decode("@@@@").ok());
}

TEST_CASE("utf8 validation") {
    auto ok = [](std::string_view s) {
        return valid_utf8({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
    };
    CHECK(ok("plain ascii"));
    CHECK(ok("caf\xc3\xa9"));
    CHECK(ok("\xe2\x82\xac"));          // euro sign
    CHECK(ok("\xf0\x9f\x9a\x80"));      // rocket
    CHECK(!ok("\xff"));
    CHECK(!ok("\xc3"));                 // truncated sequence
    CHECK(!ok("\xc0\xaf"));             // overlong
    CHECK(!ok("\xed\xa0\x80"));         // surrogate
    CHECK(ok(""));
}
