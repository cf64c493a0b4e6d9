// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "dtnbgp/bgp_msg.hpp"

#include <doctest.h>

#include "support/gen.hpp"
#include "support/testutil.hpp"

using namespace dtnbgp;
using namespace dtnbgp::test;

namespace {

OpenMsg sample_open() {
    OpenMsg m;
    m.asn = 64512;
    m.hold_time = 90;
    m.bgp_id = 0x0a000001;
    m.capabilities.push_back({kDtnAfi, kSafiMtcp});
    m.capabilities.push_back({kDtnAfi, kSafiTcpclV3});
    return m;
}

}  // namespace

TEST_CASE("KEEPALIVE frames to the fixed 19-octet header") {
    auto frame = frame_message(BgpMessage{KeepaliveMsg{}});
    REQUIRE(frame.ok());
    CHECK(frame->size() == 19);
    CHECK(to_hex(*frame) == "ffffffffffffffffffffffffffffffff001304");
}

TEST_CASE("frame/parse round-trip for each message type") {
    std::vector<BgpMessage> messages;
    messages.push_back(BgpMessage{sample_open()});
    UpdateMsg u;
    u.as_path = {64512, 64513};
    ReachabilityAnnouncement a;
    a.next_hop = ClaEndpoint{kSafiMtcp, IpAddress::v4(10, 0, 0, 2), 4556};
    a.entries.push_back(EidEntry{EndpointId::ipn("ipn:5.1"), {}});
    u.mp_reach = a;
    ReachabilityWithdrawal w;
    w.safi = kSafiMtcp;
    w.entries.push_back(EidEntry{EndpointId::dtn("dtn://gone/"), {}});
    u.mp_unreach = w;
    messages.push_back(BgpMessage{u});
    messages.push_back(BgpMessage{KeepaliveMsg{}});
    messages.push_back(BgpMessage{NotificationMsg{6, 0, {0x01, 0x02}}});

    for (const auto& m : messages) {
        auto frame = frame_message(m);
        REQUIRE(frame.ok());
        CHECK(frame->size() >= kMinFrameLen);
        CHECK(frame->size() <= kMaxFrameLen);
        auto back = parse_message(*frame);
        REQUIRE(back.ok());
        CHECK(*back == m);
    }
}

TEST_CASE("frame/parse property over random updates") {
    Rng rng(123);
    for (int i = 0; i < 200; i++) {
        UpdateMsg u;
        size_t hops = pick(rng, 0, 5);
        for (size_t h = 0; h < hops; h++)
            u.as_path.push_back(static_cast<uint16_t>(pick(rng, 1, 65535)));
        // Keep entries small so frames stay under the ceiling.
        ReachabilityAnnouncement a;
        a.next_hop = random_cla(rng);
        size_t n = pick(rng, 1, 8);
        for (size_t k = 0; k < n; k++)
            a.entries.push_back(random_entry(rng, 1));
        u.mp_reach = a;
        if (pick(rng, 0, 1)) u.mp_unreach = random_withdrawal(rng);

        auto frame = frame_message(BgpMessage{u});
        if (!frame.ok()) {
            CHECK(frame.error().code == BgpErrc::oversize_frame);
            continue;
        }
        auto back = parse_message(*frame);
        REQUIRE(back.ok());
        CHECK(*back == BgpMessage{u});
    }
}

TEST_CASE("extended attribute length used above 255 octets") {
    UpdateMsg u;
    ReachabilityAnnouncement a;
    a.next_hop = ClaEndpoint{kSafiMtcp, IpAddress::v4(10, 0, 0, 2), 4556};
    EidEntry e{EndpointId::ipn("ipn:9.9"), {}};
    e.attributes.push_back(EidAttribute{1, Bytes(400, 0xAA)});
    a.entries.push_back(e);
    u.mp_reach = a;
    auto frame = frame_message(BgpMessage{u});
    REQUIRE(frame.ok());
    auto back = parse_message(*frame);
    REQUIRE(back.ok());
    CHECK(*back == BgpMessage{u});

    // Find the MP_REACH attribute header and check the extended-length flag.
    bool found = false;
    for (size_t i = kMinFrameLen; i + 1 < frame->size(); i++) {
        if ((*frame)[i + 1] == kAttrMpReach &&
            ((*frame)[i] & kAttrFlagOptional)) {
            CHECK(((*frame)[i] & kAttrFlagExtendedLen) != 0);
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("framing errors") {
    auto frame = frame_message(BgpMessage{KeepaliveMsg{}});
    REQUIRE(frame.ok());

    SUBCASE("flipped marker byte") {
        auto bad = *frame;
        bad[3] = 0x00;
        auto r = parse_message(bad);
        REQUIRE(!r.ok());
        CHECK(r.error().code == BgpErrc::framing);
    }
    SUBCASE("length below minimum") {
        auto bad = *frame;
        bad[16] = 0;
        bad[17] = 10;
        auto r = parse_message(bad);
        REQUIRE(!r.ok());
        CHECK(r.error().code == BgpErrc::framing);
    }
    SUBCASE("unknown message type") {
        auto bad = *frame;
        bad[18] = 9;
        auto r = parse_message(bad);
        REQUIRE(!r.ok());
        CHECK(r.error().code == BgpErrc::unknown_message_type);
    }
    SUBCASE("update with neither attribute refuses to encode") {
        auto r = frame_message(BgpMessage{UpdateMsg{}});
        REQUIRE(!r.ok());
        CHECK(r.error().code == BgpErrc::invariant);
    }
}

TEST_CASE("update embedding the golden announcement round-trips") {
    auto vector_bytes = load_hex_file(testdata_path("mp_reach_ipv6_ipn.hex"));
    UpdateMsg u;
    u.as_path = {64512};
    ReachabilityAnnouncement a;
    a.next_hop.safi = kSafiMtcp;
    a.next_hop.address = *IpAddress::parse("2001:db8::1");
    a.next_hop.port = 4556;
    a.entries.push_back(EidEntry{EndpointId::ipn("ipn:5.1"), {}});
    u.mp_reach = a;

    auto frame = frame_message(BgpMessage{u});
    REQUIRE(frame.ok());
    // The attribute value must appear verbatim inside the frame.
    auto hex_frame = to_hex(*frame);
    auto hex_vector = to_hex(vector_bytes);
    CHECK(hex_frame.find(hex_vector) != std::string::npos);

    auto back = parse_message(*frame);
    REQUIRE(back.ok());
    CHECK(std::get<UpdateMsg>(*back).mp_reach == u.mp_reach);
}

TEST_CASE("negotiate") {
    auto local = sample_open();
    auto remote = sample_open();
    remote.asn = 64513;
    remote.bgp_id = 0x0a000002;
    std::vector<uint8_t> safis{0, 1, 2, 3};

    SUBCASE("hold time is the minimum of both sides") {
        local.hold_time = 90;
        remote.hold_time = 30;
        auto p = negotiate(local, remote, 64513, safis);
        REQUIRE(p.ok());
        CHECK(p->hold_time == 30);
        CHECK(p->dtn_capable);
        CHECK(p->remote_asn == 64513);
    }
    SUBCASE("missing DTN capability leaves the session usable") {
        remote.capabilities.clear();
        auto p = negotiate(local, remote, 64513, safis);
        REQUIRE(p.ok());
        CHECK(!p->dtn_capable);
    }
    SUBCASE("capability for an unsupported SAFI does not count") {
        remote.capabilities = {{kDtnAfi, 200}};
        auto p = negotiate(local, remote, 64513, safis);
        REQUIRE(p.ok());
        CHECK(!p->dtn_capable);
    }
    SUBCASE("wrong ASN rejected") {
        auto p = negotiate(local, remote, 65000, safis);
        REQUIRE(!p.ok());
        CHECK(p.error().code == kNotifOpenError);
        CHECK(p.error().subcode == kOpenBadPeerAs);
    }
    SUBCASE("unsupported version rejected") {
        remote.version = 3;
        auto p = negotiate(local, remote, 64513, safis);
        REQUIRE(!p.ok());
        CHECK(p.error().subcode == kOpenBadVersion);
    }
    SUBCASE("zero hold disables timers") {
        remote.hold_time = 0;
        auto p = negotiate(local, remote, 64513, safis);
        REQUIRE(p.ok());
        CHECK(p->hold_time == 0);
    }
}

TEST_CASE("chunk_updates") {
    ClaEndpoint hop{kSafiMtcp, IpAddress::v4(10, 0, 0, 2), 4556};
    std::vector<uint16_t> as_path{64512};

    SUBCASE("300 small entries split into multiple frames") {
        std::vector<EidEntry> entries;
        for (int i = 0; i < 300; i++)
            entries.push_back(EidEntry{EndpointId::ipn(strfmt("ipn:%d.1", i)), {}});
        auto updates = chunk_updates(hop, entries, as_path);
        REQUIRE(updates.ok());
        CHECK(updates->size() >= 2);
        size_t total = 0;
        std::vector<EidEntry> reassembled;
        for (const auto& u : *updates) {
            REQUIRE(u.mp_reach.has_value());
            CHECK(u.mp_reach->entries.size() <= 255);
            total += u.mp_reach->entries.size();
            auto frame = frame_message(BgpMessage{u});
            REQUIRE(frame.ok());
            CHECK(frame->size() <= kMaxFrameLen);
            for (const auto& e : u.mp_reach->entries) reassembled.push_back(e);
        }
        CHECK(total == 300);
        CHECK(reassembled == entries);  // order preserved across chunks
    }
    SUBCASE("single entry yields a single update") {
        auto updates = chunk_updates(
            hop, {EidEntry{EndpointId::ipn("ipn:1.1"), {}}}, as_path);
        REQUIRE(updates.ok());
        CHECK(updates->size() == 1);
    }
    SUBCASE("entry with a 5000-octet attribute cannot fit") {
        EidEntry e{EndpointId::ipn("ipn:1.1"), {}};
        e.attributes.push_back(EidAttribute{1, Bytes(5000, 0)});
        auto updates = chunk_updates(hop, {e}, as_path);
        REQUIRE(!updates.ok());
        CHECK(updates.error().code == BgpErrc::oversize_entry);
    }
    SUBCASE("withdrawal chunking keeps counts") {
        std::vector<EndpointId> eids;
        for (int i = 0; i < 300; i++)
            eids.push_back(EndpointId::ipn(strfmt("ipn:%d.2", i)));
        auto updates = chunk_withdrawals(kSafiMtcp, eids);
        REQUIRE(updates.ok());
        CHECK(updates->size() >= 2);
        size_t total = 0;
        for (const auto& u : *updates) {
            REQUIRE(u.mp_unreach.has_value());
            total += u.mp_unreach->entries.size();
            auto frame = frame_message(BgpMessage{u});
            REQUIRE(frame.ok());
            CHECK(frame->size() <= kMaxFrameLen);
        }
        CHECK(total == 300);
    }
}
