// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "dtnbgp/bgp_msg.hpp"

#include <algorithm>

namespace dtnbgp {

namespace {

constexpr uint8_t kOptParamCapabilities = 2;
constexpr uint8_t kCapMultiprotocol = 1;
constexpr uint8_t kAsPathSequence = 2;

BgpError berr(BgpErrc code, std::string detail) {
    return BgpError{code, std::move(detail), std::nullopt};
}

BgpError attr_err(std::string detail, NlriError nlri) {
    return BgpError{BgpErrc::attribute, std::move(detail), std::move(nlri)};
}

void put_attr_header(ByteWriter& w, uint8_t flags, uint8_t type, size_t len) {
    if (len > 255) {
        w.u8(flags | kAttrFlagExtendedLen);
        w.u8(type);
        w.u16be(static_cast<uint16_t>(len));
    } else {
        w.u8(flags);
        w.u8(type);
        w.u8(static_cast<uint8_t>(len));
    }
}

BgpResult<Bytes> encode_open_body(const OpenMsg& m) {
    if (m.asn == 0)
        return berr(BgpErrc::invariant, "ASN 0 is not a valid peer ASN");
    ByteWriter caps;
    for (const auto& cap : m.capabilities) {
        caps.u8(kCapMultiprotocol);
        caps.u8(4);
        caps.u16be(cap.afi);
        caps.u8(0);  // reserved
        caps.u8(cap.safi);
    }
    if (caps.size() > 253)
        return berr(BgpErrc::invariant, "too many capabilities for one OPEN");

    ByteWriter w;
    w.u8(m.version);
    w.u16be(m.asn);
    w.u16be(m.hold_time);
    w.u32be(m.bgp_id);
    if (caps.size() == 0) {
        w.u8(0);
    } else {
        w.u8(static_cast<uint8_t>(caps.size() + 2));
        w.u8(kOptParamCapabilities);
        w.u8(static_cast<uint8_t>(caps.size()));
        w.raw(caps.data());
    }
    return w.take();
}

BgpResult<OpenMsg> decode_open_body(ByteView body) {
    ByteReader r(body);
    OpenMsg m;
    uint8_t opt_len = 0;
    if (!r.u8(m.version) || !r.u16be(m.asn) || !r.u16be(m.hold_time) ||
        !r.u32be(m.bgp_id) || !r.u8(opt_len))
        return berr(BgpErrc::framing, "truncated OPEN body");
    ByteView opts;
    if (!r.view(opt_len, opts))
        return berr(BgpErrc::framing, "truncated OPEN optional parameters");
    if (!r.empty())
        return berr(BgpErrc::framing, "trailing bytes after OPEN parameters");

    ByteReader pr(opts);
    while (!pr.empty()) {
        uint8_t ptype = 0, plen = 0;
        ByteView pval;
        if (!pr.u8(ptype) || !pr.u8(plen) || !pr.view(plen, pval))
            return berr(BgpErrc::framing, "truncated OPEN parameter");
        if (ptype != kOptParamCapabilities) continue;
        ByteReader cr(pval);
        while (!cr.empty()) {
            uint8_t ccode = 0, clen = 0;
            ByteView cval;
            if (!cr.u8(ccode) || !cr.u8(clen) || !cr.view(clen, cval))
                return berr(BgpErrc::framing, "truncated capability");
            if (ccode != kCapMultiprotocol || clen != 4) continue;
            MpCapability cap;
            cap.afi = static_cast<uint16_t>(cval[0] << 8 | cval[1]);
            cap.safi = cval[3];
            m.capabilities.push_back(cap);
        }
    }
    return m;
}

BgpResult<Bytes> encode_update_body(const UpdateMsg& m) {
    if (!m.mp_reach && !m.mp_unreach)
        return berr(BgpErrc::invariant,
                    "UPDATE carries neither MP_REACH nor MP_UNREACH");
    if (m.as_path.size() > 255)
        return berr(BgpErrc::invariant, "AS path longer than 255 hops");

    ByteWriter attrs;
    // ORIGIN
    put_attr_header(attrs, kAttrFlagTransitive, kAttrOrigin, 1);
    attrs.u8(m.origin);
    // AS_PATH: one AS_SEQUENCE segment of 2-octet ASNs (empty path allowed)
    {
        size_t len = m.as_path.empty() ? 0 : 2 + 2 * m.as_path.size();
        put_attr_header(attrs, kAttrFlagTransitive, kAttrAsPath, len);
        if (!m.as_path.empty()) {
            attrs.u8(kAsPathSequence);
            attrs.u8(static_cast<uint8_t>(m.as_path.size()));
            for (uint16_t asn : m.as_path) attrs.u16be(asn);
        }
    }
    if (m.mp_reach) {
        auto value = encode_mp_reach(*m.mp_reach);
        if (!value) return attr_err("MP_REACH encode failed", value.error());
        put_attr_header(attrs, kAttrFlagOptional, kAttrMpReach, value->size());
        attrs.raw(*value);
    }
    if (m.mp_unreach) {
        auto value = encode_mp_unreach(*m.mp_unreach);
        if (!value) return attr_err("MP_UNREACH encode failed", value.error());
        put_attr_header(attrs, kAttrFlagOptional, kAttrMpUnreach, value->size());
        attrs.raw(*value);
    }

    ByteWriter w;
    w.u16be(0);  // no IPv4 withdrawn routes
    w.u16be(static_cast<uint16_t>(attrs.size()));
    w.raw(attrs.data());
    return w.take();
}

BgpResult<std::vector<uint16_t>> decode_as_path(ByteView value) {
    std::vector<uint16_t> path;
    ByteReader r(value);
    while (!r.empty()) {
        uint8_t seg_type = 0, count = 0;
        if (!r.u8(seg_type) || !r.u8(count))
            return berr(BgpErrc::attribute, "truncated AS_PATH segment");
        for (unsigned i = 0; i < count; i++) {
            uint16_t asn = 0;
            if (!r.u16be(asn))
                return berr(BgpErrc::attribute, "truncated AS_PATH segment body");
            path.push_back(asn);
        }
    }
    return path;
}

BgpResult<UpdateMsg> decode_update_body(ByteView body) {
    ByteReader r(body);
    UpdateMsg m;
    uint16_t withdrawn_len = 0;
    if (!r.u16be(withdrawn_len))
        return berr(BgpErrc::framing, "truncated UPDATE body");
    if (withdrawn_len != 0)
        return berr(BgpErrc::attribute, "IPv4 withdrawn routes not supported");
    uint16_t attrs_len = 0;
    if (!r.u16be(attrs_len))
        return berr(BgpErrc::framing, "truncated UPDATE body");
    ByteView attrs;
    if (!r.view(attrs_len, attrs))
        return berr(BgpErrc::framing, "truncated UPDATE attributes");
    if (!r.empty())
        return berr(BgpErrc::attribute, "IPv4 NLRI not supported");

    ByteReader ar(attrs);
    while (!ar.empty()) {
        uint8_t flags = 0, type = 0;
        if (!ar.u8(flags) || !ar.u8(type))
            return berr(BgpErrc::attribute, "truncated attribute header");
        size_t len = 0;
        if (flags & kAttrFlagExtendedLen) {
            uint16_t l = 0;
            if (!ar.u16be(l))
                return berr(BgpErrc::attribute, "truncated attribute length");
            len = l;
        } else {
            uint8_t l = 0;
            if (!ar.u8(l))
                return berr(BgpErrc::attribute, "truncated attribute length");
            len = l;
        }
        ByteView value;
        if (!ar.view(len, value))
            return berr(BgpErrc::attribute,
                        strfmt("attribute %u value truncated", type));
        switch (type) {
            case kAttrOrigin:
                if (len != 1)
                    return berr(BgpErrc::attribute, "ORIGIN length != 1");
                m.origin = value[0];
                break;
            case kAttrAsPath: {
                auto path = decode_as_path(value);
                if (!path) return path.error();
                m.as_path = std::move(*path);
                break;
            }
            case kAttrMpReach: {
                auto reach = decode_mp_reach(value);
                if (!reach)
                    return attr_err("MP_REACH decode failed", reach.error());
                m.mp_reach = std::move(*reach);
                break;
            }
            case kAttrMpUnreach: {
                auto unreach = decode_mp_unreach(value);
                if (!unreach)
                    return attr_err("MP_UNREACH decode failed", unreach.error());
                m.mp_unreach = std::move(*unreach);
                break;
            }
            default:
                break;  // unrecognized attribute: pass over
        }
    }
    return m;
}

}  // namespace

std::string BgpError::to_string() const {
    const char* name = "?";
    switch (code) {
        case BgpErrc::framing: name = "framing"; break;
        case BgpErrc::unknown_message_type: name = "unknown_message_type"; break;
        case BgpErrc::attribute: name = "attribute"; break;
        case BgpErrc::invariant: name = "invariant"; break;
        case BgpErrc::oversize_entry: name = "oversize_entry"; break;
        case BgpErrc::oversize_frame: name = "oversize_frame"; break;
        case BgpErrc::not_capable: name = "not_capable"; break;
        case BgpErrc::bad_state: name = "bad_state"; break;
    }
    std::string out = strfmt("%s: %s", name, detail.c_str());
    if (nlri) out += " (" + nlri->to_string() + ")";
    return out;
}

const char* message_type_name(const BgpMessage& m) {
    switch (m.index()) {
        case 0: return "OPEN";
        case 1: return "UPDATE";
        case 2: return "KEEPALIVE";
        case 3: return "NOTIFICATION";
    }
    return "?";
}

BgpResult<Bytes> frame_message(const BgpMessage& m) {
    Bytes body;
    uint8_t type = 0;
    if (const auto* open = std::get_if<OpenMsg>(&m)) {
        auto b = encode_open_body(*open);
        if (!b) return b.error();
        body = std::move(*b);
        type = kMsgOpen;
    } else if (const auto* update = std::get_if<UpdateMsg>(&m)) {
        auto b = encode_update_body(*update);
        if (!b) return b.error();
        body = std::move(*b);
        type = kMsgUpdate;
    } else if (std::holds_alternative<KeepaliveMsg>(m)) {
        type = kMsgKeepalive;
    } else if (const auto* notif = std::get_if<NotificationMsg>(&m)) {
        ByteWriter w;
        w.u8(notif->code);
        w.u8(notif->subcode);
        w.raw(notif->data);
        body = w.take();
        type = kMsgNotification;
    }

    size_t total = kMinFrameLen + body.size();
    if (total > kMaxFrameLen)
        return berr(BgpErrc::oversize_frame,
                    strfmt("frame would be %zu octets, ceiling is %zu", total,
                           kMaxFrameLen));
    ByteWriter w;
    for (size_t i = 0; i < kMarkerLen; i++) w.u8(0xFF);
    w.u16be(static_cast<uint16_t>(total));
    w.u8(type);
    w.raw(body);
    return w.take();
}

BgpResult<std::optional<size_t>> peek_frame(ByteView buffer) {
    if (buffer.size() < kMinFrameLen) return std::optional<size_t>{};
    for (size_t i = 0; i < kMarkerLen; i++)
        if (buffer[i] != 0xFF)
            return berr(BgpErrc::framing, strfmt("bad marker octet %zu", i));
    size_t len = static_cast<size_t>(buffer[16] << 8 | buffer[17]);
    if (len < kMinFrameLen || len > kMaxFrameLen)
        return berr(BgpErrc::framing, strfmt("frame length %zu out of range", len));
    if (buffer.size() < len) return std::optional<size_t>{};
    return std::optional<size_t>{len};
}

BgpResult<BgpMessage> parse_message(ByteView frame) {
    auto peek = peek_frame(frame);
    if (!peek) return peek.error();
    if (!peek->has_value() || **peek != frame.size())
        return berr(BgpErrc::framing,
                    strfmt("frame length field does not match input (%zu)",
                           frame.size()));
    uint8_t type = frame[18];
    ByteView body = frame.subspan(kMinFrameLen);
    switch (type) {
        case kMsgOpen: {
            auto open = decode_open_body(body);
            if (!open) return open.error();
            return BgpMessage{std::move(*open)};
        }
        case kMsgUpdate: {
            auto update = decode_update_body(body);
            if (!update) return update.error();
            return BgpMessage{std::move(*update)};
        }
        case kMsgKeepalive:
            if (!body.empty())
                return berr(BgpErrc::framing, "KEEPALIVE with a body");
            return BgpMessage{KeepaliveMsg{}};
        case kMsgNotification: {
            if (body.size() < 2)
                return berr(BgpErrc::framing, "truncated NOTIFICATION");
            NotificationMsg n;
            n.code = body[0];
            n.subcode = body[1];
            n.data.assign(body.begin() + 2, body.end());
            return BgpMessage{std::move(n)};
        }
        default:
            return berr(BgpErrc::unknown_message_type,
                        strfmt("message type %u", type));
    }
}

Result<SessionParams, OpenReject> negotiate(
    const OpenMsg& open_sent, const OpenMsg& open_received,
    std::optional<uint16_t> expected_remote_asn,
    std::span<const uint8_t> supported_safis) {
    if (open_received.version != 4)
        return OpenReject{kNotifOpenError, kOpenBadVersion,
                          strfmt("unsupported version %u", open_received.version)};
    if (expected_remote_asn && open_received.asn != *expected_remote_asn)
        return OpenReject{kNotifOpenError, kOpenBadPeerAs,
                          strfmt("peer ASN %u, expected %u", open_received.asn,
                                 *expected_remote_asn)};

    SessionParams p;
    p.hold_time = std::min(open_sent.hold_time, open_received.hold_time);
    p.remote_asn = open_received.asn;
    p.remote_bgp_id = open_received.bgp_id;
    for (const auto& cap : open_received.capabilities) {
        if (cap.afi != kDtnAfi) continue;
        if (std::find(supported_safis.begin(), supported_safis.end(), cap.safi) ==
            supported_safis.end())
            continue;
        if (std::find(p.dtn_safis.begin(), p.dtn_safis.end(), cap.safi) ==
            p.dtn_safis.end())
            p.dtn_safis.push_back(cap.safi);
    }
    p.dtn_capable = !p.dtn_safis.empty();
    return p;
}

namespace {

// Frame overhead for a one-announcement UPDATE, assuming extended attribute
// length. Entries must fit in kMaxFrameLen minus this.
size_t update_overhead(const ClaEndpoint& next_hop, size_t as_path_len) {
    size_t origin = 3 + 1;
    size_t as_path = 3 + (as_path_len == 0 ? 0 : 2 + 2 * as_path_len);
    size_t mp_fixed = 4 /* attr header, extended */ + 2 + 1 + 1 +
                      (next_hop.address.v6 ? 18 : 6) + 1;
    return kMinFrameLen + 4 + origin + as_path + mp_fixed;
}

}  // namespace

BgpResult<std::vector<UpdateMsg>> chunk_updates(
    const ClaEndpoint& next_hop, const std::vector<EidEntry>& entries,
    const std::vector<uint16_t>& as_path) {
    if (entries.empty()) return std::vector<UpdateMsg>{};
    size_t budget = kMaxFrameLen - update_overhead(next_hop, as_path.size());

    std::vector<UpdateMsg> out;
    std::vector<EidEntry> chunk;
    size_t used = 0;
    auto flush = [&] {
        if (chunk.empty()) return;
        UpdateMsg u;
        u.as_path = as_path;
        u.mp_reach = ReachabilityAnnouncement{kDtnAfi, next_hop, std::move(chunk)};
        out.push_back(std::move(u));
        chunk = {};
        used = 0;
    };
    for (const auto& entry : entries) {
        size_t size = encoded_entry_size(entry);
        if (size > budget)
            return berr(BgpErrc::oversize_entry,
                        strfmt("entry '%s' needs %zu octets, budget %zu",
                               entry.eid.uri_text.c_str(), size, budget));
        if (used + size > budget || chunk.size() == 255) flush();
        chunk.push_back(entry);
        used += size;
    }
    flush();
    return out;
}

BgpResult<std::vector<UpdateMsg>> chunk_withdrawals(
    uint8_t safi, const std::vector<EndpointId>& eids) {
    if (eids.empty()) return std::vector<UpdateMsg>{};
    // MP_UNREACH fixed part: attr header (4) + AFI + SAFI + count, plus the
    // always-present ORIGIN and empty AS_PATH.
    size_t budget = kMaxFrameLen - (kMinFrameLen + 4 + 4 + 3 + 4 + 2 + 1 + 1);

    std::vector<UpdateMsg> out;
    std::vector<EidEntry> chunk;
    size_t used = 0;
    auto flush = [&] {
        if (chunk.empty()) return;
        UpdateMsg u;
        u.mp_unreach = ReachabilityWithdrawal{kDtnAfi, safi, std::move(chunk)};
        out.push_back(std::move(u));
        chunk = {};
        used = 0;
    };
    for (const auto& eid : eids) {
        EidEntry entry{eid, {}};
        size_t size = encoded_entry_size(entry);
        if (size > budget)
            return berr(BgpErrc::oversize_entry,
                        strfmt("EID '%s' needs %zu octets, budget %zu",
                               eid.uri_text.c_str(), size, budget));
        if (used + size > budget || chunk.size() == 255) flush();
        chunk.push_back(std::move(entry));
        used += size;
    }
    flush();
    return out;
}

}  // namespace dtnbgp
