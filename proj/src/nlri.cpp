// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "dtnbgp/nlri.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstring>

namespace dtnbgp {

bool known_safi(uint8_t safi) { return safi <= kSafiUdpcl; }

const char* safi_name(uint8_t safi) {
    switch (safi) {
        case kSafiMtcp: return "mtcp";
        case kSafiTcpclV3: return "tcpclv3";
        case kSafiTcpclV4: return "tcpclv4";
        case kSafiUdpcl: return "udpcl";
        default: return "unknown";
    }
}

std::string IpAddress::to_string() const {
    char buf[INET6_ADDRSTRLEN] = {};
    if (v6) {
        inet_ntop(AF_INET6, octets.data(), buf, sizeof(buf));
    } else {
        inet_ntop(AF_INET, octets.data(), buf, sizeof(buf));
    }
    return buf;
}

Result<IpAddress, std::string> IpAddress::parse(const std::string& text) {
    IpAddress out;
    if (inet_pton(AF_INET, text.c_str(), out.octets.data()) == 1) {
        out.v6 = false;
        return out;
    }
    if (inet_pton(AF_INET6, text.c_str(), out.octets.data()) == 1) {
        out.v6 = true;
        return out;
    }
    return strfmt("not an IP address: '%s'", text.c_str());
}

IpAddress IpAddress::v4(uint8_t a, uint8_t b, uint8_t c, uint8_t d) {
    IpAddress out;
    out.octets[0] = a;
    out.octets[1] = b;
    out.octets[2] = c;
    out.octets[3] = d;
    return out;
}

std::string ClaEndpoint::to_string() const {
    if (address.v6) return strfmt("[%s]:%u", address.to_string().c_str(), port);
    return strfmt("%s:%u", address.to_string().c_str(), port);
}

static bool parse_uint_field(std::string_view s, uint64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// "ipn:<node>.<service>" with non-negative integer components.
static bool valid_ipn_uri(std::string_view text) {
    if (!text.starts_with("ipn:")) return false;
    std::string_view rest = text.substr(4);
    size_t dot = rest.find('.');
    if (dot == std::string_view::npos) return false;
    uint64_t node, service;
    return parse_uint_field(rest.substr(0, dot), node) &&
           parse_uint_field(rest.substr(dot + 1), service);
}

Result<EndpointId, std::string> EndpointId::from_text(const std::string& text) {
    EndpointId eid;
    if (text.starts_with("dtn:")) {
        eid.uri_code = kUriCodeDtn;
    } else if (text.starts_with("ipn:")) {
        eid.uri_code = kUriCodeIpn;
    } else {
        return strfmt("unknown EID scheme in '%s' (expected dtn: or ipn:)",
                      text.c_str());
    }
    eid.uri_text = text;
    if (auto v = eid.validate(); !v) return v.error();
    return eid;
}

Result<Unit, std::string> EndpointId::validate() const {
    if (uri_text.empty()) return std::string("empty EID");
    if (uri_text.size() > 255)
        return strfmt("EID longer than 255 octets (%zu)", uri_text.size());
    if (!valid_utf8({reinterpret_cast<const uint8_t*>(uri_text.data()),
                     uri_text.size()}))
        return std::string("EID is not valid UTF-8");
    if (uri_code == kUriCodeDtn && !uri_text.starts_with("dtn:"))
        return strfmt("URI code %u (dtn) but text '%s' lacks dtn: scheme",
                      uri_code, uri_text.c_str());
    if (uri_code == kUriCodeIpn) {
        if (!uri_text.starts_with("ipn:"))
            return strfmt("URI code %u (ipn) but text '%s' lacks ipn: scheme",
                          uri_code, uri_text.c_str());
        if (!valid_ipn_uri(uri_text))
            return strfmt("malformed ipn URI '%s' (want ipn:<node>.<service>)",
                          uri_text.c_str());
    }
    return unit;
}

const char* nlri_errc_name(NlriErrc c) {
    switch (c) {
        case NlriErrc::truncated: return "truncated";
        case NlriErrc::bad_afi: return "bad_afi";
        case NlriErrc::unsupported_safi: return "unsupported_safi";
        case NlriErrc::bad_nhna_length: return "bad_nhna_length";
        case NlriErrc::count_mismatch: return "count_mismatch";
        case NlriErrc::bad_utf8: return "bad_utf8";
        case NlriErrc::bad_eid: return "bad_eid";
        case NlriErrc::trailing_bytes: return "trailing_bytes";
        case NlriErrc::invariant_violation: return "invariant_violation";
    }
    return "?";
}

std::string NlriError::to_string() const {
    return strfmt("%s: %s", nlri_errc_name(code), detail.c_str());
}

static NlriError err(NlriErrc c, std::string detail) {
    return NlriError{c, std::move(detail)};
}

size_t encoded_entry_size(const EidEntry& entry) {
    size_t n = 1 + 1 + entry.eid.uri_text.size() + 1;
    for (const auto& attr : entry.attributes) n += 3 + attr.value.size();
    return n;
}

static Result<Unit, NlriError> validate_entry(const EidEntry& entry) {
    if (auto v = entry.eid.validate(); !v)
        return err(NlriErrc::invariant_violation, v.error());
    if (entry.attributes.size() > 255)
        return err(NlriErrc::invariant_violation,
                   strfmt("entry has %zu attributes, limit 255",
                          entry.attributes.size()));
    for (const auto& attr : entry.attributes) {
        if (attr.value.size() > 65535)
            return err(NlriErrc::invariant_violation,
                       strfmt("attribute value %zu octets, limit 65535",
                              attr.value.size()));
    }
    return unit;
}

Result<Unit, NlriError> validate_announcement(const ReachabilityAnnouncement& a) {
    if (a.afi != kDtnAfi)
        return err(NlriErrc::invariant_violation, strfmt("AFI %u, expected %u", a.afi, kDtnAfi));
    if (!known_safi(a.next_hop.safi))
        return err(NlriErrc::invariant_violation,
                   strfmt("unsupported SAFI %u", a.next_hop.safi));
    if (a.entries.empty())
        return err(NlriErrc::invariant_violation, "announcement with no entries");
    if (a.entries.size() > 255)
        return err(NlriErrc::invariant_violation,
                   strfmt("%zu entries, limit 255", a.entries.size()));
    for (const auto& entry : a.entries)
        if (auto v = validate_entry(entry); !v) return v.error();
    return unit;
}

Result<Unit, NlriError> validate_withdrawal(const ReachabilityWithdrawal& w) {
    if (w.afi != kDtnAfi)
        return err(NlriErrc::invariant_violation, strfmt("AFI %u, expected %u", w.afi, kDtnAfi));
    if (!known_safi(w.safi))
        return err(NlriErrc::invariant_violation, strfmt("unsupported SAFI %u", w.safi));
    if (w.entries.empty())
        return err(NlriErrc::invariant_violation, "withdrawal with no entries");
    if (w.entries.size() > 255)
        return err(NlriErrc::invariant_violation,
                   strfmt("%zu entries, limit 255", w.entries.size()));
    for (const auto& entry : w.entries) {
        if (!entry.attributes.empty())
            return err(NlriErrc::invariant_violation,
                       "withdrawal entry carries attributes");
        if (auto v = validate_entry(entry); !v) return v.error();
    }
    return unit;
}

NlriResult<EncodedNhna> encode_nhna(const ClaEndpoint& e) {
    EncodedNhna out;
    out.bit_length = static_cast<uint8_t>(e.nhna_bit_length());
    ByteWriter w;
    w.raw(ByteView{e.address.octets.data(), e.address.size()});
    w.u16be(e.port);
    out.bytes = w.take();
    return out;
}

NlriResult<ClaEndpoint> decode_nhna(uint8_t safi, uint8_t bit_length, ByteView bytes) {
    if (bit_length != 48 && bit_length != 144)
        return err(NlriErrc::bad_nhna_length,
                   strfmt("NHNA length %u bits not in {48, 144}", bit_length));
    size_t want = bit_length / 8;
    if (bytes.size() != want)
        return err(NlriErrc::truncated,
                   strfmt("NHNA needs %zu octets, have %zu", want, bytes.size()));
    ClaEndpoint out;
    out.safi = safi;
    out.address.v6 = bit_length == 144;
    std::memcpy(out.address.octets.data(), bytes.data(), out.address.size());
    out.port = static_cast<uint16_t>(bytes[want - 2] << 8 | bytes[want - 1]);
    return out;
}

static void encode_entry(ByteWriter& w, const EidEntry& entry) {
    w.u8(entry.eid.uri_code);
    w.u8(static_cast<uint8_t>(entry.eid.uri_text.size()));
    w.raw(entry.eid.uri_text);
    w.u8(static_cast<uint8_t>(entry.attributes.size()));
    for (const auto& attr : entry.attributes) {
        w.u8(attr.attr_type);
        w.u16be(static_cast<uint16_t>(attr.value.size()));
        w.raw(attr.value);
    }
}

NlriResult<Bytes> encode_mp_reach(const ReachabilityAnnouncement& a) {
    if (auto v = validate_announcement(a); !v) return v.error();
    ByteWriter w;
    w.u16be(a.afi);
    w.u8(a.next_hop.safi);
    auto nhna = encode_nhna(a.next_hop);
    if (!nhna) return nhna.error();
    w.u8(nhna->bit_length);
    w.raw(nhna->bytes);
    w.u8(static_cast<uint8_t>(a.entries.size()));
    for (const auto& entry : a.entries) encode_entry(w, entry);
    return w.take();
}

// Reads one EID entry. `allow_attributes` is false for MP_UNREACH, where the
// count byte must be zero.
static NlriResult<EidEntry> decode_entry(ByteReader& r, bool allow_attributes,
                                         size_t index) {
    EidEntry entry;
    uint8_t eid_len = 0;
    if (!r.u8(entry.eid.uri_code) || !r.u8(eid_len))
        return err(NlriErrc::truncated, strfmt("entry %zu header", index));
    ByteView text;
    if (!r.view(eid_len, text))
        return err(NlriErrc::truncated,
                   strfmt("entry %zu EID value (%u octets)", index, eid_len));
    if (!valid_utf8(text))
        return err(NlriErrc::bad_utf8, strfmt("entry %zu EID value", index));
    entry.eid.uri_text.assign(text.begin(), text.end());
    if (auto v = entry.eid.validate(); !v)
        return err(NlriErrc::bad_eid, strfmt("entry %zu: %s", index, v.error().c_str()));

    uint8_t attr_count = 0;
    if (!r.u8(attr_count))
        return err(NlriErrc::truncated, strfmt("entry %zu attribute count", index));
    if (attr_count > 0 && !allow_attributes)
        return err(NlriErrc::count_mismatch,
                   strfmt("entry %zu: withdrawal entry with %u attributes",
                          index, attr_count));
    entry.attributes.reserve(attr_count);
    for (unsigned k = 0; k < attr_count; k++) {
        EidAttribute attr;
        uint16_t len = 0;
        if (!r.u8(attr.attr_type) || !r.u16be(len))
            return err(NlriErrc::truncated,
                       strfmt("entry %zu attribute %u TLV header", index, k));
        if (!r.bytes(len, attr.value))
            return err(NlriErrc::truncated,
                       strfmt("entry %zu attribute %u value (%u octets)", index, k, len));
        entry.attributes.push_back(std::move(attr));
    }
    return entry;
}

NlriResult<ReachabilityAnnouncement> decode_mp_reach(ByteView bytes) {
    ByteReader r(bytes);
    ReachabilityAnnouncement out;
    uint8_t nhna_len = 0;
    if (!r.u16be(out.afi)) return err(NlriErrc::truncated, "AFI");
    if (out.afi != kDtnAfi)
        return err(NlriErrc::bad_afi, strfmt("AFI %u, expected %u", out.afi, kDtnAfi));
    uint8_t safi = 0;
    if (!r.u8(safi)) return err(NlriErrc::truncated, "SAFI");
    if (!known_safi(safi))
        return err(NlriErrc::unsupported_safi, strfmt("SAFI %u", safi));
    if (!r.u8(nhna_len)) return err(NlriErrc::truncated, "NHNA length");
    if (nhna_len != 48 && nhna_len != 144)
        return err(NlriErrc::bad_nhna_length,
                   strfmt("NHNA length %u bits not in {48, 144}", nhna_len));
    ByteView nhna;
    if (!r.view(nhna_len / 8, nhna))
        return err(NlriErrc::truncated, "NHNA value");
    auto next_hop = decode_nhna(safi, nhna_len, nhna);
    if (!next_hop) return next_hop.error();
    out.next_hop = *next_hop;

    uint8_t count = 0;
    if (!r.u8(count)) return err(NlriErrc::truncated, "NLRI count");
    if (count == 0)
        return err(NlriErrc::count_mismatch, "NLRI count is zero");
    for (unsigned i = 0; i < count; i++) {
        auto entry = decode_entry(r, true, i);
        if (!entry) return entry.error();
        out.entries.push_back(std::move(*entry));
    }
    if (!r.empty())
        return err(NlriErrc::trailing_bytes,
                   strfmt("%zu octets after last entry", r.remaining()));
    return out;
}

NlriResult<Bytes> encode_mp_unreach(const ReachabilityWithdrawal& w) {
    if (auto v = validate_withdrawal(w); !v) return v.error();
    ByteWriter out;
    out.u16be(w.afi);
    out.u8(w.safi);
    out.u8(static_cast<uint8_t>(w.entries.size()));
    for (const auto& entry : w.entries) encode_entry(out, entry);
    return out.take();
}

NlriResult<ReachabilityWithdrawal> decode_mp_unreach(ByteView bytes) {
    ByteReader r(bytes);
    ReachabilityWithdrawal out;
    if (!r.u16be(out.afi)) return err(NlriErrc::truncated, "AFI");
    if (out.afi != kDtnAfi)
        return err(NlriErrc::bad_afi, strfmt("AFI %u, expected %u", out.afi, kDtnAfi));
    if (!r.u8(out.safi)) return err(NlriErrc::truncated, "SAFI");
    if (!known_safi(out.safi))
        return err(NlriErrc::unsupported_safi, strfmt("SAFI %u", out.safi));
    uint8_t count = 0;
    if (!r.u8(count)) return err(NlriErrc::truncated, "NLRI count");
    if (count == 0)
        return err(NlriErrc::count_mismatch, "NLRI count is zero");
    for (unsigned i = 0; i < count; i++) {
        auto entry = decode_entry(r, false, i);
        if (!entry) return entry.error();
        out.entries.push_back(std::move(*entry));
    }
    if (!r.empty())
        return err(NlriErrc::trailing_bytes,
                   strfmt("%zu octets after last entry", r.remaining()));
    return out;
}

}  // namespace dtnbgp
