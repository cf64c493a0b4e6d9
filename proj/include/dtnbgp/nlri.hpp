// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtnbgp/bytes.hpp"
#include "dtnbgp/result.hpp"

namespace dtnbgp {

// Address family identifier carried by every DTN reachability attribute.
// Provisional value pending standardization.
inline constexpr uint16_t kDtnAfi = 23042;

// EID URI scheme codes, mirroring the Bundle Protocol scheme registry.
inline constexpr uint8_t kUriCodeDtn = 1;
inline constexpr uint8_t kUriCodeIpn = 2;

// SAFI values select the convergence-layer protocol of the next hop.
inline constexpr uint8_t kSafiMtcp = 0;
inline constexpr uint8_t kSafiTcpclV3 = 1;
inline constexpr uint8_t kSafiTcpclV4 = 2;
inline constexpr uint8_t kSafiUdpcl = 3;  // reserved; not probeable

bool known_safi(uint8_t safi);
const char* safi_name(uint8_t safi);

// IPv4 or IPv6 address, network byte order.
struct IpAddress {
    bool v6 = false;
    std::array<uint8_t, 16> octets{};  // v4 uses the first 4

    size_t size() const { return v6 ? 16 : 4; }
    std::string to_string() const;
    static Result<IpAddress, std::string> parse(const std::string& text);
    static IpAddress v4(uint8_t a, uint8_t b, uint8_t c, uint8_t d);

    friend bool operator==(const IpAddress&, const IpAddress&) = default;
};

// A DTN endpoint identifier: scheme code plus the full URI text.
struct EndpointId {
    uint8_t uri_code = 0;
    std::string uri_text;

    static EndpointId ipn(const std::string& uri) { return {kUriCodeIpn, uri}; }
    static EndpointId dtn(const std::string& uri) { return {kUriCodeDtn, uri}; }

    // Infers the scheme code from the URI text ("dtn:" or "ipn:").
    static Result<EndpointId, std::string> from_text(const std::string& text);

    // Checks length, UTF-8 validity, scheme/code consistency, and ipn syntax.
    Result<Unit, std::string> validate() const;

    friend bool operator==(const EndpointId&, const EndpointId&) = default;
    friend auto operator<=>(const EndpointId& a, const EndpointId& b) {
        if (auto c = a.uri_text <=> b.uri_text; c != 0) return c;
        return a.uri_code <=> b.uri_code;
    }
};

// Where to hand over bundles: a convergence-layer endpoint of the next hop.
struct ClaEndpoint {
    uint8_t safi = kSafiMtcp;
    IpAddress address;
    uint16_t port = 0;

    // On-wire NHNA length in bits: address bits plus 16 port bits.
    unsigned nhna_bit_length() const { return address.v6 ? 144 : 48; }
    std::string to_string() const;  // "10.0.0.1:4556" or "[2001:db8::1]:4556"

    friend bool operator==(const ClaEndpoint&, const ClaEndpoint&) = default;
};

// Opaque auxiliary attribute TLV bound to an EID (e.g. a public key).
struct EidAttribute {
    uint8_t attr_type = 0;
    Bytes value;

    friend bool operator==(const EidAttribute&, const EidAttribute&) = default;
};

struct EidEntry {
    EndpointId eid;
    std::vector<EidAttribute> attributes;

    friend bool operator==(const EidEntry&, const EidEntry&) = default;
};

// Value payload of the DTN MP_REACH_NLRI path attribute.
struct ReachabilityAnnouncement {
    uint16_t afi = kDtnAfi;
    ClaEndpoint next_hop;
    std::vector<EidEntry> entries;  // 1..255

    friend bool operator==(const ReachabilityAnnouncement&,
                           const ReachabilityAnnouncement&) = default;
};

// Value payload of the DTN MP_UNREACH_NLRI path attribute. Entries carry no
// attributes; the on-wire attribute count byte is present and zero.
struct ReachabilityWithdrawal {
    uint16_t afi = kDtnAfi;
    uint8_t safi = kSafiMtcp;
    std::vector<EidEntry> entries;  // 1..255, all with empty attribute lists

    friend bool operator==(const ReachabilityWithdrawal&,
                           const ReachabilityWithdrawal&) = default;
};

enum class NlriErrc {
    truncated,
    bad_afi,
    unsupported_safi,
    bad_nhna_length,
    count_mismatch,
    bad_utf8,
    bad_eid,
    trailing_bytes,
    invariant_violation,
};

const char* nlri_errc_name(NlriErrc c);

struct NlriError {
    NlriErrc code;
    std::string detail;

    std::string to_string() const;
};

template <typename T>
using NlriResult = Result<T, NlriError>;

// Attribute-value codecs. Layouts are fixed; see the golden vectors under
// tests/testdata/ for a field-by-field breakdown.
NlriResult<Bytes> encode_mp_reach(const ReachabilityAnnouncement& a);
NlriResult<ReachabilityAnnouncement> decode_mp_reach(ByteView bytes);
NlriResult<Bytes> encode_mp_unreach(const ReachabilityWithdrawal& w);
NlriResult<ReachabilityWithdrawal> decode_mp_unreach(ByteView bytes);

struct EncodedNhna {
    uint8_t bit_length;
    Bytes bytes;
};

NlriResult<EncodedNhna> encode_nhna(const ClaEndpoint& e);
NlriResult<ClaEndpoint> decode_nhna(uint8_t safi, uint8_t bit_length, ByteView bytes);

// Exact encoded size of one EID entry (uri code, length, text, attr TLVs).
size_t encoded_entry_size(const EidEntry& entry);

Result<Unit, NlriError> validate_announcement(const ReachabilityAnnouncement& a);
Result<Unit, NlriError> validate_withdrawal(const ReachabilityWithdrawal& w);

}  // namespace dtnbgp
