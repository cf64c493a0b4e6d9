// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "dtnbgp/nlri.hpp"

namespace dtnbgp {

inline constexpr size_t kMaxFrameLen = 4096;
inline constexpr size_t kMinFrameLen = 19;
inline constexpr size_t kMarkerLen = 16;
inline constexpr uint16_t kBgpDefaultPort = 179;

inline constexpr uint8_t kMsgOpen = 1;
inline constexpr uint8_t kMsgUpdate = 2;
inline constexpr uint8_t kMsgNotification = 3;
inline constexpr uint8_t kMsgKeepalive = 4;

inline constexpr uint8_t kAttrOrigin = 1;
inline constexpr uint8_t kAttrAsPath = 2;
inline constexpr uint8_t kAttrMpReach = 14;
inline constexpr uint8_t kAttrMpUnreach = 15;

inline constexpr uint8_t kAttrFlagOptional = 0x80;
inline constexpr uint8_t kAttrFlagTransitive = 0x40;
inline constexpr uint8_t kAttrFlagExtendedLen = 0x10;

inline constexpr uint8_t kOriginIncomplete = 2;

// NOTIFICATION error codes (subset used here).
inline constexpr uint8_t kNotifHeaderError = 1;
inline constexpr uint8_t kNotifOpenError = 2;
inline constexpr uint8_t kNotifUpdateError = 3;
inline constexpr uint8_t kNotifHoldExpired = 4;
inline constexpr uint8_t kNotifFsmError = 5;
inline constexpr uint8_t kNotifCease = 6;
// OPEN error subcodes.
inline constexpr uint8_t kOpenBadVersion = 1;
inline constexpr uint8_t kOpenBadPeerAs = 2;

struct MpCapability {
    uint16_t afi = 0;
    uint8_t safi = 0;

    friend bool operator==(const MpCapability&, const MpCapability&) = default;
};

struct OpenMsg {
    uint8_t version = 4;
    uint16_t asn = 0;
    uint16_t hold_time = 0;
    uint32_t bgp_id = 0;
    std::vector<MpCapability> capabilities;

    friend bool operator==(const OpenMsg&, const OpenMsg&) = default;
};

struct UpdateMsg {
    std::vector<uint16_t> as_path;
    uint8_t origin = kOriginIncomplete;
    std::optional<ReachabilityAnnouncement> mp_reach;
    std::optional<ReachabilityWithdrawal> mp_unreach;

    friend bool operator==(const UpdateMsg&, const UpdateMsg&) = default;
};

struct KeepaliveMsg {
    friend bool operator==(const KeepaliveMsg&, const KeepaliveMsg&) = default;
};

struct NotificationMsg {
    uint8_t code = 0;
    uint8_t subcode = 0;
    Bytes data;

    friend bool operator==(const NotificationMsg&, const NotificationMsg&) = default;
};

using BgpMessage = std::variant<OpenMsg, UpdateMsg, KeepaliveMsg, NotificationMsg>;

enum class BgpErrc {
    framing,
    unknown_message_type,
    attribute,
    invariant,
    oversize_entry,
    oversize_frame,
    not_capable,
    bad_state,
};

struct BgpError {
    BgpErrc code;
    std::string detail;
    std::optional<NlriError> nlri;  // set when code == attribute

    std::string to_string() const;
};

template <typename T>
using BgpResult = Result<T, BgpError>;

// Serializes one message into a full frame (header included). Fails if the
// result would exceed 4096 octets or the message violates its invariants.
BgpResult<Bytes> frame_message(const BgpMessage& m);

// Parses exactly one full frame (header included).
BgpResult<BgpMessage> parse_message(ByteView frame);

// Stream reassembly: returns the total frame length once the header is
// readable and sane, std::nullopt if more bytes are needed.
BgpResult<std::optional<size_t>> peek_frame(ByteView buffer);

struct SessionParams {
    uint16_t hold_time = 0;
    bool dtn_capable = false;
    std::vector<uint8_t> dtn_safis;  // remote's DTN SAFIs we also support
    uint16_t remote_asn = 0;
    uint32_t remote_bgp_id = 0;
};

struct OpenReject {
    uint8_t code = kNotifOpenError;
    uint8_t subcode = 0;
    std::string reason;
};

// Derives session parameters from the two OPENs. Hold time is the minimum of
// both sides; zero disables keepalive and hold timers entirely.
Result<SessionParams, OpenReject> negotiate(
    const OpenMsg& open_sent, const OpenMsg& open_received,
    std::optional<uint16_t> expected_remote_asn,
    std::span<const uint8_t> supported_safis);

// Splits one next hop's entries into UPDATE messages: at most 255 entries
// each and every resulting frame within the 4096-octet ceiling. Entry order
// is preserved across chunks.
BgpResult<std::vector<UpdateMsg>> chunk_updates(
    const ClaEndpoint& next_hop, const std::vector<EidEntry>& entries,
    const std::vector<uint16_t>& as_path);

// Same splitting for withdrawals of one SAFI.
BgpResult<std::vector<UpdateMsg>> chunk_withdrawals(
    uint8_t safi, const std::vector<EndpointId>& eids);

const char* message_type_name(const BgpMessage& m);

}  // namespace dtnbgp
