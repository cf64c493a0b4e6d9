// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <chrono>
#include <deque>

#include "dtnbgp/bgp_msg.hpp"
#include "dtnbgp/log.hpp"

namespace dtnbgp {

using TimePoint = std::chrono::steady_clock::time_point;

enum class SessionState { idle, connect, open_sent, open_confirm, established };

const char* session_state_name(SessionState s);

struct SessionConfig {
    uint16_t local_asn = 0;
    uint32_t local_bgp_id = 0;
    uint16_t hold_time = 90;
    // Enforced against the peer's OPEN when set; inbound sessions leave it
    // unset and the owner validates after matching the peer by ASN.
    std::optional<uint16_t> expected_remote_asn;
    std::vector<MpCapability> capabilities;
    std::vector<uint8_t> supported_safis{kSafiMtcp, kSafiTcpclV3, kSafiTcpclV4,
                                         kSafiUdpcl};
    std::string name;  // log prefix
};

struct SessionEvent {
    enum class Kind {
        open_received,  // OPEN negotiated; params available on the session
        established,
        update,         // one parsed UPDATE, delivered in arrival order
        down,           // session left >idle; reason in `reason`
    };
    Kind kind;
    UpdateMsg update;
    std::string reason;
};

struct SessionStats {
    uint64_t updates_sent = 0;
    uint64_t updates_received = 0;
    uint64_t keepalives_sent = 0;
    uint64_t keepalives_received = 0;
    uint64_t notifications_sent = 0;
    uint64_t notifications_received = 0;
    uint64_t unsupported_safi_skipped = 0;
    size_t max_rx_frame = 0;
    size_t max_tx_frame = 0;
};

// BGP-4 peer session state machine. Owns no transport: the caller feeds
// received bytes and connection lifecycle events in, and drains output bytes
// and session events out. All methods take the current monotonic time, so
// tests can drive the timers with a synthetic clock.
class SessionFsm {
public:
    SessionFsm(SessionConfig cfg, Logger log);

    // Transport lifecycle, reported by the owner.
    void transport_connecting(TimePoint now);
    void transport_up(TimePoint now);
    void transport_closed(TimePoint now);

    // Received bytes (any framing split). May emit events and output.
    void on_bytes(ByteView data, TimePoint now);

    // Timer-driven work: keepalive emission and hold-timer expiry.
    void tick(TimePoint now);

    // Queues an UPDATE for sending. Only valid when established; refuses
    // DTN-attribute updates when the peer is not DTN-capable.
    BgpResult<Unit> send_update(const UpdateMsg& update, TimePoint now);

    // Sends a NOTIFICATION and tears the session down.
    void send_notification(uint8_t code, uint8_t subcode,
                           std::string_view reason, TimePoint now);

    // Pending output bytes to write to the transport.
    Bytes take_output();
    bool has_output() const { return !out_.empty(); }

    // True once the FSM has decided the transport must be closed (after any
    // remaining output is flushed).
    bool want_close() const { return want_close_; }

    std::vector<SessionEvent> take_events();

    SessionState state() const { return state_; }
    bool established() const { return state_ == SessionState::established; }
    bool dtn_capable() const { return params_.dtn_capable; }
    const SessionParams& params() const { return params_; }
    uint16_t negotiated_hold() const { return params_.hold_time; }
    const SessionConfig& config() const { return cfg_; }
    const SessionStats& stats() const { return stats_; }

    // Earliest of the hold and keepalive deadlines, for poll timeouts.
    std::optional<TimePoint> next_deadline() const;

private:
    void enter_idle(std::string reason, TimePoint now);
    void send_message(const BgpMessage& m, TimePoint now);
    void protocol_error(uint8_t code, uint8_t subcode, std::string_view reason,
                        TimePoint now);
    void handle_frame(ByteView frame, TimePoint now);
    void handle_open(OpenMsg open, TimePoint now);

    SessionConfig cfg_;
    Logger log_;
    SessionState state_ = SessionState::idle;
    SessionParams params_;
    OpenMsg open_sent_;
    OpenMsg open_received_;
    Bytes rx_;
    Bytes out_;
    std::vector<SessionEvent> events_;
    SessionStats stats_;
    bool want_close_ = false;
    std::optional<TimePoint> hold_deadline_;
    std::optional<TimePoint> keepalive_at_;
};

}  // namespace dtnbgp
