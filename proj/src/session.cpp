// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "dtnbgp/session.hpp"

namespace dtnbgp {

using std::chrono::seconds;

const char* session_state_name(SessionState s) {
    switch (s) {
        case SessionState::idle: return "Idle";
        case SessionState::connect: return "Connect";
        case SessionState::open_sent: return "OpenSent";
        case SessionState::open_confirm: return "OpenConfirm";
        case SessionState::established: return "Established";
    }
    return "?";
}

SessionFsm::SessionFsm(SessionConfig cfg, Logger log)
    : cfg_(std::move(cfg)), log_(log.with_prefix(cfg_.name)) {}

void SessionFsm::transport_connecting(TimePoint) {
    state_ = SessionState::connect;
}

void SessionFsm::transport_up(TimePoint now) {
    rx_.clear();
    out_.clear();
    want_close_ = false;
    open_sent_ = OpenMsg{4, cfg_.local_asn, cfg_.hold_time, cfg_.local_bgp_id,
                         cfg_.capabilities};
    send_message(open_sent_, now);
    state_ = SessionState::open_sent;
    // Until negotiation completes, run the hold timer on the local setting.
    hold_deadline_ = cfg_.hold_time > 0
                         ? std::optional{now + seconds(cfg_.hold_time)}
                         : std::nullopt;
    keepalive_at_.reset();
    log_.debug("OPEN sent, state OpenSent");
}

void SessionFsm::transport_closed(TimePoint now) {
    if (state_ == SessionState::idle) return;
    enter_idle("transport closed", now);
}

void SessionFsm::enter_idle(std::string reason, TimePoint now) {
    (void)now;
    if (state_ != SessionState::idle)
        log_.info(strfmt("session down: %s", reason.c_str()));
    state_ = SessionState::idle;
    params_ = SessionParams{};
    rx_.clear();
    hold_deadline_.reset();
    keepalive_at_.reset();
    events_.push_back({SessionEvent::Kind::down, {}, std::move(reason)});
}

void SessionFsm::send_message(const BgpMessage& m, TimePoint now) {
    (void)now;
    auto frame = frame_message(m);
    if (!frame) {
        // Only reachable through an internal composition bug; drop the frame
        // rather than send garbage.
        log_.error(strfmt("failed to frame %s: %s", message_type_name(m),
                          frame.error().to_string().c_str()));
        return;
    }
    stats_.max_tx_frame = std::max(stats_.max_tx_frame, frame->size());
    if (std::holds_alternative<KeepaliveMsg>(m)) stats_.keepalives_sent++;
    if (std::holds_alternative<UpdateMsg>(m)) stats_.updates_sent++;
    if (std::holds_alternative<NotificationMsg>(m)) stats_.notifications_sent++;
    out_.insert(out_.end(), frame->begin(), frame->end());
}

void SessionFsm::protocol_error(uint8_t code, uint8_t subcode,
                                std::string_view reason, TimePoint now) {
    log_.warn(strfmt("protocol error: %.*s", static_cast<int>(reason.size()),
                     reason.data()));
    send_notification(code, subcode, reason, now);
}

void SessionFsm::send_notification(uint8_t code, uint8_t subcode,
                                   std::string_view reason, TimePoint now) {
    NotificationMsg n;
    n.code = code;
    n.subcode = subcode;
    send_message(BgpMessage{n}, now);
    want_close_ = true;
    enter_idle(strfmt("notification sent (%u/%u): %.*s", code, subcode,
                      static_cast<int>(reason.size()), reason.data()),
               now);
}

void SessionFsm::on_bytes(ByteView data, TimePoint now) {
    if (want_close_) return;
    rx_.insert(rx_.end(), data.begin(), data.end());
    while (!want_close_ && state_ != SessionState::idle) {
        auto peek = peek_frame(rx_);
        if (!peek) {
            protocol_error(kNotifHeaderError, 0, peek.error().detail, now);
            return;
        }
        if (!peek->has_value()) return;  // wait for more bytes
        size_t len = **peek;
        Bytes frame(rx_.begin(), rx_.begin() + len);
        rx_.erase(rx_.begin(), rx_.begin() + len);
        handle_frame(frame, now);
    }
}

void SessionFsm::handle_frame(ByteView frame, TimePoint now) {
    stats_.max_rx_frame = std::max(stats_.max_rx_frame, frame.size());
    if (params_.hold_time > 0)
        hold_deadline_ = now + seconds(params_.hold_time);
    else if (state_ == SessionState::open_sent && cfg_.hold_time > 0)
        hold_deadline_ = now + seconds(cfg_.hold_time);

    auto parsed = parse_message(frame);
    if (!parsed) {
        const auto& e = parsed.error();
        if (e.code == BgpErrc::attribute && e.nlri &&
            e.nlri->code == NlriErrc::unsupported_safi) {
            // A well-formed UPDATE for a CLA family we do not know: skip and
            // log, keep the session.
            stats_.unsupported_safi_skipped++;
            log_.warn(strfmt("skipping UPDATE: %s", e.to_string().c_str()));
            return;
        }
        uint8_t code = e.code == BgpErrc::attribute ? kNotifUpdateError
                                                    : kNotifHeaderError;
        protocol_error(code, 0, e.to_string(), now);
        return;
    }

    if (auto* open = std::get_if<OpenMsg>(&*parsed)) {
        handle_open(std::move(*open), now);
    } else if (std::holds_alternative<KeepaliveMsg>(*parsed)) {
        stats_.keepalives_received++;
        if (state_ == SessionState::open_confirm) {
            state_ = SessionState::established;
            log_.info(strfmt("established (remote ASN %u, hold %u)",
                             params_.remote_asn, params_.hold_time));
            events_.push_back({SessionEvent::Kind::established, {}, {}});
        } else if (state_ != SessionState::established) {
            protocol_error(kNotifFsmError, 0, "KEEPALIVE before OPEN", now);
        }
    } else if (auto* update = std::get_if<UpdateMsg>(&*parsed)) {
        if (state_ != SessionState::established) {
            protocol_error(kNotifFsmError, 0, "UPDATE outside Established", now);
            return;
        }
        stats_.updates_received++;
        if (!update->mp_reach && !update->mp_unreach) {
            log_.debug("UPDATE with no DTN attributes ignored");
            return;
        }
        events_.push_back({SessionEvent::Kind::update, std::move(*update), {}});
    } else if (auto* notif = std::get_if<NotificationMsg>(&*parsed)) {
        stats_.notifications_received++;
        want_close_ = true;
        enter_idle(strfmt("notification received (%u/%u)", notif->code,
                          notif->subcode),
                   now);
    }
}

void SessionFsm::handle_open(OpenMsg open, TimePoint now) {
    if (state_ != SessionState::open_sent) {
        protocol_error(kNotifFsmError, 0,
                       strfmt("OPEN in state %s", session_state_name(state_)),
                       now);
        return;
    }
    auto params = negotiate(open_sent_, open, cfg_.expected_remote_asn,
                            cfg_.supported_safis);
    if (!params) {
        const auto& rej = params.error();
        protocol_error(rej.code, rej.subcode, rej.reason, now);
        return;
    }
    params_ = *params;
    open_received_ = std::move(open);
    events_.push_back({SessionEvent::Kind::open_received, {}, {}});

    send_message(BgpMessage{KeepaliveMsg{}}, now);
    state_ = SessionState::open_confirm;
    if (params_.hold_time > 0) {
        hold_deadline_ = now + seconds(params_.hold_time);
        keepalive_at_ = now + seconds(params_.hold_time / 3);
    } else {
        hold_deadline_.reset();
        keepalive_at_.reset();
    }
    log_.debug(strfmt("OPEN received, state OpenConfirm, dtn_capable=%d",
                      params_.dtn_capable ? 1 : 0));
}

void SessionFsm::tick(TimePoint now) {
    if (state_ == SessionState::idle || state_ == SessionState::connect) return;
    if (hold_deadline_ && now >= *hold_deadline_) {
        protocol_error(kNotifHoldExpired, 0, "hold timer expired", now);
        return;
    }
    if (keepalive_at_ && now >= *keepalive_at_ &&
        (state_ == SessionState::open_confirm ||
         state_ == SessionState::established)) {
        send_message(BgpMessage{KeepaliveMsg{}}, now);
        *keepalive_at_ += seconds(params_.hold_time / 3);
        if (*keepalive_at_ <= now)
            *keepalive_at_ = now + seconds(params_.hold_time / 3);
    }
}

BgpResult<Unit> SessionFsm::send_update(const UpdateMsg& update, TimePoint now) {
    if (state_ != SessionState::established)
        return BgpError{BgpErrc::bad_state,
                        strfmt("cannot send UPDATE in state %s",
                               session_state_name(state_)),
                        std::nullopt};
    if ((update.mp_reach || update.mp_unreach) && !params_.dtn_capable)
        return BgpError{BgpErrc::not_capable,
                        "peer did not advertise the DTN address family",
                        std::nullopt};
    auto frame = frame_message(BgpMessage{update});
    if (!frame) return frame.error();
    stats_.max_tx_frame = std::max(stats_.max_tx_frame, frame->size());
    stats_.updates_sent++;
    out_.insert(out_.end(), frame->begin(), frame->end());
    (void)now;
    return unit;
}

Bytes SessionFsm::take_output() { return std::exchange(out_, {}); }

std::vector<SessionEvent> SessionFsm::take_events() {
    return std::exchange(events_, {});
}

std::optional<TimePoint> SessionFsm::next_deadline() const {
    std::optional<TimePoint> d = hold_deadline_;
    if (keepalive_at_ && (!d || *keepalive_at_ < *d)) d = keepalive_at_;
    return d;
}

}  // namespace dtnbgp
