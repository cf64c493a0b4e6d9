// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "dtnbgp/nlri.hpp"

namespace dtnbgp {

// Who taught us a route: the local BP agent, or a BGP peer.
struct RouteSource {
    bool is_local = false;
    std::string peer_id;             // "host:port" of the configured peer
    uint32_t bgp_id = 0;             // peer's BGP identifier
    std::vector<uint16_t> as_path;   // as received; empty for local routes

    static RouteSource local() { return RouteSource{true, {}, 0, {}}; }
    static RouteSource peer(std::string id, uint32_t bgp_id,
                            std::vector<uint16_t> as_path) {
        return RouteSource{false, std::move(id), bgp_id, std::move(as_path)};
    }

    std::string key() const { return is_local ? "local" : "peer:" + peer_id; }
    std::string label() const { return is_local ? "local" : "peer " + peer_id; }

    friend bool operator==(const RouteSource&, const RouteSource&) = default;
};

struct Route {
    RouteSource source;
    ClaEndpoint next_hop;
    std::vector<EidAttribute> attributes;
    uint64_t learned_at = 0;  // monotonic insertion sequence
};

// Total preference order: local first, then shortest AS path, then lowest
// BGP identifier, then earliest learning time. Returns nullptr on empty.
const Route* select_best(const std::vector<const Route*>& routes);

struct RibDeltaEntry {
    EndpointId eid;
    ClaEndpoint next_hop;
    std::vector<EidAttribute> attributes;
    RouteSource source;
};

// Change feed over the *selected* routes only.
struct RibDelta {
    std::vector<RibDeltaEntry> upserts;
    std::vector<EndpointId> removed;

    bool empty() const { return upserts.empty() && removed.empty(); }
    void merge(RibDelta other);
};

struct RibRow {
    EndpointId eid;
    ClaEndpoint next_hop;
    std::vector<uint16_t> as_path;
    std::string source_key;
    std::string source_label;
    std::vector<EidAttribute> attributes;
};

// One announcement ready for export, with the AS path it must carry (the
// route's path before the sender prepends its own ASN).
struct ExportAnnouncement {
    ReachabilityAnnouncement announcement;
    std::vector<uint16_t> as_path;
};

struct ExportBatch {
    std::vector<ExportAnnouncement> announcements;
    std::vector<ReachabilityWithdrawal> withdrawals;

    bool empty() const { return announcements.empty() && withdrawals.empty(); }
};

// Per-EID reachability database with deterministic best-route selection,
// AS-path loop rejection, and per-peer export bookkeeping (split horizon,
// next-hop-self rewrite). Single-writer: callers serialize mutations.
class Rib {
public:
    explicit Rib(uint16_t own_asn) : own_asn_(own_asn) {}

    RibDelta apply_announcement(const RouteSource& source,
                                const ReachabilityAnnouncement& a);
    RibDelta apply_withdrawal(const RouteSource& source,
                              const ReachabilityWithdrawal& w);
    RibDelta drop_peer(const std::string& peer_id);

    // Computes what `peer_id` must be told given a selected-route delta.
    // Split horizon suppresses routes learned from that peer; announced next
    // hops are rewritten to this node's own CLA endpoint for the route's
    // SAFI; routes whose SAFI has no local CLA are not exported. Updates the
    // per-peer advertised-state bookkeeping.
    ExportBatch export_for_peer(const std::string& peer_id, const RibDelta& delta,
                                const std::map<uint8_t, ClaEndpoint>& local_clas);

    // Full-table export after a session (re)establishment.
    ExportBatch full_export_for_peer(const std::string& peer_id,
                                     const std::map<uint8_t, ClaEndpoint>& local_clas);

    // Forgets what was advertised to a peer (session loss).
    void reset_peer_export(const std::string& peer_id);

    // Selected routes in EID order.
    std::vector<RibRow> rows() const;

    // One line per EID: eid | next_hop | safi | as_path | source | attr_count
    std::string dump() const;

    size_t entry_count() const { return entries_.size(); }
    uint64_t loop_rejected() const { return loop_rejected_; }

private:
    struct Entry {
        std::map<std::string, Route> routes;  // keyed by source key
        const Route* selected = nullptr;
    };

    struct Advertised {
        uint8_t safi = 0;
        ClaEndpoint next_hop;
        std::vector<uint16_t> as_path;
        std::vector<EidAttribute> attributes;

        friend bool operator==(const Advertised&, const Advertised&) = default;
    };

    using SelectedSnapshot = std::optional<
        std::tuple<std::string, ClaEndpoint, std::vector<EidAttribute>>>;
    static SelectedSnapshot snapshot(const Entry& entry);
    void reselect(const EndpointId& eid, Entry& entry,
                  const SelectedSnapshot& before, RibDelta& delta);

    uint16_t own_asn_;
    uint64_t seq_ = 0;
    uint64_t loop_rejected_ = 0;
    std::map<EndpointId, Entry> entries_;
    std::map<std::string, std::map<EndpointId, Advertised>> adj_out_;
};

}  // namespace dtnbgp
