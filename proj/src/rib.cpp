// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "dtnbgp/rib.hpp"

#include <algorithm>

namespace dtnbgp {

const Route* select_best(const std::vector<const Route*>& routes) {
    const Route* best = nullptr;
    for (const Route* r : routes) {
        if (!r) continue;
        if (!best) {
            best = r;
            continue;
        }
        // Rule 1: local beats peer.
        if (r->source.is_local != best->source.is_local) {
            if (r->source.is_local) best = r;
            continue;
        }
        // Rule 2: shorter AS path.
        if (r->source.as_path.size() != best->source.as_path.size()) {
            if (r->source.as_path.size() < best->source.as_path.size()) best = r;
            continue;
        }
        // Rule 3: lower BGP identifier.
        if (r->source.bgp_id != best->source.bgp_id) {
            if (r->source.bgp_id < best->source.bgp_id) best = r;
            continue;
        }
        // Rule 4: earlier learning time.
        if (r->learned_at < best->learned_at) best = r;
    }
    return best;
}

void RibDelta::merge(RibDelta other) {
    for (auto& u : other.upserts) {
        removed.erase(std::remove(removed.begin(), removed.end(), u.eid),
                      removed.end());
        auto it = std::find_if(upserts.begin(), upserts.end(),
                               [&](const auto& e) { return e.eid == u.eid; });
        if (it != upserts.end())
            *it = std::move(u);
        else
            upserts.push_back(std::move(u));
    }
    for (auto& eid : other.removed) {
        upserts.erase(std::remove_if(upserts.begin(), upserts.end(),
                                     [&](const auto& e) { return e.eid == eid; }),
                      upserts.end());
        if (std::find(removed.begin(), removed.end(), eid) == removed.end())
            removed.push_back(std::move(eid));
    }
}

Rib::SelectedSnapshot Rib::snapshot(const Entry& entry) {
    if (!entry.selected) return std::nullopt;
    return std::tuple{entry.selected->source.key(), entry.selected->next_hop,
                      entry.selected->attributes};
}

// `before` must be captured prior to mutating entry.routes: the selected
// pointer is invalidated by replacement or erasure of the route it names.
void Rib::reselect(const EndpointId& eid, Entry& entry,
                   const SelectedSnapshot& before, RibDelta& delta) {
    std::vector<const Route*> candidates;
    candidates.reserve(entry.routes.size());
    for (const auto& [key, route] : entry.routes) candidates.push_back(&route);
    entry.selected = select_best(candidates);

    if (!entry.selected) {
        if (before) delta.removed.push_back(eid);
        return;
    }
    SelectedSnapshot after{std::tuple{entry.selected->source.key(),
                                      entry.selected->next_hop,
                                      entry.selected->attributes}};
    if (before != after)
        delta.upserts.push_back(RibDeltaEntry{eid, entry.selected->next_hop,
                                              entry.selected->attributes,
                                              entry.selected->source});
}

RibDelta Rib::apply_announcement(const RouteSource& source,
                                 const ReachabilityAnnouncement& a) {
    RibDelta delta;
    // Loop prevention: never accept a path that already carries our ASN.
    if (!source.is_local &&
        std::find(source.as_path.begin(), source.as_path.end(), own_asn_) !=
            source.as_path.end()) {
        loop_rejected_++;
        return delta;
    }
    for (const auto& e : a.entries) {
        Entry& entry = entries_[e.eid];
        auto it = entry.routes.find(source.key());
        if (it != entry.routes.end() && it->second.next_hop == a.next_hop &&
            it->second.attributes == e.attributes &&
            it->second.source == source) {
            continue;  // unchanged re-announcement keeps its original age
        }
        auto before = snapshot(entry);
        entry.routes[source.key()] = Route{source, a.next_hop, e.attributes, seq_++};
        reselect(e.eid, entry, before, delta);
    }
    return delta;
}

RibDelta Rib::apply_withdrawal(const RouteSource& source,
                               const ReachabilityWithdrawal& w) {
    RibDelta delta;
    for (const auto& e : w.entries) {
        auto it = entries_.find(e.eid);
        if (it == entries_.end()) continue;
        auto before = snapshot(it->second);
        if (it->second.routes.erase(source.key()) == 0) continue;
        reselect(e.eid, it->second, before, delta);
        if (it->second.routes.empty()) entries_.erase(it);
    }
    return delta;
}

RibDelta Rib::drop_peer(const std::string& peer_id) {
    RibDelta delta;
    std::string key = "peer:" + peer_id;
    for (auto it = entries_.begin(); it != entries_.end();) {
        auto before = snapshot(it->second);
        if (it->second.routes.erase(key) > 0)
            reselect(it->first, it->second, before, delta);
        if (it->second.routes.empty())
            it = entries_.erase(it);
        else
            ++it;
    }
    return delta;
}

ExportBatch Rib::export_for_peer(
    const std::string& peer_id, const RibDelta& delta,
    const std::map<uint8_t, ClaEndpoint>& local_clas) {
    auto& advertised = adj_out_[peer_id];

    // Grouping keys keep announcement batches deterministic: one
    // announcement per (SAFI, AS path), one withdrawal batch per SAFI.
    std::map<std::pair<uint8_t, std::vector<uint16_t>>, std::vector<EidEntry>>
        announce;
    std::map<uint8_t, std::vector<EidEntry>> withdraw;

    auto retract = [&](const EndpointId& eid) {
        auto it = advertised.find(eid);
        if (it == advertised.end()) return;
        withdraw[it->second.safi].push_back(EidEntry{eid, {}});
        advertised.erase(it);
    };

    for (const auto& u : delta.upserts) {
        bool split_horizon =
            !u.source.is_local && u.source.peer_id == peer_id;
        auto cla = local_clas.find(u.next_hop.safi);
        if (split_horizon || cla == local_clas.end()) {
            retract(u.eid);
            continue;
        }
        Advertised want{u.next_hop.safi, cla->second, u.source.as_path,
                        u.attributes};
        auto it = advertised.find(u.eid);
        if (it != advertised.end() && it->second == want) continue;
        advertised[u.eid] = want;
        announce[{want.safi, want.as_path}].push_back(
            EidEntry{u.eid, u.attributes});
    }
    for (const auto& eid : delta.removed) retract(eid);

    ExportBatch batch;
    for (auto& [key, entries] : announce) {
        const auto& [safi, as_path] = key;
        ClaEndpoint next_hop = local_clas.at(safi);
        for (size_t i = 0; i < entries.size(); i += 255) {
            ExportAnnouncement ea;
            ea.as_path = as_path;
            ea.announcement.next_hop = next_hop;
            ea.announcement.entries.assign(
                entries.begin() + i,
                entries.begin() + std::min(entries.size(), i + 255));
            batch.announcements.push_back(std::move(ea));
        }
    }
    for (auto& [safi, entries] : withdraw) {
        for (size_t i = 0; i < entries.size(); i += 255) {
            ReachabilityWithdrawal w;
            w.safi = safi;
            w.entries.assign(entries.begin() + i,
                             entries.begin() + std::min(entries.size(), i + 255));
            batch.withdrawals.push_back(std::move(w));
        }
    }
    return batch;
}

ExportBatch Rib::full_export_for_peer(
    const std::string& peer_id, const std::map<uint8_t, ClaEndpoint>& local_clas) {
    reset_peer_export(peer_id);
    RibDelta all;
    for (const auto& [eid, entry] : entries_) {
        if (!entry.selected) continue;
        all.upserts.push_back(RibDeltaEntry{eid, entry.selected->next_hop,
                                            entry.selected->attributes,
                                            entry.selected->source});
    }
    return export_for_peer(peer_id, all, local_clas);
}

void Rib::reset_peer_export(const std::string& peer_id) {
    adj_out_.erase(peer_id);
}

std::vector<RibRow> Rib::rows() const {
    std::vector<RibRow> out;
    out.reserve(entries_.size());
    for (const auto& [eid, entry] : entries_) {
        if (!entry.selected) continue;
        out.push_back(RibRow{eid, entry.selected->next_hop,
                             entry.selected->source.as_path,
                             entry.selected->source.key(),
                             entry.selected->source.label(),
                             entry.selected->attributes});
    }
    return out;
}

std::string Rib::dump() const {
    std::string out;
    for (const auto& row : rows()) {
        std::string path;
        for (size_t i = 0; i < row.as_path.size(); i++) {
            if (i > 0) path += ',';
            path += std::to_string(row.as_path[i]);
        }
        if (path.empty()) path = "-";
        out += strfmt("%s | %s | %u | %s | %s | %zu\n", row.eid.uri_text.c_str(),
                      row.next_hop.to_string().c_str(), row.next_hop.safi,
                      path.c_str(), row.source_label.c_str(),
                      row.attributes.size());
    }
    return out;
}

}  // namespace dtnbgp
