// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <random>
#include <string>

#include "dtnbgp/nlri.hpp"

namespace dtnbgp::test {

using Rng = std::mt19937;

inline size_t pick(Rng& rng, size_t lo, size_t hi) {
    return std::uniform_int_distribution<size_t>(lo, hi)(rng);
}

inline IpAddress random_address(Rng& rng) {
    IpAddress a;
    a.v6 = pick(rng, 0, 1) == 1;
    for (size_t i = 0; i < a.size(); i++)
        a.octets[i] = static_cast<uint8_t>(pick(rng, 0, 255));
    return a;
}

inline ClaEndpoint random_cla(Rng& rng) {
    ClaEndpoint e;
    e.safi = static_cast<uint8_t>(pick(rng, 0, 3));
    e.address = random_address(rng);
    e.port = static_cast<uint16_t>(pick(rng, 0, 65535));
    return e;
}

// Valid EIDs across both schemes plus opaque codes with free-form text.
inline EndpointId random_eid(Rng& rng) {
    switch (pick(rng, 0, 2)) {
        case 0:
            return EndpointId::ipn(strfmt("ipn:%zu.%zu", pick(rng, 0, 1u << 20),
                                          pick(rng, 0, 4096)));
        case 1: {
            std::string text = "dtn://";
            size_t len = pick(rng, 1, 40);
            for (size_t i = 0; i < len; i++)
                text.push_back(static_cast<char>('a' + pick(rng, 0, 25)));
            text.push_back('/');
            if (pick(rng, 0, 1)) text += strfmt("svc%zu", pick(rng, 0, 99));
            return EndpointId::dtn(text);
        }
        default: {
            // Opaque scheme code with some multi-byte UTF-8 sprinkled in.
            EndpointId eid;
            eid.uri_code = static_cast<uint8_t>(pick(rng, 3, 255));
            std::string text = "x:";
            size_t len = pick(rng, 0, 30);
            for (size_t i = 0; i < len; i++) {
                if (pick(rng, 0, 7) == 0)
                    text += "é";  // two-octet code point
                else
                    text.push_back(static_cast<char>('0' + pick(rng, 0, 9)));
            }
            eid.uri_text = text;
            return eid;
        }
    }
}

inline EidAttribute random_attr(Rng& rng) {
    EidAttribute a;
    a.attr_type = static_cast<uint8_t>(pick(rng, 0, 255));
    // Mostly small values; occasionally a few hundred octets (public-key sized).
    size_t len = pick(rng, 0, 9) == 0 ? pick(rng, 256, 600) : pick(rng, 0, 24);
    a.value.resize(len);
    for (auto& b : a.value) b = static_cast<uint8_t>(pick(rng, 0, 255));
    return a;
}

inline EidEntry random_entry(Rng& rng, size_t max_attrs) {
    EidEntry e;
    e.eid = random_eid(rng);
    size_t n = pick(rng, 0, max_attrs);
    for (size_t i = 0; i < n; i++) e.attributes.push_back(random_attr(rng));
    return e;
}

inline ReachabilityAnnouncement random_announcement(Rng& rng) {
    ReachabilityAnnouncement a;
    a.next_hop = random_cla(rng);
    // Bias toward small entry counts but exercise the 255 boundary sometimes.
    size_t count = pick(rng, 0, 19) == 0 ? pick(rng, 200, 255) : pick(rng, 1, 6);
    for (size_t i = 0; i < count; i++)
        a.entries.push_back(random_entry(rng, count > 20 ? 0 : 3));
    return a;
}

inline ReachabilityWithdrawal random_withdrawal(Rng& rng) {
    ReachabilityWithdrawal w;
    w.safi = static_cast<uint8_t>(pick(rng, 0, 3));
    size_t count = pick(rng, 1, 8);
    for (size_t i = 0; i < count; i++)
        w.entries.push_back(EidEntry{random_eid(rng), {}});
    return w;
}

}  // namespace dtnbgp::test
