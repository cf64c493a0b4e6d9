// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtnbgp/result.hpp"

namespace dtnbgp {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

// Appends big-endian integers and raw bytes to a growable buffer.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16be(uint16_t v) {
        buf_.push_back(static_cast<uint8_t>(v >> 8));
        buf_.push_back(static_cast<uint8_t>(v));
    }
    void u32be(uint32_t v) {
        buf_.push_back(static_cast<uint8_t>(v >> 24));
        buf_.push_back(static_cast<uint8_t>(v >> 16));
        buf_.push_back(static_cast<uint8_t>(v >> 8));
        buf_.push_back(static_cast<uint8_t>(v));
    }
    void raw(ByteView v) { buf_.insert(buf_.end(), v.begin(), v.end()); }
    void raw(std::string_view v) {
        buf_.insert(buf_.end(), v.begin(), v.end());
    }

    size_t size() const { return buf_.size(); }
    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

// Cursor over a byte view. Reads return false when the input is exhausted;
// the cursor never advances past the end.
class ByteReader {
public:
    explicit ByteReader(ByteView d) : d_(d) {}

    size_t remaining() const { return d_.size() - pos_; }
    size_t consumed() const { return pos_; }
    bool empty() const { return remaining() == 0; }

    bool u8(uint8_t& out) {
        if (remaining() < 1) return false;
        out = d_[pos_++];
        return true;
    }
    bool u16be(uint16_t& out) {
        if (remaining() < 2) return false;
        out = static_cast<uint16_t>(d_[pos_] << 8 | d_[pos_ + 1]);
        pos_ += 2;
        return true;
    }
    bool u32be(uint32_t& out) {
        if (remaining() < 4) return false;
        out = static_cast<uint32_t>(d_[pos_]) << 24 |
              static_cast<uint32_t>(d_[pos_ + 1]) << 16 |
              static_cast<uint32_t>(d_[pos_ + 2]) << 8 |
              static_cast<uint32_t>(d_[pos_ + 3]);
        pos_ += 4;
        return true;
    }
    bool bytes(size_t n, Bytes& out) {
        if (remaining() < n) return false;
        out.assign(d_.begin() + pos_, d_.begin() + pos_ + n);
        pos_ += n;
        return true;
    }
    bool view(size_t n, ByteView& out) {
        if (remaining() < n) return false;
        out = d_.subspan(pos_, n);
        pos_ += n;
        return true;
    }
    bool skip(size_t n) {
        if (remaining() < n) return false;
        pos_ += n;
        return true;
    }

private:
    ByteView d_;
    size_t pos_ = 0;
};

bool valid_utf8(ByteView s);

std::string to_hex(ByteView data);
Result<Bytes, std::string> from_hex(std::string_view text);

std::string base64_encode(ByteView data);
Result<Bytes, std::string> base64_decode(std::string_view text);

// printf-style formatting into a std::string.
std::string strfmt(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

}  // namespace dtnbgp
