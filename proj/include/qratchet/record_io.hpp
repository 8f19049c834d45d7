// Copyright 2026 The qratchet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary dump of a demon record, little-endian:
//
//   "QRMC"  u32 version (=1)  u64 N  then ceil(N/4) bytes
//
// Each byte packs four 2-bit joint symbols (2a + b), first symbol in the
// low bits. Unused high bits of the last byte are zero.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qratchet/ratchetmc.hpp"

namespace qratchet {

inline constexpr std::uint32_t kRecordVersion = 1;

namespace detail {
inline void put_le(std::vector<std::uint8_t> &out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}
inline std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t at,
                            int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= std::uint64_t{in[at + static_cast<std::size_t>(i)]} << (8 * i);
    }
    return v;
}
} // namespace detail

inline std::vector<std::uint8_t> encode_record(std::span<const std::uint8_t> symbols) {
    std::vector<std::uint8_t> out{'Q', 'R', 'M', 'C'};
    detail::put_le(out, kRecordVersion, 4);
    detail::put_le(out, symbols.size(), 8);
    out.resize(out.size() + (symbols.size() + 3) / 4, 0);
    std::uint8_t *payload = out.data() + 16;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] > 3) {
            throw std::invalid_argument("record symbol out of range");
        }
        payload[i / 4] |= static_cast<std::uint8_t>(symbols[i] << (2 * (i % 4)));
    }
    return out;
}

inline std::vector<std::uint8_t> encode_record(const OutcomeRecord &rec) {
    return encode_record(rec.symbols());
}

inline std::vector<std::uint8_t> decode_record(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 16 || bytes[0] != 'Q' || bytes[1] != 'R' ||
        bytes[2] != 'M' || bytes[3] != 'C') {
        throw std::runtime_error("record dump: bad magic");
    }
    if (detail::get_le(bytes, 4, 4) != kRecordVersion) {
        throw std::runtime_error("record dump: unsupported version");
    }
    const std::uint64_t n = detail::get_le(bytes, 8, 8);
    if (bytes.size() != 16 + (n + 3) / 4) {
        throw std::runtime_error("record dump: payload length mismatch");
    }
    std::vector<std::uint8_t> symbols(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        symbols[i] = (bytes[16 + i / 4] >> (2 * (i % 4))) & 3u;
    }
    return symbols;
}

} // namespace qratchet
