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

/**
 * @file
 * Order-0 range coder with a 32-bit range, a 33-bit low register and
 * byte-wise carry propagation (the cache/pending-0xFF scheme used by LZMA).
 *
 * Sub-interval bounds are computed as (range * cum) >> 16 with a 64-bit
 * product instead of range / total * cum, so the only loss against the
 * ideal code length is the 16-bit quantization of the model and a few
 * bytes of flush.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qratchet {

struct CoderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Symbol frequencies quantized to a total of 2^16.
class FrequencyModel {
  public:
    static constexpr unsigned kTotalBits = 16;
    static constexpr std::uint32_t kTotal = 1u << kTotalBits;

    explicit FrequencyModel(std::span<const double> probabilities) {
        if (probabilities.empty() || probabilities.size() > 256) {
            throw CoderError("model alphabet must have 1..256 symbols");
        }
        double total = 0.0;
        for (double p : probabilities) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw CoderError("model probabilities must be finite and >= 0");
            }
            total += p;
        }
        if (!(total > 0.0)) {
            throw CoderError("model probabilities sum to zero");
        }
        freq_.resize(probabilities.size());
        std::int64_t assigned = 0;
        std::size_t largest = 0;
        for (std::size_t s = 0; s < probabilities.size(); ++s) {
            const double p = probabilities[s] / total;
            std::int64_t f = std::llround(p * kTotal);
            if (p > 0.0) {
                f = std::max<std::int64_t>(f, 1);
            }
            freq_[s] = static_cast<std::uint32_t>(f);
            assigned += f;
            if (probabilities[s] > probabilities[largest]) {
                largest = s;
            }
        }
        const std::int64_t fix = static_cast<std::int64_t>(kTotal) - assigned;
        if (static_cast<std::int64_t>(freq_[largest]) + fix < 1) {
            throw CoderError("model cannot be quantized to 16 bits");
        }
        freq_[largest] =
            static_cast<std::uint32_t>(static_cast<std::int64_t>(freq_[largest]) + fix);
        cum_.resize(freq_.size() + 1, 0);
        std::partial_sum(freq_.begin(), freq_.end(), cum_.begin() + 1);
    }
    explicit FrequencyModel(std::initializer_list<double> p)
        : FrequencyModel(std::span<const double>(p.begin(), p.size())) {}

    [[nodiscard]] std::size_t size() const noexcept { return freq_.size(); }
    [[nodiscard]] std::uint32_t freq(std::size_t s) const { return freq_[s]; }
    [[nodiscard]] std::uint32_t cum(std::size_t s) const { return cum_[s]; }
    /// Quantized probability actually used by the coder.
    [[nodiscard]] double probability(std::size_t s) const {
        return static_cast<double>(freq_[s]) / kTotal;
    }
    /// Ideal code length of one occurrence of s under the quantized model.
    [[nodiscard]] double information_bits(std::size_t s) const {
        return -std::log2(probability(s));
    }

  private:
    std::vector<std::uint32_t> freq_;
    std::vector<std::uint32_t> cum_;
};

namespace detail {
inline constexpr std::uint32_t kRangeTop = 1u << 24;

inline std::uint32_t scaled_bound(std::uint32_t range, std::uint32_t cum) {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(range) * cum) >> FrequencyModel::kTotalBits);
}
} // namespace detail

class RangeEncoder {
  public:
    void encode(std::size_t symbol, const FrequencyModel &model) {
        if (symbol >= model.size() || model.freq(symbol) == 0) {
            throw CoderError("symbol " + std::to_string(symbol) +
                             " has zero model probability");
        }
        const std::uint32_t lo = detail::scaled_bound(range_, model.cum(symbol));
        const std::uint32_t hi =
            symbol + 1 == model.size()
                ? range_
                : detail::scaled_bound(range_, model.cum(symbol + 1));
        low_ += lo;
        range_ = hi - lo;
        while (range_ < detail::kRangeTop) {
            range_ <<= 8;
            shift_low();
        }
    }

    /// Flushes the low register and returns the encoded bytes.
    std::vector<std::uint8_t> finish() && {
        for (int i = 0; i < 5; ++i) {
            shift_low();
        }
        return std::move(out_);
    }

  private:
    void shift_low() {
        if (low_ < 0xFF000000ull || low_ >= (1ull << 32)) {
            const auto carry = static_cast<std::uint8_t>(low_ >> 32);
            std::uint8_t pending = cache_;
            do {
                out_.push_back(static_cast<std::uint8_t>(pending + carry));
                pending = 0xFF;
            } while (--cache_size_ != 0);
            cache_ = static_cast<std::uint8_t>(low_ >> 24);
        }
        ++cache_size_;
        low_ = (low_ & 0x00FFFFFFull) << 8;
    }

    std::uint64_t low_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint8_t cache_ = 0;
    std::uint64_t cache_size_ = 1;
    std::vector<std::uint8_t> out_;
};

class RangeDecoder {
  public:
    explicit RangeDecoder(std::span<const std::uint8_t> bytes) : in_(bytes) {
        for (int i = 0; i < 5; ++i) {
            code_ = (code_ << 8) | next();
        }
    }

    std::size_t decode(const FrequencyModel &model) {
        std::size_t s = 0;
        while (s + 1 < model.size() &&
               detail::scaled_bound(range_, model.cum(s + 1)) <= code_) {
            ++s;
        }
        const std::uint32_t lo = detail::scaled_bound(range_, model.cum(s));
        const std::uint32_t hi = s + 1 == model.size()
                                     ? range_
                                     : detail::scaled_bound(range_, model.cum(s + 1));
        code_ -= lo;
        range_ = hi - lo;
        while (range_ < detail::kRangeTop) {
            range_ <<= 8;
            code_ = (code_ << 8) | next();
        }
        return s;
    }

  private:
    std::uint32_t next() {
        return pos_ < in_.size() ? in_[pos_++] : 0u;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    std::uint32_t code_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
};

struct EncodeResult {
    std::vector<std::uint8_t> bytes;
    double ideal_bits; ///< sum of -log2 q(s) under the quantized model

    [[nodiscard]] std::size_t byte_count() const { return bytes.size(); }
    [[nodiscard]] double bits() const { return 8.0 * static_cast<double>(bytes.size()); }
};

inline EncodeResult arithmetic_encode(std::span<const std::uint8_t> symbols,
                                      const FrequencyModel &model) {
    RangeEncoder enc;
    std::vector<std::uint64_t> counts(model.size(), 0);
    for (std::uint8_t s : symbols) {
        enc.encode(s, model);
        ++counts[s];
    }
    double ideal = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        if (counts[s] != 0) {
            ideal += static_cast<double>(counts[s]) * model.information_bits(s);
        }
    }
    return {std::move(enc).finish(), ideal};
}

inline std::vector<std::uint8_t>
arithmetic_decode(std::span<const std::uint8_t> bytes, std::size_t count,
                  const FrequencyModel &model) {
    RangeDecoder dec(bytes);
    std::vector<std::uint8_t> out(count);
    for (auto &s : out) {
        s = static_cast<std::uint8_t>(dec.decode(model));
    }
    return out;
}

} // namespace qratchet
