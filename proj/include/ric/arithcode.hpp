#pragma once

// Exact arithmetic coding of Markov sequences.
//
// The coding interval is split into m sub-intervals ordered by ascending
// symbol index. The first k symbols of an order-k code always use uniform
// 1/m splits; after that the adaptive coder uses the add-one estimate of the
// prefix seen so far and the simple coder uses the maximum-likelihood model
// of the whole sequence. The final interval is represented by the shortest
// dyadic number it contains at length ⌈−log₂ width⌉.

#include "ric/markov.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ric {

using Rational = mpq_class;
using Integer = mpz_class;

/// Half-open interval [low, high) with exact rational endpoints.
struct ExactInterval {
    Rational low;
    Rational high;

    ExactInterval();
    ExactInterval(Rational lo, Rational hi);

    Rational width() const { return high - low; }
    bool contains(const Rational& v) const { return low <= v && v < high; }
    bool within(const ExactInterval& outer) const { return outer.low <= low && high <= outer.high; }

    friend bool operator==(const ExactInterval&, const ExactInterval&) = default;
};

/// Bit string emitted by the coder.
class BitCode {
public:
    BitCode() = default;
    explicit BitCode(std::vector<bool> bits) : bits_(std::move(bits)) {}
    /// Parses a string of '0'/'1' characters.
    static BitCode from_string(std::string_view bits);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i]; }
    const std::vector<bool>& bits() const noexcept { return bits_; }

    /// The dyadic number 0.b_1 b_2 ... b_L.
    Rational value() const;
    std::string to_string() const;

    friend bool operator==(const BitCode&, const BitCode&) = default;

private:
    std::vector<bool> bits_;
};

/// Payload plus the (m, k, n) header needed to decode it.
struct CodedMessage {
    std::uint32_t alphabet_size = 2;
    std::uint32_t order = 0;
    std::uint32_t length = 0;
    BitCode payload;

    friend bool operator==(const CodedMessage&, const CodedMessage&) = default;
};

struct AdaptiveEncoding {
    CodedMessage message;
    /// I_0 = [0,1), then the interval after each coded symbol (n+1 entries).
    std::vector<ExactInterval> trace;
};

/// Adaptive predictive coding at order k. The trace is filled only when
/// record_trace is set.
AdaptiveEncoding encode_adaptive(const SymbolSeq& seq, std::size_t k, bool record_trace = true);

SymbolSeq decode_adaptive(const CodedMessage& msg);

/// Shortest dyadic code inside [low, high): length ⌈−log₂(high−low)⌉, taking
/// the larger of two consecutive candidates when both fit.
BitCode dyadic_code(const ExactInterval& interval);

struct SimpleEncoding {
    CodedMessage message;
    /// Maximum-likelihood model used for the splits.
    MarkovModel model;
    /// Exact side information from which the splits are rebuilt.
    TransitionCounts counts;
    ExactInterval final_interval;
};

/// Two-pass, non-adaptive coding with the maximum-likelihood model.
/// Requires n ≥ k.
SimpleEncoding encode_simple(const SymbolSeq& seq, std::size_t k);

/// Decodes a simple code given the counts it was built from.
SymbolSeq decode_simple(const CodedMessage& msg, const TransitionCounts& counts);

/// Floating-point length in bits of the adaptive code,
/// Σ −log₂ θ̂(x_{t+1}|j) over t ≥ k plus k·log₂ m.
double adaptive_code_length_fast(const SymbolSeq& seq, std::size_t k);

// RIC1 container: magic "RIC1", then m, k, n and the payload bit count as
// 32-bit big-endian integers, then the payload packed MSB-first and zero
// padded to a byte boundary.
std::string write_code_file(const CodedMessage& msg);
CodedMessage read_code_file(std::string_view bytes);

} // namespace ric
