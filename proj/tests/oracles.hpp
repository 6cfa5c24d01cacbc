#pragma once

// Test-only reference computations. These deliberately avoid the library's
// counting and interval machinery so they can check it independently.

#include "ric/arithcode.hpp"
#include "ric/markov.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace ric::oracle {

inline SymbolSeq make_seq(std::size_t m, std::vector<Symbol> symbols)
{
    return SymbolSeq(Alphabet(m), std::move(symbols));
}

inline SymbolSeq random_seq(std::mt19937_64& rng, std::size_t m, std::size_t n)
{
    std::uniform_int_distribution<Symbol> pick(0, static_cast<Symbol>(m - 1));
    std::vector<Symbol> s(n);
    for (auto& v : s) {
        v = pick(rng);
    }
    return make_seq(m, std::move(s));
}

// Occurrences of symbol s right after the k symbols ending at position t (exclusive).
inline std::vector<std::uint64_t> recount(const std::vector<Symbol>& x, std::size_t k, std::size_t t, std::size_t m)
{
    std::vector<std::uint64_t> cnt(m, 0);
    for (std::size_t u = k; u < t; ++u) {
        bool same = true;
        for (std::size_t d = 1; d <= k; ++d) {
            if (x[u - d] != x[t - d]) {
                same = false;
                break;
            }
        }
        if (same) {
            ++cnt[x[u]];
        }
    }
    return cnt;
}

// Adaptive coding intervals computed by re-counting the prefix at every step
// with plain rationals, O(n²).
inline std::vector<ExactInterval> adaptive_intervals(const SymbolSeq& seq, std::size_t k)
{
    const std::size_t m = seq.alphabet().size();
    const std::vector<Symbol> x(seq.symbols().begin(), seq.symbols().end());
    Rational lo = 0;
    Rational hi = 1;
    std::vector<ExactInterval> out{ExactInterval(lo, hi)};
    for (std::size_t t = 0; t < x.size(); ++t) {
        std::vector<Rational> p(m);
        if (t < k) {
            for (auto& v : p) {
                v = Rational(Integer(1), Integer(static_cast<unsigned long>(m)));
            }
        } else {
            const auto cnt = recount(x, k, t, m);
            std::uint64_t tot = 0;
            for (auto c : cnt) {
                tot += c;
            }
            for (std::size_t i = 0; i < m; ++i) {
                p[i] = Rational(Integer(static_cast<unsigned long>(cnt[i] + 1)), Integer(static_cast<unsigned long>(tot + m)));
                p[i].canonicalize();
            }
        }
        const Rational w = hi - lo;
        Rational below = 0;
        for (Symbol i = 0; i < x[t]; ++i) {
            below += p[i];
        }
        lo = lo + w * below;
        hi = lo + w * p[x[t]];
        out.emplace_back(lo, hi);
    }
    return out;
}

// ⌈−log₂ w⌉ by doubling.
inline std::size_t code_length(const Rational& w)
{
    std::size_t L = 0;
    Rational scaled = w;
    while (scaled < 1) {
        scaled *= 2;
        ++L;
    }
    return L;
}

// Largest length-L dyadic c/2^L inside [a,b), by scanning every numerator.
inline std::optional<std::uint64_t> largest_dyadic(const ExactInterval& iv, std::size_t L)
{
    std::optional<std::uint64_t> best;
    Integer denom = 1;
    denom <<= L;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << L); ++c) {
        Rational v(Integer(static_cast<unsigned long>(c)), denom);
        v.canonicalize();
        if (iv.contains(v)) {
            best = c;
        }
    }
    return best;
}

// −log₂ P(x|θ) evaluated symbol by symbol.
inline double sequential_nll(const SymbolSeq& seq, const MarkovModel& model)
{
    const std::size_t m = seq.alphabet().size();
    const std::size_t k = model.order();
    double bits = 0.0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (t < k) {
            bits += std::log2(static_cast<double>(m));
            continue;
        }
        std::size_t j = 0;
        for (std::size_t d = k; d >= 1; --d) {
            j = j * m + seq[t - d];
        }
        bits -= std::log2(model.probability(j, seq[t]));
    }
    return bits;
}

} // namespace ric::oracle
