#pragma once

// Multiple Markov chains over a finite alphabet: counting, estimation,
// likelihood, simulation and entropy.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ric {

using Symbol = std::uint32_t;

/// Finite alphabet of m symbols, identified with the indices 0..m-1.
class Alphabet {
public:
    explicit Alphabet(std::size_t m);

    std::size_t size() const noexcept { return m_; }
    bool contains(Symbol s) const noexcept { return s < m_; }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::size_t m_;
};

/// A finite sequence x_1..x_n of alphabet symbols.
class SymbolSeq {
public:
    explicit SymbolSeq(Alphabet alphabet, std::vector<Symbol> symbols = {});

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }

    friend bool operator==(const SymbolSeq&, const SymbolSeq&) = default;

private:
    Alphabet alphabet_;
    std::vector<Symbol> symbols_;
};

/// Number of composed states m^k. Throws std::overflow_error when the count
/// does not fit comfortably in memory-addressable tables.
std::size_t context_count(std::size_t m, std::size_t k);

/// Lexicographic index of a context (oldest symbol most significant).
std::size_t context_index(std::span<const Symbol> context, std::size_t m);

/// Inverse of context_index.
std::vector<Symbol> context_at(std::size_t index, std::size_t m, std::size_t k);

/// Tracks the index of the last k symbols as a sequence is scanned.
class ContextTracker {
public:
    ContextTracker(std::size_t m, std::size_t k);

    /// True once k symbols have been seen.
    bool ready() const noexcept { return seen_ >= k_; }
    std::size_t index() const noexcept { return index_; }
    void push(Symbol s) noexcept;

private:
    std::size_t m_;
    std::size_t k_;
    std::size_t modulus_;
    std::size_t index_ = 0;
    std::size_t seen_ = 0;
};

/// Occurrence counts n(i|j) of symbol i right after context j.
class TransitionCounts {
public:
    TransitionCounts(std::size_t m, std::size_t k);

    std::size_t alphabet_size() const noexcept { return m_; }
    std::size_t order() const noexcept { return k_; }
    std::size_t contexts() const noexcept { return totals_.size(); }

    std::uint64_t count(std::size_t context, Symbol i) const { return table_[context * m_ + i]; }
    std::uint64_t total(std::size_t context) const { return totals_[context]; }
    std::span<const std::uint64_t> row(std::size_t context) const
    {
        return std::span<const std::uint64_t>(table_).subspan(context * m_, m_);
    }
    /// Σ over all (i, j) of n(i|j).
    std::uint64_t grand_total() const noexcept { return grand_total_; }

    void add(std::size_t context, Symbol i);

private:
    std::size_t m_;
    std::size_t k_;
    std::vector<std::uint64_t> table_;
    std::vector<std::uint64_t> totals_;
    std::uint64_t grand_total_ = 0;
};

TransitionCounts count_transitions(const SymbolSeq& seq, std::size_t k);

/// Add-one (Laplace) predictive law ((n(i|j)+1) / (n(j)+m))_i, kept as
/// integer numerators over a shared denominator so it is exact.
struct PredictiveRow {
    std::vector<std::uint64_t> numerators;
    std::uint64_t denominator = 0;

    double probability(Symbol i) const
    {
        return static_cast<double>(numerators[i]) / static_cast<double>(denominator);
    }
};

PredictiveRow predictive_distribution(const TransitionCounts& counts, std::span<const Symbol> context);
PredictiveRow predictive_distribution(const TransitionCounts& counts, std::size_t context);

/// Order-k homogeneous transition law θ(i|j). Rows are indexed
/// lexicographically by context.
class MarkovModel {
public:
    /// rows holds m^k consecutive probability vectors of length m.
    MarkovModel(Alphabet alphabet, std::size_t k, std::vector<double> rows);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t order() const noexcept { return k_; }
    std::size_t contexts() const noexcept { return rows_.size() / alphabet_.size(); }

    double probability(std::size_t context, Symbol i) const { return rows_[context * alphabet_.size() + i]; }
    std::span<const double> row(std::size_t context) const
    {
        return std::span<const double>(rows_).subspan(context * alphabet_.size(), alphabet_.size());
    }

private:
    Alphabet alphabet_;
    std::size_t k_;
    std::vector<double> rows_;
};

/// Maximum-likelihood estimate n(i|j)/n(j); unseen contexts get uniform rows.
MarkovModel mle_estimate(const SymbolSeq& seq, std::size_t k);
MarkovModel mle_from_counts(const TransitionCounts& counts);

/// −log₂ P(x^n | θ), including the k·log₂ m term for the uniform prefix.
/// Returns +inf when the sequence uses a transition of probability zero.
double neg_log_likelihood(const SymbolSeq& seq, const MarkovModel& model);

/// −Σ n(i|j) log₂ θ(i|j) + k log₂ m, for counts already gathered.
double neg_log_likelihood(const TransitionCounts& counts, const MarkovModel& model);

/// Draws x_1..x_n: the first k symbols uniform, the rest from θ(·|context).
SymbolSeq simulate(const MarkovModel& model, std::size_t n, std::uint64_t seed);

/// Entropy rate Σ_j π(j) H(θ(·|j)) in bits/symbol, with π the stationary law
/// of the composed-state chain. Throws std::runtime_error if power iteration
/// does not converge.
double entropy_rate(const MarkovModel& model);

/// Stationary distribution of the composed-state chain over E^k.
std::vector<double> stationary_distribution(const MarkovModel& model);

/// Σ −p_i log₂ q_i with 0·log 0 = 0; +inf if p_i > 0 = q_i.
double cross_entropy(std::span<const double> p, std::span<const double> q);
double entropy(std::span<const double> p);

// Text formats.
//   sequence: "m k" on the first line, symbols on the second.
//   model:    "m k", then m^k rows of m probabilities.
struct SequenceFile {
    SymbolSeq seq;
    std::size_t order;
};

SequenceFile read_sequence(std::istream& in);
void write_sequence(std::ostream& out, const SymbolSeq& seq, std::size_t order);
MarkovModel read_model(std::istream& in);
void write_model(std::ostream& out, const MarkovModel& model);

} // namespace ric
