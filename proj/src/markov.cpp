#include "ric/markov.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ric {

namespace {

// Largest table (contexts × symbols) we agree to allocate.
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 26;

constexpr double kRowTolerance = 1e-12;

double uniform01(std::mt19937_64& rng)
{
    // 53 random mantissa bits; std::generate_canonical is implementation-defined.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string line_error(const char* what, std::size_t line)
{
    std::ostringstream os;
    os << what << " (line " << line << ")";
    return os.str();
}

} // namespace

Alphabet::Alphabet(std::size_t m) : m_(m)
{
    if (m < 2) {
        throw std::invalid_argument("alphabet needs at least 2 symbols");
    }
}

SymbolSeq::SymbolSeq(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols))
{
    for (std::size_t t = 0; t < symbols_.size(); ++t) {
        if (!alphabet_.contains(symbols_[t])) {
            std::ostringstream os;
            os << "symbol " << symbols_[t] << " at position " << t << " outside alphabet of size "
               << alphabet_.size();
            throw std::out_of_range(os.str());
        }
    }
}

std::size_t context_count(std::size_t m, std::size_t k)
{
    std::size_t count = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (count > kMaxTableEntries / m) {
            throw std::overflow_error("context table m^k too large");
        }
        count *= m;
    }
    if (count > kMaxTableEntries / m) {
        throw std::overflow_error("context table m^k too large");
    }
    return count;
}

std::size_t context_index(std::span<const Symbol> context, std::size_t m)
{
    std::size_t index = 0;
    for (Symbol s : context) {
        if (s >= m) {
            throw std::out_of_range("context symbol outside alphabet");
        }
        index = index * m + s;
    }
    return index;
}

std::vector<Symbol> context_at(std::size_t index, std::size_t m, std::size_t k)
{
    std::vector<Symbol> context(k);
    for (std::size_t i = k; i-- > 0;) {
        context[i] = static_cast<Symbol>(index % m);
        index /= m;
    }
    return context;
}

ContextTracker::ContextTracker(std::size_t m, std::size_t k)
    : m_(m), k_(k), modulus_(context_count(m, k))
{
}

void ContextTracker::push(Symbol s) noexcept
{
    index_ = (index_ * m_ + s) % modulus_;
    if (seen_ < k_) {
        ++seen_;
    }
}

TransitionCounts::TransitionCounts(std::size_t m, std::size_t k)
    : m_(m), k_(k), totals_(context_count(m, k), 0)
{
    table_.assign(totals_.size() * m_, 0);
}

void TransitionCounts::add(std::size_t context, Symbol i)
{
    ++table_[context * m_ + i];
    ++totals_[context];
    ++grand_total_;
}

TransitionCounts count_transitions(const SymbolSeq& seq, std::size_t k)
{
    const std::size_t m = seq.alphabet().size();
    TransitionCounts counts(m, k);
    ContextTracker ctx(m, k);
    for (Symbol s : seq.symbols()) {
        if (ctx.ready()) {
            counts.add(ctx.index(), s);
        }
        ctx.push(s);
    }
    return counts;
}

PredictiveRow predictive_distribution(const TransitionCounts& counts, std::size_t context)
{
    const std::size_t m = counts.alphabet_size();
    PredictiveRow row;
    row.numerators.resize(m);
    auto observed = counts.row(context);
    for (std::size_t i = 0; i < m; ++i) {
        row.numerators[i] = observed[i] + 1;
    }
    row.denominator = counts.total(context) + m;
    return row;
}

PredictiveRow predictive_distribution(const TransitionCounts& counts, std::span<const Symbol> context)
{
    if (context.size() != counts.order()) {
        throw std::invalid_argument("context length differs from the counts' order");
    }
    return predictive_distribution(counts, context_index(context, counts.alphabet_size()));
}

MarkovModel::MarkovModel(Alphabet alphabet, std::size_t k, std::vector<double> rows)
    : alphabet_(alphabet), k_(k), rows_(std::move(rows))
{
    const std::size_t m = alphabet_.size();
    if (rows_.size() != context_count(m, k) * m) {
        throw std::invalid_argument("model needs m^k rows of m probabilities");
    }
    for (std::size_t j = 0; j < rows_.size() / m; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double p = rows_[j * m + i];
            if (!(p >= 0.0) || p > 1.0) {
                throw std::invalid_argument("transition probability outside [0,1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowTolerance * static_cast<double>(m)) {
            std::ostringstream os;
            os << "row " << j << " sums to " << sum << ", not 1";
            throw std::invalid_argument(os.str());
        }
    }
}

MarkovModel mle_from_counts(const TransitionCounts& counts)
{
    const std::size_t m = counts.alphabet_size();
    std::vector<double> rows(counts.contexts() * m);
    for (std::size_t j = 0; j < counts.contexts(); ++j) {
        const auto total = counts.total(j);
        for (std::size_t i = 0; i < m; ++i) {
            rows[j * m + i] = total == 0
                ? 1.0 / static_cast<double>(m)
                : static_cast<double>(counts.count(j, static_cast<Symbol>(i))) / static_cast<double>(total);
        }
    }
    return MarkovModel(Alphabet(m), counts.order(), std::move(rows));
}

MarkovModel mle_estimate(const SymbolSeq& seq, std::size_t k)
{
    return mle_from_counts(count_transitions(seq, k));
}

double neg_log_likelihood(const TransitionCounts& counts, const MarkovModel& model)
{
    if (counts.alphabet_size() != model.alphabet().size() || counts.order() != model.order()) {
        throw std::invalid_argument("counts and model disagree on alphabet or order");
    }
    const std::size_t m = counts.alphabet_size();
    double bits = static_cast<double>(model.order()) * std::log2(static_cast<double>(m));
    for (std::size_t j = 0; j < counts.contexts(); ++j) {
        if (counts.total(j) == 0) {
            continue;
        }
        for (std::size_t i = 0; i < m; ++i) {
            const auto c = counts.count(j, static_cast<Symbol>(i));
            if (c == 0) {
                continue;
            }
            const double p = model.probability(j, static_cast<Symbol>(i));
            if (p <= 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            bits -= static_cast<double>(c) * std::log2(p);
        }
    }
    return bits;
}

double neg_log_likelihood(const SymbolSeq& seq, const MarkovModel& model)
{
    if (seq.alphabet() != model.alphabet()) {
        throw std::invalid_argument("sequence and model use different alphabets");
    }
    if (seq.size() < model.order()) {
        throw std::invalid_argument("sequence shorter than the model order");
    }
    return neg_log_likelihood(count_transitions(seq, model.order()), model);
}

SymbolSeq simulate(const MarkovModel& model, std::size_t n, std::uint64_t seed)
{
    const std::size_t m = model.alphabet().size();
    std::mt19937_64 rng(seed);
    std::vector<Symbol> out;
    out.reserve(n);
    ContextTracker ctx(m, model.order());
    for (std::size_t t = 0; t < n; ++t) {
        Symbol s = 0;
        const double u = uniform01(rng);
        if (!ctx.ready()) {
            s = static_cast<Symbol>(std::min<std::size_t>(static_cast<std::size_t>(u * static_cast<double>(m)), m - 1));
        } else {
            auto row = model.row(ctx.index());
            double cumulative = 0.0;
            s = static_cast<Symbol>(m - 1);
            for (std::size_t i = 0; i < m; ++i) {
                cumulative += row[i];
                if (u < cumulative) {
                    s = static_cast<Symbol>(i);
                    break;
                }
            }
            // Rounding can leave u above the last cumulative sum; never land on a zero-probability symbol.
            while (row[s] == 0.0 && s > 0) {
                --s;
            }
        }
        out.push_back(s);
        ctx.push(s);
    }
    return SymbolSeq(model.alphabet(), std::move(out));
}

std::vector<double> stationary_distribution(const MarkovModel& model)
{
    constexpr double kResidual = 1e-12;
    constexpr std::size_t kMaxIterations = 1'000'000;

    const std::size_t m = model.alphabet().size();
    const std::size_t states = model.contexts();
    const std::size_t modulus = states;
    std::vector<double> pi(states, 1.0 / static_cast<double>(states));
    std::vector<double> next(states);
    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t j = 0; j < states; ++j) {
            if (pi[j] == 0.0) {
                continue;
            }
            for (std::size_t i = 0; i < m; ++i) {
                next[(j * m + i) % modulus] += pi[j] * model.probability(j, static_cast<Symbol>(i));
            }
        }
        double residual = 0.0;
        for (std::size_t j = 0; j < states; ++j) {
            residual += std::abs(next[j] - pi[j]);
        }
        pi.swap(next);
        if (residual < kResidual) {
            return pi;
        }
    }
    throw std::runtime_error("stationary distribution: power iteration did not converge");
}

double entropy(std::span<const double> p)
{
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            h -= v * std::log2(v);
        }
    }
    return h;
}

double entropy_rate(const MarkovModel& model)
{
    const auto pi = stationary_distribution(model);
    double h = 0.0;
    for (std::size_t j = 0; j < pi.size(); ++j) {
        h += pi[j] * entropy(model.row(j));
    }
    return h;
}

double cross_entropy(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size()) {
        throw std::invalid_argument("cross_entropy: dimension mismatch");
    }
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) {
            continue;
        }
        if (q[i] == 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        h -= p[i] * std::log2(q[i]);
    }
    return h;
}

SequenceFile read_sequence(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header)) {
        throw std::runtime_error("sequence file: missing 'm k' header");
    }
    std::istringstream hs(header);
    long long m = 0;
    long long k = 0;
    if (!(hs >> m >> k) || m < 2 || k < 0) {
        throw std::runtime_error(line_error("sequence file: header must be 'm k' with m >= 2, k >= 0", 1));
    }
    std::vector<Symbol> symbols;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || token.front() == '-') {
            throw std::runtime_error("sequence file: not a symbol index: '" + token + "'");
        }
        if (value >= static_cast<unsigned long long>(m)) {
            std::ostringstream os;
            os << "sequence file: symbol " << value << " at position " << symbols.size()
               << " outside alphabet of size " << m;
            throw std::runtime_error(os.str());
        }
        symbols.push_back(static_cast<Symbol>(value));
    }
    return {SymbolSeq(Alphabet(static_cast<std::size_t>(m)), std::move(symbols)), static_cast<std::size_t>(k)};
}

void write_sequence(std::ostream& out, const SymbolSeq& seq, std::size_t order)
{
    out << seq.alphabet().size() << ' ' << order << '\n';
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (t > 0) {
            out << ' ';
        }
        out << seq[t];
    }
    out << '\n';
}

MarkovModel read_model(std::istream& in)
{
    long long m = 0;
    long long k = 0;
    if (!(in >> m >> k) || m < 2 || k < 0) {
        throw std::runtime_error("model file: header must be 'm k' with m >= 2, k >= 0");
    }
    const std::size_t rows = context_count(static_cast<std::size_t>(m), static_cast<std::size_t>(k));
    std::vector<double> probs(rows * static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(in >> probs[i])) {
            std::ostringstream os;
            os << "model file: expected " << probs.size() << " probabilities, got " << i;
            throw std::runtime_error(os.str());
        }
    }
    return MarkovModel(Alphabet(static_cast<std::size_t>(m)), static_cast<std::size_t>(k), std::move(probs));
}

void write_model(std::ostream& out, const MarkovModel& model)
{
    const std::size_t m = model.alphabet().size();
    out << m << ' ' << model.order() << '\n';
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t j = 0; j < model.contexts(); ++j) {
        auto row = model.row(j);
        for (std::size_t i = 0; i < m; ++i) {
            out << (i ? " " : "") << row[i];
        }
        out << '\n';
    }
    out.precision(old_precision);
}

} // namespace ric
