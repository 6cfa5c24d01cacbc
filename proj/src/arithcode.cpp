#include "ric/arithcode.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ric {

namespace {

std::size_t bit_length(const Integer& x)
{
    return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

Integer ceil_div(const Integer& num, const Integer& den)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

BitCode to_bits(const Integer& value, std::size_t length)
{
    std::vector<bool> bits(length);
    for (std::size_t i = 0; i < length; ++i) {
        bits[i] = mpz_tstbit(value.get_mpz_t(), length - 1 - i) != 0;
    }
    return BitCode(std::move(bits));
}

// Sub-interval widths numerators[i]/total for each symbol, in symbol order.
struct Split {
    std::span<const std::uint64_t> numerators;
    std::uint64_t total;

    std::uint64_t cumulative(Symbol s) const
    {
        return std::accumulate(numerators.begin(), numerators.begin() + s, std::uint64_t{0});
    }
};

// The interval [low/denom, (low+width)/denom) kept unreduced, so each
// refinement costs a few multiplications by machine words and no gcd.
class ScaledInterval {
public:
    void refine(const Split& split, Symbol s)
    {
        const Integer total(static_cast<unsigned long>(split.total));
        low_ = low_ * total + width_ * static_cast<unsigned long>(split.cumulative(s));
        width_ *= static_cast<unsigned long>(split.numerators[s]);
        denom_ *= total;
    }

    /// Symbol whose sub-interval contains value / 2^bits.
    Symbol locate(const Split& split, const Integer& value, std::size_t bits) const
    {
        const Integer offset = value * denom_ - (low_ << bits);
        if (offset < 0) {
            throw std::runtime_error("code value lies below the coding interval");
        }
        const Integer scaled = offset * static_cast<unsigned long>(split.total) / (width_ << bits);
        if (scaled >= static_cast<unsigned long>(split.total)) {
            throw std::runtime_error("code value lies above the coding interval");
        }
        const std::uint64_t target = scaled.get_ui();
        std::uint64_t cumulative = 0;
        for (std::size_t i = 0; i < split.numerators.size(); ++i) {
            cumulative += split.numerators[i];
            if (target < cumulative) {
                return static_cast<Symbol>(i);
            }
        }
        throw std::logic_error("split numerators do not sum to the total");
    }

    ExactInterval exact() const
    {
        Rational lo(low_, denom_);
        Rational hi(low_ + width_, denom_);
        lo.canonicalize();
        hi.canonicalize();
        return ExactInterval(std::move(lo), std::move(hi));
    }

    BitCode dyadic() const;

    const Integer& low() const noexcept { return low_; }
    const Integer& width() const noexcept { return width_; }
    const Integer& denom() const noexcept { return denom_; }

    ScaledInterval() = default;
    ScaledInterval(Integer low, Integer width, Integer denom)
        : low_(std::move(low)), width_(std::move(width)), denom_(std::move(denom))
    {
    }

private:
    Integer low_ = 0;
    Integer width_ = 1;
    Integer denom_ = 1;
};

BitCode ScaledInterval::dyadic() const
{
    if (width_ <= 0) {
        throw std::invalid_argument("dyadic_code: empty interval");
    }
    // Smallest L with width·2^L ≥ 1, i.e. L = ⌈−log₂ width⌉.
    const std::size_t wb = bit_length(width_);
    const std::size_t db = bit_length(denom_);
    std::size_t length = db > wb ? db - wb : 0;
    while ((width_ << length) < denom_) {
        ++length;
    }
    while (length > 0 && (width_ << (length - 1)) >= denom_) {
        --length;
    }
    const Integer high = low_ + width_;
    for (;; ++length) {
        const Integer c = ceil_div(low_ << length, denom_);
        const Integer high_scaled = high << length;
        if ((c + 1) * denom_ < high_scaled) {
            return to_bits(c + 1, length);
        }
        if (c * denom_ < high_scaled) {
            return to_bits(c, length);
        }
    }
}

// Uniform 1/m split used while fewer than k symbols are known.
struct UniformSplit {
    explicit UniformSplit(std::size_t m) : ones(m, 1), split{ones, m} {}
    std::vector<std::uint64_t> ones;
    Split split;
};

void check_header(const CodedMessage& msg)
{
    if (msg.alphabet_size < 2) {
        throw std::invalid_argument("coded message: alphabet size must be at least 2");
    }
}

Integer payload_numerator(const BitCode& code)
{
    Integer v = 0;
    for (bool b : code.bits()) {
        v <<= 1;
        if (b) {
            v += 1;
        }
    }
    return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what)
{
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw std::overflow_error(std::string(what) + " does not fit in 32 bits");
    }
    return static_cast<std::uint32_t>(v);
}

} // namespace

ExactInterval::ExactInterval() : low(0), high(1) {}

ExactInterval::ExactInterval(Rational lo, Rational hi) : low(std::move(lo)), high(std::move(hi))
{
    if (!(0 <= low && low < high && high <= 1)) {
        throw std::invalid_argument("interval must satisfy 0 <= a < b <= 1");
    }
}

BitCode BitCode::from_string(std::string_view bits)
{
    std::vector<bool> out;
    out.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may contain only '0' and '1'");
        }
        out.push_back(c == '1');
    }
    return BitCode(std::move(out));
}

Rational BitCode::value() const
{
    Integer den = 1;
    den <<= bits_.size();
    Rational v(payload_numerator(*this), den);
    v.canonicalize();
    return v;
}

std::string BitCode::to_string() const
{
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

BitCode dyadic_code(const ExactInterval& interval)
{
    // Bring both endpoints over a common denominator.
    const Integer denom = interval.low.get_den() * interval.high.get_den();
    const Integer low = interval.low.get_num() * interval.high.get_den();
    const Integer high = interval.high.get_num() * interval.low.get_den();
    return ScaledInterval(low, high - low, denom).dyadic();
}

AdaptiveEncoding encode_adaptive(const SymbolSeq& seq, std::size_t k, bool record_trace)
{
    const std::size_t m = seq.alphabet().size();
    AdaptiveEncoding out;
    out.message.alphabet_size = checked_u32(m, "alphabet size");
    out.message.order = checked_u32(k, "order");
    out.message.length = checked_u32(seq.size(), "sequence length");

    TransitionCounts counts(m, k);
    ContextTracker ctx(m, k);
    const UniformSplit uniform(m);
    ScaledInterval interval;
    if (record_trace) {
        out.trace.reserve(seq.size() + 1);
        out.trace.push_back(interval.exact());
    }
    for (Symbol s : seq.symbols()) {
        if (!ctx.ready()) {
            interval.refine(uniform.split, s);
        } else {
            const auto row = predictive_distribution(counts, ctx.index());
            interval.refine(Split{row.numerators, row.denominator}, s);
            counts.add(ctx.index(), s);
        }
        ctx.push(s);
        if (record_trace) {
            out.trace.push_back(interval.exact());
        }
    }
    out.message.payload = interval.dyadic();
    return out;
}

SymbolSeq decode_adaptive(const CodedMessage& msg)
{
    check_header(msg);
    const std::size_t m = msg.alphabet_size;
    const std::size_t k = msg.order;
    const Integer value = payload_numerator(msg.payload);
    const std::size_t bits = msg.payload.size();

    TransitionCounts counts(m, k);
    ContextTracker ctx(m, k);
    const UniformSplit uniform(m);
    ScaledInterval interval;
    std::vector<Symbol> out;
    out.reserve(msg.length);
    for (std::size_t t = 0; t < msg.length; ++t) {
        Symbol s = 0;
        if (!ctx.ready()) {
            s = interval.locate(uniform.split, value, bits);
            interval.refine(uniform.split, s);
        } else {
            const auto row = predictive_distribution(counts, ctx.index());
            const Split split{row.numerators, row.denominator};
            s = interval.locate(split, value, bits);
            interval.refine(split, s);
            counts.add(ctx.index(), s);
        }
        ctx.push(s);
        out.push_back(s);
    }
    return SymbolSeq(Alphabet(m), std::move(out));
}

SimpleEncoding encode_simple(const SymbolSeq& seq, std::size_t k)
{
    if (seq.size() < k) {
        throw std::invalid_argument("simple coding needs n >= k");
    }
    const std::size_t m = seq.alphabet().size();
    auto counts = count_transitions(seq, k);
    auto model = mle_from_counts(counts);

    ContextTracker ctx(m, k);
    const UniformSplit uniform(m);
    ScaledInterval interval;
    for (Symbol s : seq.symbols()) {
        if (!ctx.ready()) {
            interval.refine(uniform.split, s);
        } else {
            interval.refine(Split{counts.row(ctx.index()), counts.total(ctx.index())}, s);
        }
        ctx.push(s);
    }
    CodedMessage message;
    message.alphabet_size = checked_u32(m, "alphabet size");
    message.order = checked_u32(k, "order");
    message.length = checked_u32(seq.size(), "sequence length");
    message.payload = interval.dyadic();
    return SimpleEncoding{std::move(message), std::move(model), std::move(counts), interval.exact()};
}

SymbolSeq decode_simple(const CodedMessage& msg, const TransitionCounts& counts)
{
    check_header(msg);
    if (counts.alphabet_size() != msg.alphabet_size || counts.order() != msg.order) {
        throw std::invalid_argument("side information does not match the message header");
    }
    const std::size_t m = msg.alphabet_size;
    const Integer value = payload_numerator(msg.payload);
    const std::size_t bits = msg.payload.size();

    ContextTracker ctx(m, msg.order);
    const UniformSplit uniform(m);
    ScaledInterval interval;
    std::vector<Symbol> out;
    out.reserve(msg.length);
    for (std::size_t t = 0; t < msg.length; ++t) {
        Split split = uniform.split;
        if (ctx.ready()) {
            split = Split{counts.row(ctx.index()), counts.total(ctx.index())};
            if (split.total == 0) {
                throw std::runtime_error("side information has no transitions for a visited context");
            }
        }
        const Symbol s = interval.locate(split, value, bits);
        interval.refine(split, s);
        ctx.push(s);
        out.push_back(s);
    }
    return SymbolSeq(Alphabet(m), std::move(out));
}

double adaptive_code_length_fast(const SymbolSeq& seq, std::size_t k)
{
    const std::size_t m = seq.alphabet().size();
    const double uniform_bits = std::log2(static_cast<double>(m));
    TransitionCounts counts(m, k);
    ContextTracker ctx(m, k);
    double bits = 0.0;
    for (Symbol s : seq.symbols()) {
        if (!ctx.ready()) {
            bits += uniform_bits;
        } else {
            const std::size_t j = ctx.index();
            bits -= std::log2(static_cast<double>(counts.count(j, s) + 1)
                              / static_cast<double>(counts.total(j) + m));
            counts.add(j, s);
        }
        ctx.push(s);
    }
    return bits;
}

std::string write_code_file(const CodedMessage& msg)
{
    check_header(msg);
    std::string out = "RIC1";
    auto put_u32 = [&out](std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8) {
            out.push_back(static_cast<char>((v >> shift) & 0xFFu));
        }
    };
    put_u32(msg.alphabet_size);
    put_u32(msg.order);
    put_u32(msg.length);
    put_u32(checked_u32(msg.payload.size(), "payload bit count"));
    unsigned char byte = 0;
    std::size_t filled = 0;
    for (bool b : msg.payload.bits()) {
        byte = static_cast<unsigned char>((byte << 1) | (b ? 1u : 0u));
        if (++filled == 8) {
            out.push_back(static_cast<char>(byte));
            byte = 0;
            filled = 0;
        }
    }
    if (filled > 0) {
        out.push_back(static_cast<char>(byte << (8 - filled)));
    }
    return out;
}

CodedMessage read_code_file(std::string_view bytes)
{
    constexpr std::size_t kHeader = 4 + 4 * 4;
    if (bytes.size() < kHeader || bytes.substr(0, 4) != "RIC1") {
        throw std::runtime_error("code file: missing RIC1 header");
    }
    auto get_u32 = [&bytes](std::size_t pos) {
        std::uint32_t v = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            v = (v << 8) | static_cast<unsigned char>(bytes[pos + i]);
        }
        return v;
    };
    CodedMessage msg;
    msg.alphabet_size = get_u32(4);
    msg.order = get_u32(8);
    msg.length = get_u32(12);
    const std::uint32_t bit_count = get_u32(16);
    check_header(msg);
    const std::size_t payload_bytes = (static_cast<std::size_t>(bit_count) + 7) / 8;
    if (bytes.size() != kHeader + payload_bytes) {
        std::ostringstream os;
        os << "code file: expected " << payload_bytes << " payload bytes for " << bit_count << " bits, found "
           << bytes.size() - kHeader;
        throw std::runtime_error(os.str());
    }
    std::vector<bool> bits(bit_count);
    for (std::size_t i = 0; i < bit_count; ++i) {
        const auto byte = static_cast<unsigned char>(bytes[kHeader + i / 8]);
        bits[i] = ((byte >> (7 - i % 8)) & 1u) != 0;
    }
    msg.payload = BitCode(std::move(bits));
    return msg;
}

} // namespace ric
