#include "ric/criteria.hpp"

#include "ric/arithcode.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ric {

double mv(const SymbolSeq& seq, std::size_t k)
{
    if (seq.size() < k) {
        throw std::invalid_argument("MV needs n >= k");
    }
    const auto counts = count_transitions(seq, k);
    return neg_log_likelihood(counts, mle_from_counts(counts));
}

double free_parameters(std::size_t m, std::size_t k)
{
    return static_cast<double>(m - 1) * std::pow(static_cast<double>(m), static_cast<double>(k));
}

double penalty(std::size_t m, std::size_t k, std::size_t n)
{
    if (n < 1) {
        throw std::invalid_argument("penalty needs n >= 1");
    }
    return free_parameters(m, k) / 2.0 * std::log2(static_cast<double>(n));
}

double ric_score(const SymbolSeq& seq, std::size_t k)
{
    if (seq.size() < std::max<std::size_t>(k, 1)) {
        throw std::invalid_argument("RIC needs n >= max(k, 1)");
    }
    return mv(seq, k) + penalty(seq.alphabet().size(), k, seq.size());
}

std::string_view to_string(Criterion c)
{
    switch (c) {
    case Criterion::Ric:
        return "ric";
    case Criterion::Mv:
        return "mv";
    case Criterion::AdaptiveLength:
        return "adaptive";
    }
    return "?";
}

std::size_t select_order(const SymbolSeq& seq, std::size_t k_max, Criterion criterion)
{
    if (seq.size() <= k_max) {
        throw std::invalid_argument("order selection needs n > k_max");
    }
    std::size_t best_k = 0;
    double best = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        double value = 0.0;
        switch (criterion) {
        case Criterion::Ric:
            value = ric_score(seq, k);
            break;
        case Criterion::Mv:
            value = mv(seq, k);
            break;
        case Criterion::AdaptiveLength:
            value = adaptive_code_length_fast(seq, k);
            break;
        }
        if (k == 0 || value < best) {
            best = value;
            best_k = k;
        }
    }
    return best_k;
}

std::size_t CriterionCurve::argmin(double CurveRow::*column) const
{
    if (rows.empty()) {
        throw std::logic_error("argmin of an empty curve");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].*column < rows[best].*column) {
            best = i;
        }
    }
    return rows[best].k;
}

CriterionCurve criterion_curve(const SymbolSeq& seq, std::size_t k_max, bool exact)
{
    if (seq.size() <= k_max) {
        throw std::invalid_argument("criterion curve needs n > k_max");
    }
    const auto n = static_cast<double>(seq.size());
    const std::size_t m = seq.alphabet().size();
    CriterionCurve curve;
    curve.n = seq.size();
    curve.rows.reserve(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        CurveRow row;
        row.k = k;
        const double mv_bits = mv(seq, k);
        if (exact) {
            row.adaptive_bps = static_cast<double>(encode_adaptive(seq, k, false).message.payload.size()) / n;
            row.simple_bps = static_cast<double>(encode_simple(seq, k).message.payload.size()) / n;
        } else {
            row.adaptive_bps = adaptive_code_length_fast(seq, k) / n;
            row.simple_bps = std::ceil(mv_bits) / n;
        }
        row.mv_bps = mv_bits / n;
        row.ric_bps = (mv_bits + penalty(m, k, seq.size())) / n;
        curve.rows.push_back(row);
    }
    return curve;
}

void write_curve_csv(std::ostream& out, const CriterionCurve& curve)
{
    out << "k,adaptive_bps,simple_bps,mv_bps,ric_bps\n";
    char line[160];
    for (const auto& row : curve.rows) {
        std::snprintf(line, sizeof line, "%zu,%.6f,%.6f,%.6f,%.6f\n", row.k, row.adaptive_bps, row.simple_bps,
                      row.mv_bps, row.ric_bps);
        out << line;
    }
}

} // namespace ric
