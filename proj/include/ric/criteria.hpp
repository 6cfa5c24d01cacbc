#pragma once

#include "ric/markov.hpp"

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace ric {

/// Maximized likelihood criterion MV(x^n, k) = −log₂ P(x^n | θ̂_k).
double mv(const SymbolSeq& seq, std::size_t k);

/// Free parameters of an order-k model: (m−1)·m^k.
double free_parameters(std::size_t m, std::size_t k);

/// (m−1)·m^k / 2 · log₂ n.
double penalty(std::size_t m, std::size_t k, std::size_t n);

/// RIC(x^n, k) = MV(x^n, k) + penalty(m, k, n).
double ric_score(const SymbolSeq& seq, std::size_t k);

enum class Criterion { Ric, Mv, AdaptiveLength };

std::string_view to_string(Criterion c);

/// Argmin over k in [0, k_max] of the chosen criterion, ties toward smaller k.
/// AdaptiveLength uses the floating-point code length.
std::size_t select_order(const SymbolSeq& seq, std::size_t k_max, Criterion criterion);

/// Criterion values per order, all in bits per symbol.
struct CurveRow {
    std::size_t k = 0;
    double adaptive_bps = 0.0;
    double simple_bps = 0.0;
    double mv_bps = 0.0;
    double ric_bps = 0.0;
};

struct CriterionCurve {
    std::size_t n = 0;
    std::vector<CurveRow> rows;

    std::size_t argmin(double CurveRow::*column) const;
};

/// With exact set, the adaptive and simple columns come from the exact
/// coders' payload lengths; otherwise from the floating-point adaptive length
/// and ⌈MV⌉.
CriterionCurve criterion_curve(const SymbolSeq& seq, std::size_t k_max, bool exact = false);

/// CSV with header k,adaptive_bps,simple_bps,mv_bps,ric_bps, six decimals.
void write_curve_csv(std::ostream& out, const CriterionCurve& curve);

} // namespace ric
