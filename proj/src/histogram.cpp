#include "ric/histogram.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ric {

namespace {

// Two criterion values closer than this are treated as a tie.
bool nearly_equal(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Candidate {
    double value;
    std::size_t intervals;
};

// Three-way order on (value within tolerance, interval count). The final
// lexicographic tie-break is left to the callers.
int compare(const Candidate& a, const Candidate& b)
{
    if (!nearly_equal(a.value, b.value)) {
        return a.value < b.value ? -1 : 1;
    }
    if (a.intervals != b.intervals) {
        return a.intervals < b.intervals ? -1 : 1;
    }
    return 0;
}

double entropy_term(std::uint64_t count, std::uint64_t n, double length)
{
    if (count == 0) {
        return 0.0;
    }
    const double c = static_cast<double>(count);
    return -c * std::log2(c / (static_cast<double>(n) * length));
}

double precision_term(const BinnedSample& binned)
{
    return binned.precision ? -static_cast<double>(binned.n) * std::log2(*binned.precision) : 0.0;
}

// O(1) edge costs from prefix sums of the cell counts.
class EdgeCosts {
public:
    explicit EdgeCosts(const BinnedSample& binned)
        : grid_(binned.grid), n_(binned.n), half_log_n_(0.5 * std::log2(static_cast<double>(binned.n)))
    {
        prefix_.reserve(binned.counts.size() + 1);
        prefix_.push_back(0);
        for (auto c : binned.counts) {
            prefix_.push_back(prefix_.back() + c);
        }
    }

    double operator()(std::size_t from, std::size_t to)
    {
        ++evaluations_;
        const double length = grid_.boundary(to) - grid_.boundary(from);
        return entropy_term(prefix_[to] - prefix_[from], n_, length) + half_log_n_;
    }

    double half_log_n() const noexcept { return half_log_n_; }
    std::size_t evaluations() const noexcept { return evaluations_; }

private:
    const CellGrid& grid_;
    std::uint64_t n_;
    double half_log_n_;
    std::vector<std::uint64_t> prefix_;
    std::size_t evaluations_ = 0;
};

void require_nonempty(const BinnedSample& binned)
{
    if (binned.n == 0) {
        throw std::invalid_argument("histogram criterion needs at least one sample");
    }
}

nlohmann::json parse_json(const std::string& text, const char* what)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
}

} // namespace

CellGrid::CellGrid(std::vector<double> boundaries) : boundaries_(std::move(boundaries))
{
    if (boundaries_.size() < 2) {
        throw std::invalid_argument("cell grid needs at least one cell");
    }
    for (std::size_t c = 0; c + 1 < boundaries_.size(); ++c) {
        if (!std::isfinite(boundaries_[c]) || !(boundaries_[c] < boundaries_[c + 1])) {
            throw std::invalid_argument("cell boundaries must be finite and strictly increasing");
        }
    }
    if (!std::isfinite(boundaries_.back())) {
        throw std::invalid_argument("cell boundaries must be finite and strictly increasing");
    }
}

CellGrid CellGrid::regular(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(lo < hi)) {
        throw std::invalid_argument("regular grid needs lo < hi and step > 0");
    }
    const double span = (hi - lo) / step;
    const auto cells = static_cast<std::size_t>(std::llround(span));
    if (cells < 1 || std::abs(span - static_cast<double>(cells)) > 1e-6 * span) {
        throw std::invalid_argument("regular grid: (hi - lo) must be a whole number of steps");
    }
    std::vector<double> boundaries(cells + 1);
    for (std::size_t c = 0; c < cells; ++c) {
        boundaries[c] = lo + static_cast<double>(c) * step;
    }
    boundaries[cells] = hi;
    return CellGrid(std::move(boundaries));
}

std::optional<std::size_t> CellGrid::cell_of(double x) const
{
    if (!(x >= lo() && x <= hi())) {
        return std::nullopt;
    }
    if (x == hi()) {
        return cells() - 1;
    }
    const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), x);
    return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

BinnedSample::BinnedSample(CellGrid g, std::vector<std::uint64_t> c, std::optional<double> r)
    : grid(std::move(g)), counts(std::move(c)), precision(r)
{
    if (counts.size() != grid.cells()) {
        throw std::invalid_argument("binned sample needs one count per grid cell");
    }
    if (precision && !(*precision > 0.0)) {
        throw std::invalid_argument("precision r must be positive");
    }
    for (auto v : counts) {
        n += v;
    }
}

SubPartition::SubPartition(std::vector<std::size_t> cuts, std::size_t cells) : cuts_(std::move(cuts))
{
    if (cuts_.size() < 2 || cuts_.front() != 0 || cuts_.back() != cells) {
        throw std::invalid_argument("sub-partition must contain both grid endpoints");
    }
    for (std::size_t i = 0; i + 1 < cuts_.size(); ++i) {
        if (cuts_[i] >= cuts_[i + 1]) {
            throw std::invalid_argument("sub-partition cuts must be strictly increasing");
        }
    }
}

SubPartition SubPartition::finest(std::size_t cells)
{
    std::vector<std::size_t> cuts(cells + 1);
    for (std::size_t c = 0; c <= cells; ++c) {
        cuts[c] = c;
    }
    return SubPartition(std::move(cuts), cells);
}

std::vector<std::uint64_t> SubPartition::merged_counts(const BinnedSample& binned) const
{
    if (binned.counts.size() != cells()) {
        throw std::invalid_argument("sub-partition defined over a different grid");
    }
    std::vector<std::uint64_t> merged(intervals(), 0);
    for (std::size_t j = 0; j < intervals(); ++j) {
        for (std::size_t c = cuts_[j]; c < cuts_[j + 1]; ++c) {
            merged[j] += binned.counts[c];
        }
    }
    return merged;
}

std::vector<double> SubPartition::lengths(const CellGrid& grid) const
{
    if (grid.cells() != cells()) {
        throw std::invalid_argument("sub-partition defined over a different grid");
    }
    std::vector<double> out(intervals());
    for (std::size_t j = 0; j < intervals(); ++j) {
        out[j] = grid.boundary(cuts_[j + 1]) - grid.boundary(cuts_[j]);
    }
    return out;
}

std::vector<std::size_t> SubPartition::cell_to_interval() const
{
    std::vector<std::size_t> out(cells());
    for (std::size_t j = 0; j < intervals(); ++j) {
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(cuts_[j]),
                  out.begin() + static_cast<std::ptrdiff_t>(cuts_[j + 1]), j);
    }
    return out;
}

BinnedSample bin_sample(std::span<const double> data, const CellGrid& grid, std::optional<double> precision)
{
    std::vector<std::uint64_t> counts(grid.cells(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto cell = grid.cell_of(data[i]);
        if (!cell) {
            std::ostringstream os;
            os << "sample " << i << " (" << data[i] << ") outside [" << grid.lo() << ", " << grid.hi() << "]";
            throw std::out_of_range(os.str());
        }
        ++counts[*cell];
    }
    return BinnedSample(grid, std::move(counts), precision);
}

double crit(const BinnedSample& binned, const SubPartition& part)
{
    require_nonempty(binned);
    const auto counts = part.merged_counts(binned);
    const auto lengths = part.lengths(binned.grid);
    double bits = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        bits += entropy_term(counts[j], binned.n, lengths[j]);
    }
    bits += static_cast<double>(part.intervals() - 1) / 2.0 * std::log2(static_cast<double>(binned.n));
    return bits + precision_term(binned);
}

double merged_interval_cost(const BinnedSample& binned, std::size_t from, std::size_t to)
{
    require_nonempty(binned);
    if (!(from < to && to <= binned.grid.cells())) {
        throw std::out_of_range("merged interval must satisfy from < to <= R");
    }
    return EdgeCosts(binned)(from, to);
}

HistogramSelection dp_select(const BinnedSample& binned)
{
    require_nonempty(binned);
    const std::size_t cells = binned.grid.cells();
    EdgeCosts cost(binned);

    // Best path from cut c to R: value, interval count, next cut.
    std::vector<Candidate> best(cells + 1, Candidate{0.0, 0});
    std::vector<std::size_t> next(cells + 1, cells);
    for (std::size_t c = cells; c-- > 0;) {
        bool have = false;
        for (std::size_t to = c + 1; to <= cells; ++to) {
            const Candidate cand{cost(c, to) + best[to].value, best[to].intervals + 1};
            // Ascending `to` means a later candidate never wins a full tie.
            if (!have || compare(cand, best[c]) < 0) {
                best[c] = cand;
                next[c] = to;
                have = true;
            }
        }
    }

    std::vector<std::size_t> cuts{0};
    for (std::size_t c = 0; c != cells;) {
        c = next[c];
        cuts.push_back(c);
    }
    SubPartition part(std::move(cuts), cells);
    const double value = crit(binned, part);
    return HistogramSelection{std::move(part), value, cost.evaluations()};
}

HistogramSelection brute_force_select(const BinnedSample& binned)
{
    require_nonempty(binned);
    const std::size_t cells = binned.grid.cells();
    if (cells > kBruteForceMaxCells) {
        std::ostringstream os;
        os << "brute force enumeration limited to " << kBruteForceMaxCells << " cells, got " << cells;
        throw std::invalid_argument(os.str());
    }
    const std::size_t interior = cells - 1;
    std::optional<HistogramSelection> best;
    std::size_t scored = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << interior); ++mask) {
        std::vector<std::size_t> cuts{0};
        for (std::size_t c = 1; c < cells; ++c) {
            if ((mask >> (c - 1)) & 1u) {
                cuts.push_back(c);
            }
        }
        cuts.push_back(cells);
        SubPartition part(std::move(cuts), cells);
        const double value = crit(binned, part);
        ++scored;
        if (best) {
            const int order = compare(Candidate{value, part.intervals()},
                                      Candidate{best->crit_bits, best->partition.intervals()});
            const bool wins = order < 0
                || (order == 0
                    && std::lexicographical_compare(part.cuts().begin(), part.cuts().end(),
                                                    best->partition.cuts().begin(), best->partition.cuts().end()));
            if (!wins) {
                continue;
            }
        }
        best.emplace(HistogramSelection{std::move(part), value, 0});
    }
    best->evaluations = scored;
    return std::move(*best);
}

std::vector<double> sample_laplace(std::size_t n, std::uint64_t seed, double lo, double hi)
{
    if (!(lo < 0.0 && 0.0 < hi)) {
        throw std::invalid_argument("Laplace sampling interval must satisfy lo < 0 < hi");
    }
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        // Uniform on the open interval (0, 1).
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        const double x = u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
        if (x >= lo && x <= hi) {
            out.push_back(x);
        }
    }
    return out;
}

std::string partition_json(const BinnedSample& binned, const HistogramSelection& selection)
{
    nlohmann::json j;
    std::vector<double> boundaries;
    for (auto c : selection.partition.cuts()) {
        boundaries.push_back(binned.grid.boundary(c));
    }
    j["boundaries"] = boundaries;
    j["counts"] = selection.partition.merged_counts(binned);
    j["crit_bits"] = selection.crit_bits;
    j["m"] = selection.partition.intervals();
    return j.dump(2);
}

std::string binned_json(const BinnedSample& binned)
{
    nlohmann::json j;
    j["boundaries"] = std::vector<double>(binned.grid.boundaries().begin(), binned.grid.boundaries().end());
    j["counts"] = binned.counts;
    j["n"] = binned.n;
    if (binned.precision) {
        j["precision"] = *binned.precision;
    }
    return j.dump(2);
}

BinnedSample binned_from_json(const std::string& text)
{
    const auto j = parse_json(text, "binned sample JSON");
    try {
        std::optional<double> precision;
        if (j.contains("precision")) {
            precision = j.at("precision").get<double>();
        }
        BinnedSample binned(CellGrid(j.at("boundaries").get<std::vector<double>>()),
                            j.at("counts").get<std::vector<std::uint64_t>>(), precision);
        if (j.contains("n") && j.at("n").get<std::uint64_t>() != binned.n) {
            throw std::runtime_error("binned sample JSON: n does not match the sum of counts");
        }
        return binned;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("binned sample JSON: ") + e.what());
    }
}

SubPartition partition_from_json(const std::string& text, const CellGrid& grid)
{
    const auto j = parse_json(text, "partition JSON");
    std::vector<double> boundaries;
    try {
        boundaries = j.at("boundaries").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("partition JSON: ") + e.what());
    }
    const double scale = std::max(1.0, std::abs(grid.hi() - grid.lo()));
    std::vector<std::size_t> cuts;
    for (double b : boundaries) {
        const auto gb = grid.boundaries();
        const auto it = std::lower_bound(gb.begin(), gb.end(), b - 1e-9 * scale);
        if (it == gb.end() || std::abs(*it - b) > 1e-9 * scale) {
            std::ostringstream os;
            os << "partition JSON: boundary " << b << " is not a grid boundary";
            throw std::runtime_error(os.str());
        }
        cuts.push_back(static_cast<std::size_t>(it - gb.begin()));
    }
    return SubPartition(std::move(cuts), grid.cells());
}

} // namespace ric
