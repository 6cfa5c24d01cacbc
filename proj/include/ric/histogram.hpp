#pragma once

// MDL histogram selection over coarsenings of a fixed cell grid.
//
// A sample binned on the grid t_0 < ... < t_R is described by a
// sub-partition (a subset of the grid's cut points). The description length
//
//   Crit = −Σ_j n_j log₂(n_j / (n l_j)) + (m−1)/2 · log₂ n  [− n log₂ r]
//
// is minimized exactly by a shortest path over cut indices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ric {

/// Strictly increasing cell boundaries t_0 < t_1 < ... < t_R.
class CellGrid {
public:
    explicit CellGrid(std::vector<double> boundaries);

    /// Regular grid of the given step from lo to hi; the last boundary is hi.
    static CellGrid regular(double lo, double hi, double step);

    std::size_t cells() const noexcept { return boundaries_.size() - 1; }
    double lo() const noexcept { return boundaries_.front(); }
    double hi() const noexcept { return boundaries_.back(); }
    double boundary(std::size_t c) const { return boundaries_[c]; }
    std::span<const double> boundaries() const noexcept { return boundaries_; }

    /// Cell containing x: [t_c, t_{c+1}), the last cell closed on the right.
    std::optional<std::size_t> cell_of(double x) const;

private:
    std::vector<double> boundaries_;
};

struct BinnedSample {
    CellGrid grid;
    std::vector<std::uint64_t> counts;
    std::uint64_t n = 0;
    /// Machine precision r; when set, Crit includes the constant −n log₂ r.
    std::optional<double> precision;

    BinnedSample(CellGrid grid, std::vector<std::uint64_t> counts, std::optional<double> precision = std::nullopt);
};

/// Sorted cut indices into the grid, always containing 0 and R.
class SubPartition {
public:
    explicit SubPartition(std::vector<std::size_t> cuts, std::size_t cells);

    static SubPartition whole(std::size_t cells) { return SubPartition({0, cells}, cells); }
    static SubPartition finest(std::size_t cells);

    std::size_t intervals() const noexcept { return cuts_.size() - 1; }
    std::span<const std::size_t> cuts() const noexcept { return cuts_; }
    std::size_t cells() const noexcept { return cuts_.back(); }

    std::vector<std::uint64_t> merged_counts(const BinnedSample& binned) const;
    std::vector<double> lengths(const CellGrid& grid) const;
    /// Interval index of every grid cell.
    std::vector<std::size_t> cell_to_interval() const;

    friend bool operator==(const SubPartition&, const SubPartition&) = default;

private:
    std::vector<std::size_t> cuts_;
};

/// Bins data on the grid; throws std::out_of_range naming the first sample
/// outside [t_0, t_R].
BinnedSample bin_sample(std::span<const double> data, const CellGrid& grid,
                        std::optional<double> precision = std::nullopt);

double crit(const BinnedSample& binned, const SubPartition& part);

struct HistogramSelection {
    SubPartition partition;
    double crit_bits;
    /// Edge-cost evaluations (dp) or partitions scored (brute force).
    std::size_t evaluations;
};

/// Exact minimizer of crit over all sub-partitions in O(R²) edge
/// evaluations. Ties go to fewer intervals, then the lexicographically
/// smallest cut set.
HistogramSelection dp_select(const BinnedSample& binned);

constexpr std::size_t kBruteForceMaxCells = 20;

/// Enumerates all 2^(R−1) sub-partitions (R ≤ kBruteForceMaxCells).
HistogramSelection brute_force_select(const BinnedSample& binned);

/// Shortest-path edge cost of merging grid cells [from, to) into one
/// interval, −n' log₂(n'/(n l)) + (1/2)·log₂ n. Summing it over the intervals
/// of a partition and subtracting (1/2)·log₂ n gives crit (r unset).
double merged_interval_cost(const BinnedSample& binned, std::size_t from, std::size_t to);

/// Laplace(0, 1) draws e^{−|x|}/2 restricted to [lo, hi] by rejection.
std::vector<double> sample_laplace(std::size_t n, std::uint64_t seed, double lo, double hi);

/// JSON {boundaries, counts, crit_bits, m}.
std::string partition_json(const BinnedSample& binned, const HistogramSelection& selection);
/// JSON {boundaries, counts, n[, precision]}.
std::string binned_json(const BinnedSample& binned);
BinnedSample binned_from_json(const std::string& text);
/// Recovers the cut indices of a partition JSON over the given grid.
SubPartition partition_from_json(const std::string& text, const CellGrid& grid);

} // namespace ric
