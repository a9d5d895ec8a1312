#ifndef VPFLOW_INSTANCE_HPP
#define VPFLOW_INSTANCE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vpflow {

// One item type of a p-dimensional vector packing instance.
struct ItemType {
    std::vector<std::int64_t> weights;  // one entry per dimension
    std::int64_t demand = 1;
    std::string external_id;            // opaque tag, round-tripped through files
};

// Vector packing instance: m item types, p-dimensional integer weights,
// identical bins with capacity vector `capacities`.
//
// `j_exact` holds the (0-based) indices of items whose demand rows are
// equalities in the flow model; by default the demand-one items.
struct VbpInstance {
    int dim_count = 1;
    std::vector<std::int64_t> capacities;
    std::vector<ItemType> items;
    std::set<int> j_exact;

    int item_count() const { return static_cast<int>(items.size()); }
    std::int64_t total_demand() const;

    // Throws ValidationError if any invariant is violated: m >= 1, every
    // weight vector has the instance dimension, at least one positive
    // weight per item, demand >= 1, every item fits alone in a bin.
    void validate() const;
};

// Default equality set: items with demand one.
std::set<int> default_j_exact(const std::vector<ItemType>& items);

// Builds a validated instance; j_exact defaults to the demand-one items.
VbpInstance make_instance(std::vector<std::int64_t> capacities,
                          std::vector<ItemType> items,
                          std::optional<std::set<int>> j_exact = std::nullopt);

// Canonical item order: decreasing sum of normalized weights
// alpha_i = sum_d w_i^d / W^d, ties broken by decreasing lexicographic
// comparison of the raw weight vectors, equal vectors keep file order.
struct CanonicalOrder {
    std::vector<int> permutation;  // rank -> original item index
    std::vector<double> alpha;     // alpha by rank, approximate (reporting only)
};

// Exact three-way comparison of alpha_a and alpha_b (<0, 0, >0). No
// floating point is involved.
int compare_alpha(const VbpInstance& inst, int a, int b);

CanonicalOrder canonical_order(const VbpInstance& inst);

// Instance with items permuted into canonical order (j_exact remapped).
VbpInstance apply_order(const VbpInstance& inst, const CanonicalOrder& order);

bool is_canonically_ordered(const VbpInstance& inst);

// Multiplies every demand by `factor` (>= 1) and recomputes j_exact.
// Throws Error on 64-bit overflow.
VbpInstance scale_demands(const VbpInstance& inst, std::int64_t factor);

enum class InstanceFormat { vbp, bpp, csp };

// Text formats (whitespace-separated integers, '#' starts a comment line):
//   vbp:      p / W^1 ... W^p / m / then m lines "w^1 ... w^p b"
//   bpp, csp: m / W / then m lines "w b"
VbpInstance parse_instance(std::istream& in, InstanceFormat format,
                           const std::string& source_name = "<stream>");
VbpInstance parse_instance(const std::filesystem::path& path, InstanceFormat format);
void write_instance(const VbpInstance& inst, std::ostream& out, InstanceFormat format);

}  // namespace vpflow

#endif
