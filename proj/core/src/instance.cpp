#include "vpflow/instance.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "vpflow/errors.hpp"

namespace vpflow {

namespace mp = boost::multiprecision;

std::int64_t VbpInstance::total_demand() const {
    std::int64_t n = 0;
    for (const auto& it : items) {
        if (__builtin_add_overflow(n, it.demand, &n))
            throw Error("total demand overflows 64-bit integer");
    }
    return n;
}

void VbpInstance::validate() const {
    if (dim_count < 1) throw ValidationError("instance must have at least one dimension");
    if (static_cast<int>(capacities.size()) != dim_count)
        throw ValidationError("capacity vector length does not match dimension count");
    for (int d = 0; d < dim_count; ++d)
        if (capacities[d] < 1)
            throw ValidationError("capacity of dimension " + std::to_string(d + 1) +
                                  " must be positive");
    if (items.empty()) throw ValidationError("instance must have at least one item");
    for (int i = 0; i < item_count(); ++i) {
        const ItemType& it = items[i];
        const std::string tag =
            it.external_id.empty() ? ("item " + std::to_string(i + 1)) : ("item " + it.external_id);
        if (static_cast<int>(it.weights.size()) != dim_count)
            throw ValidationError(tag + ": weight vector length does not match dimension count");
        bool any_positive = false;
        for (int d = 0; d < dim_count; ++d) {
            if (it.weights[d] < 0) throw ValidationError(tag + ": negative weight");
            if (it.weights[d] > capacities[d])
                throw ValidationError(tag + ": weight " + std::to_string(it.weights[d]) +
                                      " exceeds capacity " + std::to_string(capacities[d]) +
                                      " in dimension " + std::to_string(d + 1));
            if (it.weights[d] > 0) any_positive = true;
        }
        if (!any_positive) throw ValidationError(tag + ": weight vector is all zero");
        if (it.demand < 1) throw ValidationError(tag + ": demand must be at least 1");
    }
    for (int i : j_exact)
        if (i < 0 || i >= item_count())
            throw ValidationError("j_exact references item index out of range");
}

std::set<int> default_j_exact(const std::vector<ItemType>& items) {
    std::set<int> j;
    for (int i = 0; i < static_cast<int>(items.size()); ++i)
        if (items[i].demand == 1) j.insert(i);
    return j;
}

VbpInstance make_instance(std::vector<std::int64_t> capacities, std::vector<ItemType> items,
                          std::optional<std::set<int>> j_exact) {
    VbpInstance inst;
    inst.dim_count = static_cast<int>(capacities.size());
    inst.capacities = std::move(capacities);
    inst.items = std::move(items);
    inst.j_exact = j_exact ? std::move(*j_exact) : default_j_exact(inst.items);
    inst.validate();
    return inst;
}

namespace {

mp::cpp_rational exact_alpha(const VbpInstance& inst, int i) {
    mp::cpp_rational a = 0;
    for (int d = 0; d < inst.dim_count; ++d)
        a += mp::cpp_rational(inst.items[i].weights[d], inst.capacities[d]);
    return a;
}

}  // namespace

int compare_alpha(const VbpInstance& inst, int a, int b) {
    const mp::cpp_rational ra = exact_alpha(inst, a);
    const mp::cpp_rational rb = exact_alpha(inst, b);
    if (ra < rb) return -1;
    if (ra > rb) return 1;
    return 0;
}

CanonicalOrder canonical_order(const VbpInstance& inst) {
    inst.validate();
    const int m = inst.item_count();
    std::vector<mp::cpp_rational> alpha(m);
    for (int i = 0; i < m; ++i) alpha[i] = exact_alpha(inst, i);

    CanonicalOrder order;
    order.permutation.resize(m);
    std::iota(order.permutation.begin(), order.permutation.end(), 0);
    std::stable_sort(order.permutation.begin(), order.permutation.end(), [&](int a, int b) {
        if (alpha[a] != alpha[b]) return alpha[a] > alpha[b];
        // decreasing lexicographic tie-break on the raw weight vectors
        return inst.items[a].weights > inst.items[b].weights;
    });
    order.alpha.resize(m);
    for (int r = 0; r < m; ++r)
        order.alpha[r] = static_cast<double>(alpha[order.permutation[r]]);
    return order;
}

VbpInstance apply_order(const VbpInstance& inst, const CanonicalOrder& order) {
    if (static_cast<int>(order.permutation.size()) != inst.item_count())
        throw Error("order permutation size does not match instance");
    std::vector<ItemType> items;
    items.reserve(inst.items.size());
    std::vector<int> rank_of(inst.item_count());
    for (int r = 0; r < inst.item_count(); ++r) {
        items.push_back(inst.items[order.permutation[r]]);
        rank_of[order.permutation[r]] = r;
    }
    std::set<int> j;
    for (int i : inst.j_exact) j.insert(rank_of[i]);
    return make_instance(inst.capacities, std::move(items), std::move(j));
}

bool is_canonically_ordered(const VbpInstance& inst) {
    for (int i = 0; i + 1 < inst.item_count(); ++i) {
        const int c = compare_alpha(inst, i, i + 1);
        if (c < 0) return false;
        if (c == 0 && inst.items[i].weights < inst.items[i + 1].weights) return false;
    }
    return true;
}

VbpInstance scale_demands(const VbpInstance& inst, std::int64_t factor) {
    if (factor < 1) throw Error("demand scale factor must be >= 1");
    VbpInstance out = inst;
    for (auto& it : out.items) {
        std::int64_t scaled;
        if (__builtin_mul_overflow(it.demand, factor, &scaled))
            throw Error("scaled demand overflows 64-bit integer for item " + it.external_id);
        it.demand = scaled;
    }
    out.j_exact = default_j_exact(out.items);
    out.validate();
    return out;
}

namespace {

// Reads whitespace-separated integer tokens, skipping '#' comment lines,
// remembering line numbers for error reporting.
class TokenReader {
public:
    TokenReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    std::int64_t next_int(const char* what) {
        for (;;) {
            if (pos_ >= tokens_.size()) {
                if (!refill()) throw ParseError(name_ + ": unexpected end of file, expected " + what);
                continue;
            }
            const std::string& tok = tokens_[pos_++];
            std::int64_t value = 0;
            std::size_t idx = 0;
            try {
                value = std::stoll(tok, &idx);
            } catch (const std::exception&) {
                idx = 0;
            }
            if (idx != tok.size())
                throw ParseError(name_ + ":" + std::to_string(line_) + ": expected " + what +
                                 ", got '" + tok + "'");
            return value;
        }
    }

    int line() const { return line_; }

private:
    bool refill() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            tokens_.clear();
            pos_ = 0;
            std::string tok;
            while (ss >> tok) tokens_.push_back(tok);
            if (!tokens_.empty()) return true;
        }
        return false;
    }

    std::istream& in_;
    std::string name_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
    int line_ = 0;
};

}  // namespace

VbpInstance parse_instance(std::istream& in, InstanceFormat format,
                           const std::string& source_name) {
    TokenReader rd(in, source_name);
    int p = 1;
    std::vector<std::int64_t> caps;
    if (format == InstanceFormat::vbp) {
        p = static_cast<int>(rd.next_int("dimension count"));
        if (p < 1) throw ParseError(source_name + ": dimension count must be >= 1");
        for (int d = 0; d < p; ++d) caps.push_back(rd.next_int("capacity"));
    }
    std::int64_t m = 0;
    if (format == InstanceFormat::vbp) {
        m = rd.next_int("item count");
    } else {
        m = rd.next_int("item count");
        caps.push_back(rd.next_int("capacity"));
    }
    if (m < 1) throw ParseError(source_name + ": item count must be >= 1");

    std::vector<ItemType> items;
    items.reserve(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        ItemType it;
        for (int d = 0; d < p; ++d) it.weights.push_back(rd.next_int("item weight"));
        it.demand = rd.next_int("item demand");
        it.external_id = std::to_string(i + 1);
        items.push_back(std::move(it));
    }
    try {
        return make_instance(std::move(caps), std::move(items));
    } catch (const ValidationError& e) {
        throw ValidationError(source_name + ": " + e.what());
    }
}

VbpInstance parse_instance(const std::filesystem::path& path, InstanceFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file " + path.string());
    return parse_instance(in, format, path.string());
}

void write_instance(const VbpInstance& inst, std::ostream& out, InstanceFormat format) {
    if (format == InstanceFormat::vbp) {
        out << inst.dim_count << "\n";
        for (int d = 0; d < inst.dim_count; ++d)
            out << inst.capacities[d] << (d + 1 == inst.dim_count ? "\n" : " ");
        out << inst.item_count() << "\n";
    } else {
        if (inst.dim_count != 1)
            throw Error("bpp/csp format requires a one-dimensional instance");
        out << inst.item_count() << "\n" << inst.capacities[0] << "\n";
    }
    for (const auto& it : inst.items) {
        for (std::int64_t w : it.weights) out << w << " ";
        out << it.demand << "\n";
    }
}

}  // namespace vpflow
