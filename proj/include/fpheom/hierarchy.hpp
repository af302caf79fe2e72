#ifndef FPHEOM_HIERARCHY_HPP
#define FPHEOM_HIERARCHY_HPP

#include <cstdint>
#include <vector>

#include "fpheom/types.hpp"

namespace fpheom {

// One ADO label: occupation vectors m, n over the K bath modes.
struct MultiIndex {
    std::vector<std::uint8_t> m;
    std::vector<std::uint8_t> n;

    int tier() const {
        int t = 0;
        for (auto v : m) t += v;
        for (auto v : n) t += v;
        return t;
    }
};

// All multi-indices with sum(m)+sum(n) <= L, graded by tier and ordered
// lexicographically (descending) on the concatenated vector (m|n) within a
// tier. Ordinal 0 is (0|0). Exponents are stored flat, 2K per ordinal.
class HierarchyIndexSet {
public:
    HierarchyIndexSet() = default;

    int num_modes() const { return K_; }
    int tier_cap() const { return L_; }
    std::size_t size() const { return count_; }

    const std::uint8_t* exponents(std::size_t ordinal) const {
        return flat_.data() + ordinal * static_cast<std::size_t>(2 * K_);
    }
    MultiIndex index(std::size_t ordinal) const;

    // Exact inverse of the ordering; returns npos for indices outside the set.
    static constexpr std::uint32_t npos = 0xFFFFFFFFu;
    std::uint32_t lookup(const MultiIndex& idx) const;

    // Neighbor ordinals (npos when outside the truncated set):
    // up_m[ord*K+k] = ordinal of (m_k+1), dn_m = (m_k-1), same for n.
    const std::vector<std::uint32_t>& up_m() const { return up_m_; }
    const std::vector<std::uint32_t>& up_n() const { return up_n_; }
    const std::vector<std::uint32_t>& dn_m() const { return dn_m_; }
    const std::vector<std::uint32_t>& dn_n() const { return dn_n_; }

    friend HierarchyIndexSet enumerate_hierarchy(int K, int L, std::size_t max_ados);

private:
    std::size_t rank(const std::uint8_t* e) const;  // concatenated exponent vector

    int K_ = 0, L_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint8_t> flat_;
    std::vector<std::size_t> tier_offset_;           // ordinal of first index of each tier
    std::vector<std::vector<std::size_t>> binom_;    // binomial table
    std::vector<std::uint32_t> up_m_, up_n_, dn_m_, dn_n_;
};

// Number of nonnegative integer D-vectors with sum <= L, i.e. binom(D+L, L).
std::size_t hierarchy_count(int K, int L);

// Enumerates the tier-L truncated index set; throws ResourceError when the
// count exceeds max_ados.
HierarchyIndexSet enumerate_hierarchy(int K, int L, std::size_t max_ados = 5000000);

} // namespace fpheom

#endif
