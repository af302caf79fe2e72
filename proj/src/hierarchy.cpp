#include "fpheom/hierarchy.hpp"

#include <algorithm>
#include <functional>

namespace fpheom {

std::size_t hierarchy_count(int K, int L) {
    // binom(2K+L, L), computed multiplicatively
    const int d = 2 * K;
    std::size_t c = 1;
    for (int i = 1; i <= L; ++i) {
        // guard against overflow before multiplying
        const std::size_t num = static_cast<std::size_t>(d + i);
        if (c > static_cast<std::size_t>(-1) / num)
            throw ResourceError("hierarchy_count: index count overflows 64 bits");
        c = c * num / static_cast<std::size_t>(i);
    }
    return c;
}

MultiIndex HierarchyIndexSet::index(std::size_t ordinal) const {
    const std::uint8_t* e = exponents(ordinal);
    MultiIndex idx;
    idx.m.assign(e, e + K_);
    idx.n.assign(e + K_, e + 2 * K_);
    return idx;
}

std::size_t HierarchyIndexSet::rank(const std::uint8_t* e) const {
    const int D = 2 * K_;
    int T = 0;
    for (int i = 0; i < D; ++i) T += e[i];
    // within-tier rank under descending lex: compositions with a larger
    // leading part come first; binom_[u + d][d] counts sum <= u in d parts.
    std::size_t r = 0;
    int rem = T;
    for (int i = 0; i < D - 1; ++i) {
        const int d = D - 1 - i;  // parts remaining after position i
        // compositions with part_i in (e[i], rem]: sum_{v=e[i]+1}^{rem} N(rem-v, d)
        // = C(rem - e[i] - 1 + d, d)
        const int u = rem - e[i] - 1;
        if (u >= 0) r += binom_[static_cast<std::size_t>(u + d)][static_cast<std::size_t>(d)];
        rem -= e[i];
    }
    return tier_offset_[static_cast<std::size_t>(T)] + r;
}

std::uint32_t HierarchyIndexSet::lookup(const MultiIndex& idx) const {
    if (static_cast<int>(idx.m.size()) != K_ || static_cast<int>(idx.n.size()) != K_)
        return npos;
    if (idx.tier() > L_) return npos;
    std::vector<std::uint8_t> e(idx.m);
    e.insert(e.end(), idx.n.begin(), idx.n.end());
    return static_cast<std::uint32_t>(rank(e.data()));
}

HierarchyIndexSet enumerate_hierarchy(int K, int L, std::size_t max_ados) {
    if (K < 0 || L < 0)
        throw DomainError("enumerate_hierarchy: K and L must be >= 0");
    const std::size_t n = hierarchy_count(K, L);
    if (n > max_ados)
        throw ResourceError("enumerate_hierarchy: " + std::to_string(n) +
                            " ADOs exceeds the configured cap of " + std::to_string(max_ados));

    HierarchyIndexSet hs;
    hs.K_ = K;
    hs.L_ = L;
    hs.count_ = n;
    const int D = 2 * K;

    // Pascal triangle up to D+L
    hs.binom_.assign(static_cast<std::size_t>(D + L + 1), {});
    for (int a = 0; a <= D + L; ++a) {
        hs.binom_[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(a + 1), 1);
        for (int b = 1; b < a; ++b)
            hs.binom_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                hs.binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] +
                hs.binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)];
    }

    hs.flat_.resize(n * static_cast<std::size_t>(std::max(D, 1)));
    hs.tier_offset_.assign(static_cast<std::size_t>(L + 2), 0);

    if (K == 0) return hs;  // single empty index

    // graded enumeration; within each tier descending lex on (m|n)
    std::size_t pos = 0;
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(D), 0);
    auto emit = [&]() {
        std::copy(cur.begin(), cur.end(), hs.flat_.begin() + static_cast<std::ptrdiff_t>(pos * D));
        ++pos;
    };
    for (int T = 0; T <= L; ++T) {
        hs.tier_offset_[static_cast<std::size_t>(T)] = pos;
        // recursive descent without recursion: positions filled left to right
        std::function<void(int, int)> gen = [&](int i, int rem) {
            if (i == D - 1) {
                cur[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rem);
                emit();
                return;
            }
            for (int v = rem; v >= 0; --v) {
                cur[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
                gen(i + 1, rem - v);
            }
        };
        gen(0, T);
    }
    hs.tier_offset_[static_cast<std::size_t>(L + 1)] = pos;

    // neighbor tables
    const std::size_t nk = n * static_cast<std::size_t>(K);
    hs.up_m_.assign(nk, HierarchyIndexSet::npos);
    hs.up_n_.assign(nk, HierarchyIndexSet::npos);
    hs.dn_m_.assign(nk, HierarchyIndexSet::npos);
    hs.dn_n_.assign(nk, HierarchyIndexSet::npos);
    std::vector<std::uint8_t> tmp(static_cast<std::size_t>(D));
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* e = hs.exponents(i);
        int tier = 0;
        for (int j = 0; j < D; ++j) tier += e[j];
        std::copy(e, e + D, tmp.begin());
        for (int k = 0; k < K; ++k) {
            if (tier < L) {
                tmp[static_cast<std::size_t>(k)] += 1;
                hs.up_m_[i * K + k] = static_cast<std::uint32_t>(hs.rank(tmp.data()));
                tmp[static_cast<std::size_t>(k)] -= 1;
                tmp[static_cast<std::size_t>(K + k)] += 1;
                hs.up_n_[i * K + k] = static_cast<std::uint32_t>(hs.rank(tmp.data()));
                tmp[static_cast<std::size_t>(K + k)] -= 1;
            }
            if (e[k] > 0) {
                tmp[static_cast<std::size_t>(k)] -= 1;
                hs.dn_m_[i * K + k] = static_cast<std::uint32_t>(hs.rank(tmp.data()));
                tmp[static_cast<std::size_t>(k)] += 1;
            }
            if (e[K + k] > 0) {
                tmp[static_cast<std::size_t>(K + k)] -= 1;
                hs.dn_n_[i * K + k] = static_cast<std::uint32_t>(hs.rank(tmp.data()));
                tmp[static_cast<std::size_t>(K + k)] += 1;
            }
        }
    }
    return hs;
}

} // namespace fpheom
