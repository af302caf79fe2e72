#include <doctest.h>

#include <vector>

#include "fpheom/hierarchy.hpp"

using namespace fpheom;

namespace {

// Brute-force enumerator, independent of the ranking logic: all 2K-vectors
// with sum <= L in graded order, descending lex within a tier.
std::vector<std::vector<int>> brute_force(int K, int L) {
    const int D = 2 * K;
    std::vector<std::vector<int>> all;
    std::vector<int> cur(static_cast<std::size_t>(D), 0);
    for (int T = 0; T <= L; ++T) {
        std::vector<std::vector<int>> tier;
        // odometer over all vectors with entries <= T, filter by sum
        std::vector<int> v(static_cast<std::size_t>(D), 0);
        while (true) {
            int sum = 0;
            for (int x : v) sum += x;
            if (sum == T) tier.push_back(v);
            int i = D - 1;
            while (i >= 0 && v[static_cast<std::size_t>(i)] == T) {
                v[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++v[static_cast<std::size_t>(i)];
        }
        std::sort(tier.begin(), tier.end(), std::greater<>());
        for (auto& t : tier) all.push_back(std::move(t));
    }
    return all;
}

} // namespace

TEST_CASE("enumeration counts: stars and bars") {
    CHECK(enumerate_hierarchy(1, 1).size() == 3);
    CHECK(enumerate_hierarchy(2, 2).size() == 15);
    CHECK(enumerate_hierarchy(5, 0).size() == 1);
    CHECK(hierarchy_count(3, 4) == 210);  // C(10,4)
}

TEST_CASE("K=1, L=1 ordering matches (0|0), (1|0), (0|1)") {
    const HierarchyIndexSet hs = enumerate_hierarchy(1, 1);
    CHECK(hs.index(0).m == std::vector<std::uint8_t>{0});
    CHECK(hs.index(0).n == std::vector<std::uint8_t>{0});
    CHECK(hs.index(1).m == std::vector<std::uint8_t>{1});
    CHECK(hs.index(1).n == std::vector<std::uint8_t>{0});
    CHECK(hs.index(2).m == std::vector<std::uint8_t>{0});
    CHECK(hs.index(2).n == std::vector<std::uint8_t>{1});
}

TEST_CASE("enumeration agrees with brute force, lookup inverts the order") {
    for (auto [K, L] : std::vector<std::pair<int, int>>{{1, 3}, {2, 2}, {2, 4}, {3, 3}}) {
        const HierarchyIndexSet hs = enumerate_hierarchy(K, L);
        const auto ref = brute_force(K, L);
        REQUIRE(hs.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const MultiIndex idx = hs.index(i);
            for (int k = 0; k < K; ++k) {
                CHECK(static_cast<int>(idx.m[static_cast<std::size_t>(k)]) ==
                      ref[i][static_cast<std::size_t>(k)]);
                CHECK(static_cast<int>(idx.n[static_cast<std::size_t>(k)]) ==
                      ref[i][static_cast<std::size_t>(K + k)]);
            }
            CHECK(hs.lookup(idx) == i);
        }
    }
}

TEST_CASE("ordinal zero is the reduced density matrix") {
    const HierarchyIndexSet hs = enumerate_hierarchy(4, 6);
    CHECK(hs.index(0).tier() == 0);
}

TEST_CASE("neighbor tables match direct lookups") {
    const int K = 2, L = 3;
    const HierarchyIndexSet hs = enumerate_hierarchy(K, L);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        MultiIndex idx = hs.index(i);
        for (int k = 0; k < K; ++k) {
            MultiIndex up = idx;
            up.m[static_cast<std::size_t>(k)]++;
            const std::uint32_t want_up =
                up.tier() <= L ? hs.lookup(up) : HierarchyIndexSet::npos;
            CHECK(hs.up_m()[i * K + static_cast<std::size_t>(k)] == want_up);

            MultiIndex dn = idx;
            if (dn.m[static_cast<std::size_t>(k)] > 0) {
                dn.m[static_cast<std::size_t>(k)]--;
                CHECK(hs.dn_m()[i * K + static_cast<std::size_t>(k)] == hs.lookup(dn));
            } else {
                CHECK(hs.dn_m()[i * K + static_cast<std::size_t>(k)] == HierarchyIndexSet::npos);
            }
            MultiIndex un = idx;
            un.n[static_cast<std::size_t>(k)]++;
            const std::uint32_t want_un =
                un.tier() <= L ? hs.lookup(un) : HierarchyIndexSet::npos;
            CHECK(hs.up_n()[i * K + static_cast<std::size_t>(k)] == want_un);
        }
    }
}

TEST_CASE("ADO cap raises a resource error") {
    CHECK_THROWS_AS(enumerate_hierarchy(5, 12, 1000), ResourceError);
    CHECK_NOTHROW(enumerate_hierarchy(2, 2, 15));
}

TEST_CASE("tier obeys the truncation inequality") {
    const HierarchyIndexSet hs = enumerate_hierarchy(3, 5);
    for (std::size_t i = 0; i < hs.size(); ++i) CHECK(hs.index(i).tier() <= 5);
}
