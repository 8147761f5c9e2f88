#ifndef KLA_COHOMOLOGY_HPP
#define KLA_COHOMOLOGY_HPP

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kla/table.hpp"

namespace kla {

/// Bigraded Betti numbers b_{ij} = dim H^{i,j}(L) for j <= N.
struct BettiTable {
    int N = 0;
    std::map<std::pair<int, int>, long> entries; // nonzero only

    long get(int i, int j) const {
        auto it = entries.find({i, j});
        return it == entries.end() ? 0 : it->second;
    }

    /// Total Betti number b_i = sum_j b_{ij} (within the truncation).
    long total(int i) const {
        long s = 0;
        for (auto& [ij, v] : entries)
            if (ij.first == i) s += v;
        return s;
    }

    /// Largest i with a nonzero entry: an observed lower bound for cd L.
    int observed_cd() const {
        int m = 0;
        for (auto& [ij, v] : entries) m = std::max(m, ij.first);
        return m;
    }
};

namespace detail {

/// Basis element of the exterior complex: strictly increasing sequence of
/// (degree, index) pairs.
using WedgeTuple = std::vector<std::pair<int, int>>;

struct WedgeBasis {
    std::vector<WedgeTuple> tuples;
    std::map<WedgeTuple, int> index;

    int find(const WedgeTuple& t) const {
        auto it = index.find(t);
        return it == index.end() ? -1 : it->second;
    }
};

/// All i-element strictly increasing tuples of total internal degree j.
template <scalar K>
WedgeBasis wedge_basis(const StructureTable<K>& t, int i, int j) {
    WedgeBasis wb;
    WedgeTuple cur;
    auto rec = [&](auto&& self, std::pair<int, int> from, int left, int weight) -> void {
        if (left == 0) {
            if (weight == j) {
                wb.index.emplace(cur, static_cast<int>(wb.tuples.size()));
                wb.tuples.push_back(cur);
            }
            return;
        }
        for (int d = from.first; d <= t.N; ++d) {
            if (weight + d > j) break;
            // remaining factors each have degree >= d (weakly increasing),
            // so prune when even the smallest completion overshoots
            if (weight + d + (left - 1) > j) break;
            int start = (d == from.first) ? from.second : 0;
            for (int k = start; k < t.dim(d); ++k) {
                cur.emplace_back(d, k);
                self(self, {d, k + 1}, left - 1, weight + d);
                cur.pop_back();
            }
        }
    };
    rec(rec, {1, 0}, i, 0);
    return wb;
}

/// Boundary of one wedge tuple: d(x_1^...^x_i) = sum_{a<b} (+-)[x_a,x_b]^rest,
/// as a sparse vector over the codomain basis.
template <scalar K>
SVec<K> ce_boundary(const StructureTable<K>& t, const WedgeTuple& tuple,
                    const WedgeBasis& codomain) {
    SVec<K> img;
    for (std::size_t a = 0; a < tuple.size(); ++a)
        for (std::size_t b = a + 1; b < tuple.size(); ++b) {
            SVec<K> br = t.bracket_basis(tuple[a].first, tuple[a].second,
                                         tuple[b].first, tuple[b].second);
            if (br.empty()) continue;
            long sign = ((a + b) % 2 == 1) ? 1 : -1; // (-1)^{a+b} for 1-indexed slots
            WedgeTuple rest;
            for (std::size_t c = 0; c < tuple.size(); ++c)
                if (c != a && c != b) rest.push_back(tuple[c]);
            int dsum = tuple[a].first + tuple[b].first;
            for (auto& [m, coeff] : br) {
                std::pair<int, int> f{dsum, m};
                WedgeTuple full = rest;
                std::size_t pos = 0;
                bool repeat = false;
                for (; pos < full.size(); ++pos) {
                    if (full[pos] == f) { repeat = true; break; }
                    if (f < full[pos]) break;
                }
                if (repeat) continue; // wedge with a repeated factor
                full.insert(full.begin() + pos, f);
                long s2 = (pos % 2 == 0) ? 1 : -1;
                int row = codomain.find(full);
                if (row < 0) throw UsageError("exterior basis lookup failed (internal)");
                K val = Field<K>::mul_long(coeff, sign * s2);
                if (!Field<K>::is_zero(val)) {
                    auto it = img.find(row);
                    if (it == img.end()) img.emplace(row, val);
                    else {
                        it->second = it->second + val;
                        if (Field<K>::is_zero(it->second)) img.erase(it);
                    }
                }
            }
        }
    return img;
}

} // namespace detail

/// Homology of the exterior (Chevalley-Eilenberg) chain complex per internal
/// degree; over a field these dimensions equal the cohomology dimensions.
template <scalar K>
BettiTable betti_table(const StructureTable<K>& t, int N) {
    if (N > t.N) throw UsageError("betti truncation beyond the table");
    BettiTable bt;
    bt.N = N;
    bt.entries[{0, 0}] = 1;
    for (int j = 1; j <= N; ++j) {
        std::vector<detail::WedgeBasis> bases(j + 2);
        for (int i = 1; i <= j; ++i) bases[i] = detail::wedge_basis(t, i, j);
        // rank of d_i : Lambda_i -> Lambda_{i-1} (d_1 = 0)
        std::vector<int> rank(j + 3, 0);
        for (int i = 2; i <= j; ++i) {
            if (bases[i].tuples.empty()) continue;
            Echelon<K> ech(t.fs);
            for (const auto& tuple : bases[i].tuples) {
                SVec<K> img = detail::ce_boundary(t, tuple, bases[i - 1]);
                if (!img.empty()) ech.add(std::move(img));
            }
            rank[i] = ech.rank();
        }
        for (int i = 1; i <= j; ++i) {
            long dim = static_cast<long>(bases[i].tuples.size());
            long b = dim - rank[i] - rank[i + 1];
            if (b != 0) bt.entries[{i, j}] = b;
        }
    }
    return bt;
}

/// Bounded verdicts.  PASS(N) never claims anything beyond internal degree N.
struct Verdict {
    bool pass = true;
    int N = 0;
    int i = 0, j = 0; // failing bidegree when !pass
    long value = 0;

    std::string str() const {
        std::ostringstream os;
        if (pass) os << "PASS(" << N << ")";
        else os << "FAIL(i=" << i << ", j=" << j << ", b=" << value << ")";
        return os.str();
    }
};

inline Verdict is_standard_up_to(const BettiTable& bt, int N) {
    for (int j = 0; j <= N; ++j)
        if (j != 1 && bt.get(1, j) != 0) return {false, N, 1, j, bt.get(1, j)};
    return {true, N, 0, 0, 0};
}

inline Verdict is_quadratic_up_to(const BettiTable& bt, int N) {
    Verdict st = is_standard_up_to(bt, N);
    if (!st.pass) return st;
    for (int j = 0; j <= N; ++j)
        if (j != 2 && bt.get(2, j) != 0) return {false, N, 2, j, bt.get(2, j)};
    return {true, N, 0, 0, 0};
}

inline Verdict is_koszul_up_to(const BettiTable& bt, int N) {
    // scan internal degree first: report the smallest failing (j, i)
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= j; ++i)
            if (i != j && bt.get(i, j) != 0) return {false, N, i, j, bt.get(i, j)};
    return {true, N, 0, 0, 0};
}

/// Generator and relation degrees of a minimal presentation, as multisets
/// (degree, multiplicity), read off rows 1 and 2 of the Betti table.
struct MinimalDegrees {
    std::vector<std::pair<int, long>> generators;
    std::vector<std::pair<int, long>> relations;
};

inline MinimalDegrees minimal_presentation_degrees(const BettiTable& bt) {
    MinimalDegrees md;
    for (auto& [ij, v] : bt.entries) {
        if (ij.first == 1) md.generators.emplace_back(ij.second, v);
        if (ij.first == 2) md.relations.emplace_back(ij.second, v);
    }
    return md;
}

/// Strategy for sampling standard subalgebras.
struct SampleStrategy {
    enum Kind { CoordinateSubsets, Random, Explicit } kind = CoordinateSubsets;
    int count = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<SVec<Rat>>> explicit_rational; // for K = Rat
    std::vector<std::vector<SVec<Fp>>> explicit_prime;     // for K = Fp

    static SampleStrategy coordinate() { return {}; }
    static SampleStrategy random(int count, std::uint64_t seed) {
        SampleStrategy s;
        s.kind = Random;
        s.count = count;
        s.seed = seed;
        return s;
    }
};

template <scalar K>
const std::vector<std::vector<SVec<K>>>& explicit_list(const SampleStrategy& s);

template <>
inline const std::vector<std::vector<SVec<Rat>>>& explicit_list<Rat>(const SampleStrategy& s) {
    return s.explicit_rational;
}
template <>
inline const std::vector<std::vector<SVec<Fp>>>& explicit_list<Fp>(const SampleStrategy& s) {
    return s.explicit_prime;
}

namespace detail {

inline std::string subset_name(const std::vector<int>& idx) {
    std::string s = "coords{";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(idx[i]);
    }
    return s + "}";
}

template <scalar K>
std::vector<std::pair<std::string, std::vector<SVec<K>>>>
sample_subspaces(const StructureTable<K>& t, const SampleStrategy& strat) {
    std::vector<std::pair<std::string, std::vector<SVec<K>>>> out;
    int n = t.dim(1);
    if (strat.kind == SampleStrategy::CoordinateSubsets) {
        if (n > 16) throw UsageError("too many generators for exhaustive coordinate subsets");
        std::vector<std::vector<int>> subsets;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> idx;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) idx.push_back(i);
            subsets.push_back(std::move(idx));
        }
        std::stable_sort(subsets.begin(), subsets.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
        for (auto& idx : subsets) {
            std::vector<SVec<K>> v;
            for (int i : idx) {
                SVec<K> e;
                sv_set(e, i, Field<K>::one(t.fs));
                v.push_back(std::move(e));
            }
            out.emplace_back(subset_name(idx), std::move(v));
        }
    } else if (strat.kind == SampleStrategy::Random) {
        std::mt19937_64 rng(strat.seed);
        auto below = [&](long m) { return static_cast<long>(rng() % static_cast<std::uint64_t>(m)); };
        for (int s = 0; s < strat.count; ++s) {
            int dim = 1 + static_cast<int>(below(n));
            std::vector<SVec<K>> v;
            Echelon<K> ech(t.fs);
            int guard = 0;
            while (static_cast<int>(v.size()) < dim && guard < 200) {
                ++guard;
                SVec<K> w;
                for (int i = 0; i < n; ++i) {
                    long c = t.fs.is_rational() ? below(5) - 2 : below(t.fs.characteristic());
                    if (c != 0) sv_set(w, i, Field<K>::from_long(t.fs, c));
                }
                if (sv_is_zero(w)) continue;
                if (ech.add(w)) v.push_back(std::move(w));
            }
            out.emplace_back("random#" + std::to_string(s), std::move(v));
        }
    } else {
        int k = 0;
        for (const auto& v : explicit_list<K>(strat))
            out.emplace_back("explicit#" + std::to_string(k++), v);
    }
    return out;
}

} // namespace detail

/// One sampled standard subalgebra with its verdict.
struct SubalgebraReport {
    std::string generating;
    std::vector<int> dims;
    Verdict quadratic;
    BettiTable betti;
};

/// Sample standard subalgebras and check each for quadraticity up to N.
/// A clean run is relative to the sampled family and the truncation only.
template <scalar K>
std::vector<SubalgebraReport> bk_check(const StructureTable<K>& t, const SampleStrategy& strat,
                                       int N) {
    std::vector<SubalgebraReport> out;
    for (auto& [name, v] : detail::sample_subspaces(t, strat)) {
        if (v.empty()) continue;
        SubalgebraView<K> view = subalgebra_tables(t, v, N, name);
        SubalgebraReport rep;
        rep.generating = name;
        rep.dims = view.t.dims;
        rep.betti = betti_table(view.t, N);
        rep.quadratic = is_quadratic_up_to(rep.betti, N);
        out.push_back(std::move(rep));
    }
    return out;
}

/// Greedy quadratic filtration: descend by codimension-1 generating spaces,
/// each step's view quadratic up to N.  Candidates are coordinate deletions
/// from the current basis, then random combinations if allowed.
template <scalar K>
struct FiltrationResult {
    bool success = false;
    std::vector<std::string> chain; // descriptions, length = dim L_1 when successful
    int stuck_level = -1;
};

template <scalar K>
FiltrationResult<K> quadratic_filtration_search(const StructureTable<K>& t, int N,
                                                int random_tries = 20, std::uint64_t seed = 0) {
    FiltrationResult<K> res;
    BettiTable bt = betti_table(t, N);
    if (!is_quadratic_up_to(bt, N).pass) return res;
    std::vector<SVec<K>> cur;
    for (int i = 0; i < t.dim(1); ++i) {
        SVec<K> e;
        sv_set(e, i, Field<K>::one(t.fs));
        cur.push_back(std::move(e));
    }
    res.chain.push_back("full");
    std::mt19937_64 rng(seed);
    auto below = [&](long m) { return static_cast<long>(rng() % static_cast<std::uint64_t>(m)); };
    while (!cur.empty()) {
        bool found = false;
        for (std::size_t drop = 0; drop < cur.size() && !found; ++drop) {
            std::vector<SVec<K>> cand;
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (i != drop) cand.push_back(cur[i]);
            if (cand.empty()) {
                res.chain.push_back("drop#" + std::to_string(drop) + " -> 0");
                cur.clear();
                found = true;
                break;
            }
            SubalgebraView<K> view = subalgebra_tables(t, cand, N);
            if (is_quadratic_up_to(betti_table(view.t, N), N).pass) {
                res.chain.push_back("drop#" + std::to_string(drop));
                cur = std::move(cand);
                found = true;
            }
        }
        if (!found && !cur.empty() && cur.size() > 1) {
            for (int attempt = 0; attempt < random_tries && !found; ++attempt) {
                // random codimension-1 subspace of span(cur)
                std::vector<SVec<K>> cand;
                int k = static_cast<int>(cur.size());
                // combine the last vector into the others with random weights
                for (int i = 0; i + 1 < k; ++i) {
                    SVec<K> w = cur[i];
                    long c = t.fs.is_rational() ? below(5) - 2 : below(t.fs.characteristic());
                    sv_axpy(w, Field<K>::from_long(t.fs, c), cur[k - 1]);
                    cand.push_back(std::move(w));
                }
                SubalgebraView<K> view = subalgebra_tables(t, cand, N);
                if (is_quadratic_up_to(betti_table(view.t, N), N).pass) {
                    res.chain.push_back("random-combination#" + std::to_string(attempt));
                    cur = std::move(cand);
                    found = true;
                }
            }
        }
        if (!found) {
            res.stuck_level = static_cast<int>(cur.size());
            return res;
        }
    }
    res.success = true;
    return res;
}

/// Probe for the free rank: the largest sampled V whose view matches the
/// free (Witt) dimensions and has no minimal relations up to N.  Always a
/// lower bound, never an exact claim.
struct FreeRankProbe {
    int rank = 0;
    std::string witness;
};

template <scalar K>
FreeRankProbe probe_free_rank(const StructureTable<K>& t, int N, int random_tries = 10,
                              std::uint64_t seed = 0) {
    int n = t.dim(1);
    if (n > 16) throw UsageError("too many generators for the free-rank probe");
    std::vector<long> witt_cache;
    auto witt = [&](int r, int d) {
        GeneratorSet g;
        for (int i = 0; i < r; ++i) g.add("v" + std::to_string(i), 1);
        return free_dimension(g, d);
    };
    std::mt19937_64 rng(seed);
    auto below = [&](long m) { return static_cast<long>(rng() % static_cast<std::uint64_t>(m)); };
    for (int r = n; r >= 1; --r) {
        std::vector<std::pair<std::string, std::vector<SVec<K>>>> cands;
        // coordinate subsets of size r
        std::vector<int> idx(r);
        for (int i = 0; i < r; ++i) idx[i] = i;
        while (true) {
            std::vector<SVec<K>> v;
            for (int i : idx) {
                SVec<K> e;
                sv_set(e, i, Field<K>::one(t.fs));
                v.push_back(std::move(e));
            }
            cands.emplace_back(detail::subset_name(idx), std::move(v));
            int pos = r - 1;
            while (pos >= 0 && idx[pos] == n - r + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int q = pos + 1; q < r; ++q) idx[q] = idx[q - 1] + 1;
        }
        for (int a = 0; a < random_tries; ++a) {
            std::vector<SVec<K>> v;
            Echelon<K> ech(t.fs);
            int guard = 0;
            while (static_cast<int>(v.size()) < r && guard < 100) {
                ++guard;
                SVec<K> w;
                for (int i = 0; i < n; ++i) {
                    long c = t.fs.is_rational() ? below(5) - 2 : below(t.fs.characteristic());
                    if (c != 0) sv_set(w, i, Field<K>::from_long(t.fs, c));
                }
                if (!sv_is_zero(w) && ech.add(w)) v.push_back(std::move(w));
            }
            if (static_cast<int>(v.size()) == r)
                cands.emplace_back("random#" + std::to_string(a), std::move(v));
        }
        for (auto& [name, v] : cands) {
            SubalgebraView<K> view = subalgebra_tables(t, v, N);
            bool free_dims = true;
            for (int d = 1; d <= N; ++d)
                if (view.t.dims[d] != witt(r, d)) { free_dims = false; break; }
            if (!free_dims) continue;
            BettiTable bt = betti_table(view.t, N);
            bool no_rel = true;
            for (int j = 2; j <= N; ++j)
                if (bt.get(2, j) != 0) { no_rel = false; break; }
            if (no_rel) return {r, name};
        }
    }
    return {0, "none"};
}

} // namespace kla

#endif
