#include "lcc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "lcc/rng.hpp"

namespace lcc {

MatchingFamily::MatchingFamily(std::size_t n, std::vector<std::vector<Triple>> matchings,
                               std::vector<Vertex> negation, unsigned field_char)
    : n_(n), matchings_(std::move(matchings)), negation_(std::move(negation)),
      field_char_(field_char) {
    if (matchings_.size() != n_)
        throw std::invalid_argument("MatchingFamily: expected " + std::to_string(n_) +
                                    " matchings, got " + std::to_string(matchings_.size()));
    if (field_char_ < 2 || !is_prime(field_char_))
        throw std::invalid_argument("MatchingFamily: field characteristic must be prime");
    for (auto& hu : matchings_) {
        for (auto& c : hu) {
            for (Vertex v : c)
                if (v >= n_) throw std::invalid_argument("MatchingFamily: vertex out of range");
            std::sort(c.begin(), c.end());
        }
        std::sort(hu.begin(), hu.end());
    }
    if (!negation_.empty()) {
        if (negation_.size() != n_)
            throw std::invalid_argument("MatchingFamily: negation map has wrong length");
        for (Vertex v : negation_)
            if (v >= n_) throw std::invalid_argument("MatchingFamily: negation out of range");
        bool ident = true;
        for (std::size_t u = 0; u < n_; ++u) ident = ident && negation_[u] == u;
        if (ident) negation_.clear();
    }
}

std::size_t MatchingFamily::edge_count() const {
    std::size_t s = 0;
    for (auto& hu : matchings_) s += hu.size();
    return s;
}

std::size_t MatchingFamily::min_matching_size() const {
    std::size_t m = matchings_.empty() ? 0 : matchings_[0].size();
    for (auto& hu : matchings_) m = std::min(m, hu.size());
    return m;
}

std::size_t MatchingFamily::max_matching_size() const {
    std::size_t m = 0;
    for (auto& hu : matchings_) m = std::max(m, hu.size());
    return m;
}

double MatchingFamily::delta_eff() const {
    if (n_ == 0) return 0.0;
    return static_cast<double>(min_matching_size()) / static_cast<double>(n_);
}

MatchingFamily MatchingFamily::truncated(std::size_t m) const {
    auto mm = matchings_;
    for (auto& hu : mm)
        if (hu.size() > m) hu.resize(m);
    return MatchingFamily(n_, std::move(mm), negation_, field_char_);
}

bool is_prime(unsigned q) {
    if (q < 2) return false;
    for (unsigned d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

namespace {

std::uint32_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) { return pow_mod(a, p - 2, p); }

// Row echelon form keyed by the highest nonzero column, so the free columns
// (and hence the information set) come out as low-index as possible.
class F2Echelon {
public:
    explicit F2Echelon(std::size_t n) : n_(n), words_((n + 63) / 64), rows_(n) {}

    void insert(std::vector<std::uint64_t> row) {
        for (;;) {
            long c = highest(row);
            if (c < 0) return;
            auto& b = rows_[static_cast<std::size_t>(c)];
            if (b.empty()) {
                b = std::move(row);
                return;
            }
            for (std::size_t w = 0; w < words_; ++w) row[w] ^= b[w];
        }
    }

    SolutionSpace solve() {
        // Back-substitution to reduced form.
        for (std::size_t c = 0; c < n_; ++c) {
            if (rows_[c].empty()) continue;
            for (std::size_t c2 = c + 1; c2 < n_; ++c2) {
                auto& r2 = rows_[c2];
                if (!r2.empty() && bit(r2, c))
                    for (std::size_t w = 0; w < words_; ++w) r2[w] ^= rows_[c][w];
            }
        }
        SolutionSpace sol;
        sol.n = n_;
        sol.field_char = 2;
        for (std::size_t f = 0; f < n_; ++f) {
            if (!rows_[f].empty()) continue;
            std::vector<std::uint32_t> v(n_, 0);
            v[f] = 1;
            for (std::size_t c = 0; c < n_; ++c)
                if (!rows_[c].empty() && bit(rows_[c], f)) v[c] = 1;
            sol.information_set.push_back(static_cast<Vertex>(f));
            sol.basis.push_back(std::move(v));
        }
        sol.dimension = sol.basis.size();
        return sol;
    }

    std::vector<std::uint64_t> blank() const { return std::vector<std::uint64_t>(words_, 0); }

    static void flip(std::vector<std::uint64_t>& r, std::size_t c) {
        r[c >> 6] ^= std::uint64_t{1} << (c & 63);
    }

private:
    static bool bit(const std::vector<std::uint64_t>& r, std::size_t c) {
        return (r[c >> 6] >> (c & 63)) & 1;
    }
    long highest(const std::vector<std::uint64_t>& r) const {
        for (std::size_t w = words_; w-- > 0;)
            if (r[w]) return static_cast<long>(w * 64 + 63 - __builtin_clzll(r[w]));
        return -1;
    }

    std::size_t n_, words_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

class ModpEchelon {
public:
    ModpEchelon(std::size_t n, std::uint32_t p) : n_(n), p_(p), rows_(n) {}

    void insert(std::vector<std::uint32_t> row) {
        for (;;) {
            long c = highest(row);
            if (c < 0) return;
            auto& b = rows_[static_cast<std::size_t>(c)];
            if (b.empty()) {
                std::uint32_t inv = inv_mod(row[static_cast<std::size_t>(c)], p_);
                for (auto& x : row) x = static_cast<std::uint32_t>(std::uint64_t{x} * inv % p_);
                b = std::move(row);
                return;
            }
            std::uint64_t f = row[static_cast<std::size_t>(c)];
            for (std::size_t j = 0; j < n_; ++j)
                row[j] = static_cast<std::uint32_t>((row[j] + (p_ - f) * b[j]) % p_);
        }
    }

    SolutionSpace solve() {
        for (std::size_t c = 0; c < n_; ++c) {
            if (rows_[c].empty()) continue;
            for (std::size_t c2 = c + 1; c2 < n_; ++c2) {
                auto& r2 = rows_[c2];
                if (r2.empty() || r2[c] == 0) continue;
                std::uint64_t f = r2[c];
                for (std::size_t j = 0; j < n_; ++j)
                    r2[j] = static_cast<std::uint32_t>((r2[j] + (p_ - f) * rows_[c][j]) % p_);
            }
        }
        SolutionSpace sol;
        sol.n = n_;
        sol.field_char = p_;
        for (std::size_t f = 0; f < n_; ++f) {
            if (!rows_[f].empty()) continue;
            std::vector<std::uint32_t> v(n_, 0);
            v[f] = 1;
            for (std::size_t c = 0; c < n_; ++c)
                if (!rows_[c].empty() && rows_[c][f]) v[c] = (p_ - rows_[c][f]) % p_;
            sol.information_set.push_back(static_cast<Vertex>(f));
            sol.basis.push_back(std::move(v));
        }
        sol.dimension = sol.basis.size();
        return sol;
    }

private:
    long highest(const std::vector<std::uint32_t>& r) const {
        for (std::size_t j = n_; j-- > 0;)
            if (r[j]) return static_cast<long>(j);
        return -1;
    }

    std::size_t n_;
    std::uint32_t p_;
    std::vector<std::vector<std::uint32_t>> rows_;
};

}  // namespace

SolutionSpace solution_space(const MatchingFamily& fam) {
    const std::size_t n = fam.n();
    const unsigned p = fam.field_char();
    if (p == 2) {
        F2Echelon ech(n);
        for (Vertex u = 0; u < n; ++u) {
            for (const auto& c : fam.edges(u)) {
                auto row = ech.blank();
                F2Echelon::flip(row, u);
                for (Vertex v : c) F2Echelon::flip(row, v);
                ech.insert(std::move(row));
            }
            Vertex nu = fam.negate(u);
            if (nu != u) {
                auto row = ech.blank();
                F2Echelon::flip(row, u);
                F2Echelon::flip(row, nu);
                ech.insert(std::move(row));
            }
        }
        return ech.solve();
    }
    ModpEchelon ech(n, p);
    for (Vertex u = 0; u < n; ++u) {
        for (const auto& c : fam.edges(u)) {
            std::vector<std::uint32_t> row(n, 0);
            row[u] = (row[u] + 1) % p;
            for (Vertex v : c) row[v] = (row[v] + p - 1) % p;
            ech.insert(std::move(row));
        }
        // x_u + x_{nu(u)} = 0; for nu(u) = u this forces 2 x_u = 0.
        Vertex nu = fam.negate(u);
        if (!fam.identity_negation() && nu >= u) {
            std::vector<std::uint32_t> row(n, 0);
            row[u] = (row[u] + 1) % p;
            row[nu] = (row[nu] + 1) % p;
            ech.insert(std::move(row));
        }
    }
    return ech.solve();
}

std::vector<std::uint32_t> encode(const SolutionSpace& sol,
                                  const std::vector<std::uint32_t>& message) {
    if (message.size() != sol.dimension)
        throw std::invalid_argument("encode: message length must equal the dimension");
    std::vector<std::uint64_t> acc(sol.n, 0);
    const std::uint64_t p = sol.field_char;
    for (std::size_t i = 0; i < sol.dimension; ++i) {
        if (message[i] % p == 0) continue;
        for (std::size_t v = 0; v < sol.n; ++v)
            acc[v] = (acc[v] + std::uint64_t{message[i]} * sol.basis[i][v]) % p;
    }
    return std::vector<std::uint32_t>(acc.begin(), acc.end());
}

std::vector<int> encode_signs(const SolutionSpace& sol, const std::vector<Vertex>& heads,
                              const std::vector<int>& b) {
    if (sol.field_char != 2) throw std::invalid_argument("encode_signs: F2 only");
    if (heads.size() != b.size()) throw std::invalid_argument("encode_signs: length mismatch");
    std::vector<std::uint32_t> msg(sol.dimension, 0);
    for (std::size_t h = 0; h < heads.size(); ++h) {
        auto it = std::find(sol.information_set.begin(), sol.information_set.end(), heads[h]);
        if (it == sol.information_set.end())
            throw std::invalid_argument("encode_signs: head is not an information coordinate");
        msg[static_cast<std::size_t>(it - sol.information_set.begin())] = b[h] < 0 ? 1 : 0;
    }
    auto bits = encode(sol, msg);
    std::vector<int> x(bits.size());
    for (std::size_t v = 0; v < bits.size(); ++v) x[v] = bits[v] ? -1 : 1;
    return x;
}

MatchingFamily gen_random_matchings(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("gen_random_matchings: n must be positive");
    if (3 * m > n - 1)
        throw std::invalid_argument("gen_random_matchings: 3m > n - 1 (m=" + std::to_string(m) +
                                    ", n=" + std::to_string(n) + ")");
    std::vector<std::vector<Triple>> mm(n);
    for (Vertex u = 0; u < n; ++u) {
        Rng rng(derive_seed(seed, "matchings", u));
        std::vector<Vertex> rest;
        rest.reserve(n - 1);
        for (Vertex v = 0; v < n; ++v)
            if (v != u) rest.push_back(v);
        rng.shuffle(rest);
        for (std::size_t e = 0; e < m; ++e)
            mm[u].push_back({rest[3 * e], rest[3 * e + 1], rest[3 * e + 2]});
    }
    return MatchingFamily(n, std::move(mm));
}

FlatLcc gen_flat_lcc(unsigned mdim) {
    if (mdim < 2 || mdim > 16) throw std::invalid_argument("gen_flat_lcc: mdim must be in [2,16]");
    const std::size_t n = std::size_t{1} << mdim;
    const std::size_t nz = n - 1;
    std::vector<std::vector<Triple>> mm(n);
    std::vector<char> used(n);
    std::vector<Vertex> order(nz);
    for (Vertex u = 0; u < n; ++u) {
        // Directions are scanned in an order rotated by u; without the
        // rotation every vertex picks the same flats and the constraints
        // do not cut the solution space down to the affine functions.
        std::fill(used.begin(), used.end(), 0);
        for (std::size_t i = 0; i < nz; ++i) order[i] = static_cast<Vertex>((i + u) % nz + 1);
        for (std::size_t ai = 0; ai < nz; ++ai) {
            Vertex a = order[ai];
            if (used[a]) continue;
            for (std::size_t s = 1; s < nz; ++s) {
                Vertex b = order[(ai + s) % nz];
                Vertex ab = a ^ b;
                if (used[b] || used[ab]) continue;
                used[a] = used[b] = used[ab] = 1;
                mm[u].push_back({u ^ a, u ^ b, u ^ ab});
                break;
            }
        }
    }
    FlatLcc out{MatchingFamily(n, std::move(mm)), {}};
    auto& sol = out.solutions;
    sol.n = n;
    sol.field_char = 2;
    sol.dimension = mdim + 1;
    // Systematic in the coordinates 0 and 2^i: basis[0] is the constant
    // function shifted to vanish at the unit vectors, basis[i+1] = bit i.
    sol.information_set.push_back(0);
    for (unsigned i = 0; i < mdim; ++i) sol.information_set.push_back(Vertex{1} << i);
    std::vector<std::uint32_t> one(n);
    for (std::size_t v = 0; v < n; ++v) {
        unsigned w = static_cast<unsigned>(__builtin_popcountll(v));
        one[v] = (1 + w) & 1;  // affine map equal to 1 at 0, 0 at each e_i
    }
    sol.basis.push_back(one);
    for (unsigned i = 0; i < mdim; ++i) {
        std::vector<std::uint32_t> f(n);
        for (std::size_t v = 0; v < n; ++v) f[v] = (v >> i) & 1;
        sol.basis.push_back(std::move(f));
    }
    return out;
}

PlantedLcc gen_planted(std::size_t n, std::size_t m, unsigned k, std::uint64_t seed) {
    if (k == 0 || k > 20) throw std::invalid_argument("gen_planted: k must be in [1,20]");
    if (3 * m > n - 1) throw std::invalid_argument("gen_planted: 3m > n - 1");
    Rng rng(derive_seed(seed, "planted-columns"));
    PlantedLcc out;
    auto& g = out.columns;
    g.resize(n);
    const std::uint32_t mask = (k >= 32) ? ~0u : ((1u << k) - 1);
    // Unit columns first so the planted code has full dimension k.
    for (std::size_t v = 0; v < n; ++v)
        g[v] = v < k ? (1u << v) : static_cast<std::uint32_t>(rng.next()) & mask;
    std::vector<std::vector<Triple>> mm(n);
    std::vector<char> used(n);
    for (Vertex u = 0; u < n; ++u) {
        Rng r2(derive_seed(seed, "planted-edges", u));
        std::fill(used.begin(), used.end(), 0);
        used[u] = 1;
        std::vector<Vertex> cand;
        for (Vertex v = 0; v < n; ++v)
            if (v != u) cand.push_back(v);
        r2.shuffle(cand);
        for (std::size_t ia = 0; ia < cand.size() && mm[u].size() < m; ++ia) {
            Vertex a = cand[ia];
            if (used[a]) continue;
            bool placed = false;
            for (std::size_t ib = ia + 1; ib < cand.size() && !placed; ++ib) {
                Vertex b = cand[ib];
                if (used[b]) continue;
                std::uint32_t want = g[u] ^ g[a] ^ g[b];
                for (std::size_t ic = ib + 1; ic < cand.size(); ++ic) {
                    Vertex c = cand[ic];
                    if (used[c] || g[c] != want) continue;
                    used[a] = used[b] = used[c] = 1;
                    mm[u].push_back({a, b, c});
                    placed = true;
                    break;
                }
            }
        }
        if (mm[u].size() < m)
            throw std::runtime_error("gen_planted: could not place " + std::to_string(m) +
                                     " triples for vertex " + std::to_string(u));
    }
    out.family = MatchingFamily(n, std::move(mm));
    return out;
}

MatchingFamily gen_heavy_pair(std::size_t n, std::size_t m, std::size_t heavy,
                              std::uint64_t seed) {
    if (n < 4 || 3 * m > n - 1 || m == 0)
        throw std::invalid_argument("gen_heavy_pair: need n >= 4, 1 <= m, 3m <= n - 1");
    if (heavy > n - 3) throw std::invalid_argument("gen_heavy_pair: too many heavy vertices");
    std::vector<std::vector<Triple>> mm(n);
    for (Vertex u = 0; u < n; ++u) {
        Rng rng(derive_seed(seed, "heavy", u));
        std::vector<Vertex> rest;
        bool is_heavy = u >= 2 && u < 2 + heavy;
        for (Vertex v = 0; v < n; ++v)
            if (v != u && !(is_heavy && (v == 0 || v == 1))) rest.push_back(v);
        rng.shuffle(rest);
        std::size_t pos = 0;
        if (is_heavy) {
            // Third vertex chosen so the heavy edges differ from each other.
            Vertex c = u + 1 < n ? u + 1 : 2;
            mm[u].push_back({0, 1, c});
            rest.erase(std::find(rest.begin(), rest.end(), c));
        }
        while (mm[u].size() < m && pos + 3 <= rest.size()) {
            mm[u].push_back({rest[pos], rest[pos + 1], rest[pos + 2]});
            pos += 3;
        }
    }
    return MatchingFamily(n, std::move(mm));
}

HeavyPair heavy_pair_degree(const MatchingFamily& fam) {
    std::unordered_map<std::uint64_t, std::size_t> tally;
    auto key = [](Vertex a, Vertex b) {
        if (a > b) std::swap(a, b);
        return (std::uint64_t{a} << 32) | b;
    };
    for (Vertex u = 0; u < fam.n(); ++u)
        for (const auto& c : fam.edges(u)) {
            ++tally[key(c[0], c[1])];
            ++tally[key(c[0], c[2])];
            ++tally[key(c[1], c[2])];
        }
    HeavyPair hp;
    std::uint64_t best = 0;
    for (const auto& [k, cnt] : tally) {
        if (cnt > hp.d_max || (cnt == hp.d_max && k < best)) {
            hp.d_max = cnt;
            best = k;
        }
    }
    if (hp.d_max > 0)
        hp.witness = std::make_pair(static_cast<Vertex>(best >> 32),
                                    static_cast<Vertex>(best & 0xffffffffu));
    return hp;
}

MatchingFamily lift_unit_coefficients(const FieldCode& code) {
    const unsigned q = code.q;
    if (!is_prime(q)) throw std::invalid_argument("lift_unit_coefficients: q must be prime");
    if (q == 2) throw std::invalid_argument("lift_unit_coefficients: q = 2 needs no lifting");
    const std::size_t n2 = code.n * (q - 1);
    std::vector<std::vector<Triple>> mm(n2);
    for (const auto& fc : code.constraints) {
        if (fc.u >= code.n) throw std::invalid_argument("lift_unit_coefficients: head out of range");
        for (auto& [v, a] : fc.terms) {
            if (v >= code.n) throw std::invalid_argument("lift_unit_coefficients: vertex out of range");
            if (a % q == 0)
                throw std::invalid_argument("lift_unit_coefficients: zero coefficient in constraint for " +
                                            std::to_string(fc.u));
        }
        for (std::uint32_t alpha = 1; alpha < q; ++alpha) {
            Vertex head = lifted_vertex(fc.u, alpha, q);
            Triple t{};
            for (std::size_t i = 0; i < 3; ++i) {
                auto [v, a] = fc.terms[i];
                std::uint32_t coef = static_cast<std::uint32_t>(std::uint64_t{alpha} * (a % q) % q);
                t[i] = lifted_vertex(v, coef, q);
            }
            if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2] || t[0] == head || t[1] == head ||
                t[2] == head)
                throw std::invalid_argument("lift_unit_coefficients: lifted constraint for " +
                                            std::to_string(fc.u) + " has repeated vertices");
            mm[head].push_back(t);
        }
    }
    std::vector<Vertex> neg(n2);
    for (Vertex u = 0; u < code.n; ++u)
        for (std::uint32_t alpha = 1; alpha < q; ++alpha)
            neg[lifted_vertex(u, alpha, q)] = lifted_vertex(u, q - alpha, q);
    return MatchingFamily(n2, std::move(mm), std::move(neg), q);
}

std::vector<std::uint32_t> lift_codeword(const std::vector<std::uint32_t>& x, unsigned q) {
    std::vector<std::uint32_t> out(x.size() * (q - 1));
    for (Vertex u = 0; u < x.size(); ++u)
        for (std::uint32_t alpha = 1; alpha < q; ++alpha)
            out[lifted_vertex(u, alpha, q)] =
                static_cast<std::uint32_t>(std::uint64_t{alpha} * (x[u] % q) % q);
    return out;
}

GkstResult gkst_check(const std::vector<std::vector<Edge2>>& matchings, std::size_t n,
                      double delta) {
    if (n < 2) throw std::invalid_argument("gkst_check: n must be at least 2");
    std::vector<int> seen(n, -1);
    std::size_t total = 0;
    for (std::size_t i = 0; i < matchings.size(); ++i) {
        for (auto [a, b] : matchings[i]) {
            if (a >= n || b >= n || a == b)
                throw std::invalid_argument("gkst_check: bad edge in matching " + std::to_string(i));
            if (seen[a] == static_cast<int>(i) || seen[b] == static_cast<int>(i))
                throw std::invalid_argument("gkst_check: G_" + std::to_string(i) +
                                            " is not a matching");
            seen[a] = seen[b] = static_cast<int>(i);
        }
        total += matchings[i].size();
    }
    GkstResult r;
    const double k = static_cast<double>(matchings.size());
    r.lhs = delta * k;
    r.rhs = 2.0 * std::log2(static_cast<double>(n));
    r.holds = r.lhs <= r.rhs;
    r.avg_fraction = k > 0 ? static_cast<double>(total) / k / static_cast<double>(n) : 0.0;
    return r;
}

ValidationReport validate_normal_form(const MatchingFamily& fam, const SolutionSpace* sol) {
    ValidationReport rep;
    auto add = [&](const std::string& kind, Vertex u, std::string detail) {
        rep.violations.push_back({kind, u, std::move(detail)});
        if (kind == "arity") ++rep.arity;
        else if (kind == "disjointness") ++rep.disjointness;
        else if (kind == "constraint") ++rep.constraint;
        else ++rep.negation;
    };
    auto str = [](const Triple& c) {
        std::ostringstream os;
        os << "{" << c[0] << "," << c[1] << "," << c[2] << "}";
        return os.str();
    };
    const std::size_t n = fam.n();
    std::vector<std::size_t> owner(n, SIZE_MAX);
    for (Vertex u = 0; u < n; ++u) {
        const auto& hu = fam.edges(u);
        for (std::size_t e = 0; e < hu.size(); ++e) {
            const auto& c = hu[e];
            if (c[0] == c[1] || c[1] == c[2] || c[0] == u || c[1] == u || c[2] == u)
                add("arity", u, "edge " + str(c) + " is not a 3-subset of [n] minus the head");
        }
        std::fill(owner.begin(), owner.end(), SIZE_MAX);
        for (std::size_t e = 0; e < hu.size(); ++e) {
            for (Vertex v : hu[e]) {
                if (owner[v] != SIZE_MAX && owner[v] != e) {
                    add("disjointness", u,
                        "edges " + str(hu[owner[v]]) + " and " + str(hu[e]) + " share vertex " +
                            std::to_string(v));
                    break;
                }
                owner[v] = e;
            }
        }
    }
    if (!fam.identity_negation()) {
        for (Vertex u = 0; u < n; ++u) {
            Vertex nu = fam.negate(u);
            if (fam.negate(nu) != u) {
                add("negation", u, "negation is not an involution");
                continue;
            }
            std::vector<Triple> img;
            for (const auto& c : fam.edges(u)) {
                Triple t{fam.negate(c[0]), fam.negate(c[1]), fam.negate(c[2])};
                std::sort(t.begin(), t.end());
                img.push_back(t);
            }
            std::sort(img.begin(), img.end());
            if (img != fam.edges(nu)) add("negation", u, "H_nu(u) differs from nu(H_u)");
        }
    }
    if (sol) {
        const std::uint64_t p = sol->field_char;
        if (sol->n != n || p != fam.field_char())
            throw std::invalid_argument("validate_normal_form: solution space does not match family");
        for (std::size_t bi = 0; bi < sol->basis.size(); ++bi) {
            const auto& x = sol->basis[bi];
            for (Vertex u = 0; u < n; ++u) {
                for (const auto& c : fam.edges(u)) {
                    std::uint64_t s = (x[c[0]] + x[c[1]] + std::uint64_t{x[c[2]]}) % p;
                    if (s != x[u] % p)
                        add("constraint", u,
                            "basis vector " + std::to_string(bi) + " violates " + str(c));
                }
                if (!fam.identity_negation() && (x[u] + std::uint64_t{x[fam.negate(u)]}) % p != 0)
                    add("constraint", u,
                        "basis vector " + std::to_string(bi) + " violates the negation relation");
            }
        }
    }
    return rep;
}

}  // namespace lcc
