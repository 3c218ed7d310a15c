#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "showdag/rng.hpp"
#include "showdag/scm.hpp"

namespace showdag {

struct CiResult {
    double cmi_bits = 0.0;
    double p_value = 1.0;
    bool dependent = false;
    std::size_t strata = 0;
    double alpha = 0.0;
    std::size_t permutations = 0;
};

namespace detail {

// joint-encode a set of columns into dense codes
struct Encoded {
    std::vector<int> codes;
    int cardinality = 1;
};

inline Encoded encode_columns(const SampleTable& t, const std::vector<std::string>& names) {
    Encoded e;
    std::size_t n = t.rows();
    e.codes.assign(n, 0);
    if (names.empty()) return e;
    std::vector<const std::vector<int>*> cols;
    for (const std::string& name : names) cols.push_back(&t.column(name));
    std::map<std::vector<int>, int> lookup;
    std::vector<int> key(cols.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) key[c] = (*cols[c])[r];
        auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(lookup.size()));
        e.codes[r] = it->second;
    }
    e.cardinality = static_cast<int>(lookup.size());
    return e;
}

inline double cmi_from_codes(const std::vector<int>& a, const std::vector<int>& b,
                             const std::vector<int>& c, int ka, int kb, int kc) {
    std::size_t n = a.size();
    std::vector<double> nabc(static_cast<std::size_t>(ka) * kb * kc, 0.0);
    std::vector<double> nac(static_cast<std::size_t>(ka) * kc, 0.0);
    std::vector<double> nbc(static_cast<std::size_t>(kb) * kc, 0.0);
    std::vector<double> nc(kc, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        int ia = a[r], ib = b[r], ic = c[r];
        nabc[(static_cast<std::size_t>(ic) * ka + ia) * kb + ib] += 1.0;
        nac[static_cast<std::size_t>(ic) * ka + ia] += 1.0;
        nbc[static_cast<std::size_t>(ic) * kb + ib] += 1.0;
        nc[ic] += 1.0;
    }
    double sum = 0.0;
    for (int ic = 0; ic < kc; ++ic) {
        for (int ia = 0; ia < ka; ++ia) {
            for (int ib = 0; ib < kb; ++ib) {
                double j = nabc[(static_cast<std::size_t>(ic) * ka + ia) * kb + ib];
                if (j <= 0.0) continue;
                double denom = nac[static_cast<std::size_t>(ic) * ka + ia] *
                               nbc[static_cast<std::size_t>(ic) * kb + ib];
                sum += j * std::log2(j * nc[ic] / denom);
            }
        }
    }
    return sum / static_cast<double>(n);
}

}  // namespace detail

// Plug-in conditional mutual information (bits) of the named column sets.
inline double conditional_mutual_information(const SampleTable& t,
                                             const std::vector<std::string>& a,
                                             const std::vector<std::string>& b,
                                             const std::vector<std::string>& given = {}) {
    detail::Encoded ea = detail::encode_columns(t, a);
    detail::Encoded eb = detail::encode_columns(t, b);
    detail::Encoded ec = detail::encode_columns(t, given);
    return detail::cmi_from_codes(ea.codes, eb.codes, ec.codes, ea.cardinality, eb.cardinality,
                                  ec.cardinality);
}

inline double entropy_bits(const SampleTable& t, const std::vector<std::string>& names) {
    detail::Encoded e = detail::encode_columns(t, names);
    std::vector<double> counts(e.cardinality, 0.0);
    for (int code : e.codes) counts[code] += 1.0;
    double n = static_cast<double>(e.codes.size());
    double h = 0.0;
    for (double c : counts)
        if (c > 0) h -= (c / n) * std::log2(c / n);
    return h;
}

// Stratified permutation test of conditional mutual information: the a-codes
// are shuffled within each configuration of the conditioning variables, which
// preserves both conditional marginals under the null.
inline CiResult ci_test(const SampleTable& t, const std::vector<std::string>& a,
                        const std::vector<std::string>& b, const std::vector<std::string>& given,
                        double alpha, std::size_t permutations, std::uint64_t seed) {
    if (permutations < 200) throw ConfigError("at least 200 permutations required");
    detail::Encoded ea = detail::encode_columns(t, a);
    detail::Encoded eb = detail::encode_columns(t, b);
    detail::Encoded ec = detail::encode_columns(t, given);

    std::vector<std::vector<std::size_t>> strata(ec.cardinality);
    for (std::size_t r = 0; r < ec.codes.size(); ++r) strata[ec.codes[r]].push_back(r);
    for (const auto& s : strata)
        if (s.size() < 5)
            throw EmptyStratum("a conditioning configuration has fewer than 5 samples");

    CiResult result;
    result.strata = strata.size();
    result.alpha = alpha;
    result.permutations = permutations;
    result.cmi_bits =
        detail::cmi_from_codes(ea.codes, eb.codes, ec.codes, ea.cardinality, eb.cardinality,
                               ec.cardinality);

    Rng rng(derive_seed(seed, "ci-permutation"));
    std::vector<int> shuffled = ea.codes;
    std::size_t exceed = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        for (const auto& s : strata) {
            for (std::size_t i = s.size(); i > 1; --i) {
                std::size_t j = static_cast<std::size_t>(rng.next_below(i));
                std::swap(shuffled[s[i - 1]], shuffled[s[j]]);
            }
        }
        double cmi = detail::cmi_from_codes(shuffled, eb.codes, ec.codes, ea.cardinality,
                                            eb.cardinality, ec.cardinality);
        if (cmi >= result.cmi_bits - 1e-12) ++exceed;
    }
    result.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + permutations);
    result.dependent = result.p_value < alpha;
    return result;
}

}  // namespace showdag
