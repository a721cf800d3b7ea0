#include "mailbox/axioms.hpp"

#include <algorithm>
#include <limits>

namespace mailbox {

bool AxiomReport::ok() const {
    return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.ok; });
}

const AxiomResult* AxiomReport::find(const std::string& axiom) const {
    for (const auto& r : results) {
        if (r.axiom == axiom) {
            return &r;
        }
    }
    return nullptr;
}

namespace {

using Index = std::uint32_t;
constexpr Index kNone = std::numeric_limits<Index>::max();

// Row-major bit matrix for the quadratic forms.
class BitMatrix {
public:
    explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

    void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= 1ull << (j % 64); }
    bool test(std::size_t i, std::size_t j) const {
        return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
    }
    /// row a is a subset of row b
    bool subset(std::size_t a, std::size_t b) const {
        for (std::size_t w = 0; w < words_; ++w) {
            if (bits_[a * words_ + w] & ~bits_[b * words_ + w]) {
                return false;
            }
        }
        return true;
    }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

class Checker {
public:
    Checker(const AbstractExecution& x, bool reference) : x_(x), reference_(reference) {
        const Index n = static_cast<Index>(x.size());
        for (Index i = 0; i < n; ++i) {
            const auto& e = x.events[i];
            if (e.deliver) {
                delivers_.push_back(i);
            }
            if (e.homeowner()) {
                home_.push_back(i);
            }
        }
        auto by_begin = [&](Index a, Index b) {
            return std::pair(x.events[a].begin, a) < std::pair(x.events[b].begin, b);
        };
        std::sort(delivers_.begin(), delivers_.end(), by_begin);
        std::sort(home_.begin(), home_.end(), by_begin);
    }

    AxiomReport run() {
        AxiomReport r;
        if (reference_) {
            build_matrices();
            order_axiom_reference(r);
        } else {
            order_axiom_sweep(r);
        }
        r.results.push_back({"1b", true, std::nullopt});
        r.results.push_back(disjoint());
        r.results.push_back(deliver_chain());
        r.results.push_back(homeowner_chain());
        r.results.push_back(initial_first());
        r.results.push_back(reference_ ? check_remove_pairing_reference()
                                       : check_remove_pairing_chain());
        r.results.push_back(positive_has_deliver());
        r.results.push_back(reference_ ? p3_reference() : p3_sweep());
        r.results.push_back(reference_ ? np_reference() : np_sweep());
        return r;
    }

private:
    const AbstractExecution& x_;
    bool reference_;
    std::vector<Index> delivers_;
    std::vector<Index> home_;
    std::optional<BitMatrix> succ_;
    std::optional<BitMatrix> pred_;

    std::string nm(Index e) const { return x_.name(e); }
    bool lt(Index a, Index b) const { return x_.precedes(a, b); }
    static AxiomResult pass(const char* id) { return {id, true, std::nullopt}; }
    static AxiomResult fail(const char* id, std::string w) { return {id, false, std::move(w)}; }

    void build_matrices() {
        const std::size_t n = x_.size();
        succ_.emplace(n);
        pred_.emplace(n);
        for (Index a = 0; a < n; ++a) {
            for (Index b = 0; b < n; ++b) {
                if (lt(a, b)) {
                    succ_->set(a, b);
                    pred_->set(b, a);
                }
            }
        }
    }

    void order_axiom_reference(AxiomReport& r) {
        const Index n = static_cast<Index>(x_.size());
        std::optional<std::string> w1;
        for (Index i = 0; i < n && !w1; ++i) {
            if (lt(i, i)) {
                w1 = nm(i) + " < " + nm(i);
            }
        }
        for (Index i = 0; i < n && !w1; ++i) {
            for (Index j = 0; j < n && !w1; ++j) {
                if (succ_->test(i, j) && !succ_->subset(j, i)) {
                    w1 = "not transitive at " + nm(i) + " < " + nm(j);
                }
            }
        }
        r.results.push_back({"1", !w1, w1});

        std::optional<std::string> wa;
        for (Index x2 = 0; x2 < n && !wa; ++x2) {
            for (Index x3 = 0; x3 < n && !wa; ++x3) {
                if (lt(x2, x3) || lt(x3, x2)) {
                    continue;
                }
                for (Index x1 = 0; x1 < n && !wa; ++x1) {
                    if (!pred_->test(x2, x1) || succ_->subset(x3, x1)) {
                        continue;
                    }
                    for (Index x4 = 0; x4 < n; ++x4) {
                        if (succ_->test(x3, x4) && !succ_->test(x1, x4)) {
                            wa = nm(x1) + " < " + nm(x2) + ", " + nm(x3) + " < " + nm(x4) + ", " +
                                 nm(x2) + " || " + nm(x3) + " but not " + nm(x1) + " < " + nm(x4);
                            break;
                        }
                    }
                }
            }
        }
        r.results.push_back({"1a", !wa, wa});
    }

    // Interval precedence is an interval order as long as every interval is proper.
    void order_axiom_sweep(AxiomReport& r) {
        for (Index i = 0; i < x_.size(); ++i) {
            if (x_.events[i].end < x_.events[i].begin) {
                r.results.push_back(fail("1", nm(i) + " ends before it begins"));
                r.results.push_back(fail("1a", nm(i) + " ends before it begins"));
                return;
            }
        }
        r.results.push_back(pass("1"));
        r.results.push_back(pass("1a"));
    }

    AxiomResult disjoint() const {
        for (Index i = 0; i < x_.size(); ++i) {
            const auto& e = x_.events[i];
            if (int{e.deliver} + int{e.check} + int{e.remove} + int{e.initial} > 1) {
                return fail("2", nm(i) + " satisfies more than one predicate");
            }
        }
        return pass("2");
    }

    // Linear order of `chain` (sorted by begin): every pair comparable.
    std::optional<std::string> not_linear(const std::vector<Index>& chain) const {
        if (reference_) {
            for (std::size_t a = 0; a < chain.size(); ++a) {
                for (std::size_t b = a + 1; b < chain.size(); ++b) {
                    if (!lt(chain[a], chain[b]) && !lt(chain[b], chain[a])) {
                        return nm(chain[a]) + " and " + nm(chain[b]) + " are incomparable";
                    }
                }
            }
            return std::nullopt;
        }
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            if (!lt(chain[k], chain[k + 1])) {
                return nm(chain[k]) + " and " + nm(chain[k + 1]) + " are incomparable";
            }
        }
        return std::nullopt;
    }

    // Number of members of `pool` that are <= e.
    std::uint64_t count_le(const std::vector<Index>& pool, Index e, bool (*keep)(const AbstractEvent&),
                           std::size_t chain_pos) const {
        if (!reference_) {
            std::uint64_t c = 0;
            for (std::size_t k = 0; k <= chain_pos; ++k) {
                c += keep(x_.events[pool[k]]) ? 1 : 0;
            }
            return c;
        }
        std::uint64_t c = 0;
        for (Index p : pool) {
            if (keep(x_.events[p]) && (p == e || lt(p, e))) {
                ++c;
            }
        }
        return c;
    }

    AxiomResult deliver_chain() const {
        if (auto w = not_linear(delivers_)) {
            return fail("3", *w);
        }
        for (std::size_t k = 0; k < delivers_.size(); ++k) {
            const Index d = delivers_[k];
            const auto want = reference_ ? count_le(delivers_, d, [](const AbstractEvent&) {
                return true;
            }, k)
                                         : k + 1;
            if (x_.events[d].dn != want) {
                return fail("3", "dn(" + nm(d) + ") is not " + std::to_string(want));
            }
        }
        return pass("3");
    }

    AxiomResult homeowner_chain() const {
        if (auto w = not_linear(home_)) {
            return fail("4", *w);
        }
        std::uint64_t removes = 0;
        for (std::size_t k = 0; k < home_.size(); ++k) {
            const Index h = home_[k];
            removes += x_.events[h].remove ? 1 : 0;
            const auto want = reference_ ? count_le(home_, h, [](const AbstractEvent& e) {
                return e.remove;
            }, k)
                                         : removes;
            if (x_.events[h].rn != want) {
                return fail("4", "rn(" + nm(h) + ") is not " + std::to_string(want));
            }
        }
        return pass("4");
    }

    AxiomResult initial_first() const {
        std::vector<Index> initial;
        std::vector<Index> rest;
        for (Index i = 0; i < x_.size(); ++i) {
            (x_.events[i].initial ? initial : rest).push_back(i);
        }
        if (initial.empty() && !rest.empty()) {
            return fail("5", "no initial event");
        }
        if (reference_) {
            for (Index i : initial) {
                for (Index j : rest) {
                    if (!lt(i, j)) {
                        return fail("5", nm(i) + " does not precede " + nm(j));
                    }
                }
            }
            return pass("5");
        }
        Index latest = initial.front();
        for (Index i : initial) {
            if (x_.events[i].end > x_.events[latest].end) {
                latest = i;
            }
        }
        for (Index j : rest) {
            if (!lt(latest, j)) {
                return fail("5", nm(latest) + " does not precede " + nm(j));
            }
        }
        return pass("5");
    }

    // Literal quantifiers: C < R with no homeowner X strictly between.
    bool immediately_before(Index c, Index r) const {
        if (!lt(c, r)) {
            return false;
        }
        for (Index h : home_) {
            if (lt(c, h) && lt(h, r)) {
                return false;
            }
        }
        return true;
    }

    AxiomResult check_remove_pairing_reference() const {
        for (Index c : home_) {
            const auto& e = x_.events[c];
            if (!e.check || !e.positive) {
                continue;
            }
            const bool last = std::none_of(home_.begin(), home_.end(),
                                           [&](Index h) { return lt(c, h); });
            if (last) {
                continue;
            }
            const bool found = std::any_of(home_.begin(), home_.end(), [&](Index r) {
                return x_.events[r].remove && immediately_before(c, r);
            });
            if (!found) {
                return fail("6", "positive " + nm(c) + " is not immediately followed by a remove");
            }
        }
        for (Index r : home_) {
            if (!x_.events[r].remove) {
                continue;
            }
            const bool found = std::any_of(home_.begin(), home_.end(), [&](Index c) {
                return x_.events[c].check && x_.events[c].positive && immediately_before(c, r);
            });
            if (!found) {
                return fail("6", nm(r) + " is not immediately preceded by a positive check");
            }
        }
        return pass("6");
    }

    AxiomResult check_remove_pairing_chain() const {
        for (std::size_t k = 0; k < home_.size(); ++k) {
            const auto& e = x_.events[home_[k]];
            if (e.check && e.positive && k + 1 < home_.size() &&
                !x_.events[home_[k + 1]].remove) {
                return fail("6", "positive " + nm(home_[k]) +
                                     " is not immediately followed by a remove");
            }
            if (e.remove && (k == 0 || !x_.events[home_[k - 1]].check ||
                             !x_.events[home_[k - 1]].positive)) {
                return fail("6", nm(home_[k]) + " is not immediately preceded by a positive check");
            }
        }
        return pass("6");
    }

    AxiomResult positive_has_deliver() const {
        for (Index c : home_) {
            const auto& e = x_.events[c];
            if (!e.check || !e.positive) {
                continue;
            }
            if (!e.rho || *e.rho >= x_.size() || !x_.events[*e.rho].deliver) {
                return fail("7", "rho(" + nm(c) + ") is not a deliver");
            }
            const auto& d = x_.events[*e.rho];
            if (!d.dn || !e.rn || !(*e.rn < *d.dn)) {
                return fail("7", "rn(" + nm(c) + ") = " + std::to_string(e.rn.value_or(0)) +
                                     " is not below dn(" + nm(*e.rho) +
                                     ") = " + std::to_string(d.dn.value_or(0)));
            }
        }
        return pass("7");
    }

    AxiomResult p3_reference() const {
        for (Index c : home_) {
            const auto& e = x_.events[c];
            if (!e.check || e.positive) {
                continue;
            }
            for (Index d : delivers_) {
                if (lt(d, c) && e.rn.value_or(0) < x_.events[d].dn.value_or(0)) {
                    return fail("8", nm(d) + " < " + nm(c) + " and rn < dn but " + nm(c) +
                                         " is negative");
                }
            }
        }
        return pass("8");
    }

    AxiomResult p3_sweep() const {
        std::vector<Index> by_end = delivers_;
        std::sort(by_end.begin(), by_end.end(),
                  [&](Index a, Index b) { return x_.events[a].end < x_.events[b].end; });
        std::vector<Index> best(by_end.size() + 1, kNone);
        for (std::size_t k = 0; k < by_end.size(); ++k) {
            const Index b = best[k];
            best[k + 1] = (b == kNone || x_.events[by_end[k]].dn.value_or(0) >
                                             x_.events[b].dn.value_or(0))
                              ? by_end[k]
                              : b;
        }
        for (Index c : home_) {
            const auto& e = x_.events[c];
            if (!e.check || e.positive) {
                continue;
            }
            auto k = std::lower_bound(by_end.begin(), by_end.end(), e.begin,
                                      [&](Index d, std::int64_t t) {
                                          return x_.events[d].end < t;
                                      }) -
                     by_end.begin();
            const Index d = best[static_cast<std::size_t>(k)];
            if (d != kNone && e.rn.value_or(0) < x_.events[d].dn.value_or(0)) {
                return fail("8", nm(d) + " < " + nm(c) + " and rn < dn but " + nm(c) +
                                     " is negative");
            }
        }
        return pass("8");
    }

    AxiomResult np_reference() const {
        for (Index c : home_) {
            const auto& e = x_.events[c];
            if (!e.check || !e.positive) {
                continue;
            }
            if (!e.rho || *e.rho >= x_.size()) {
                return fail("9", "rho(" + nm(c) + ") is undefined");
            }
            for (Index d : delivers_) {
                if (lt(c, d) && !lt(*e.rho, d)) {
                    return fail("9", nm(c) + " < " + nm(d) + " but rho(" + nm(c) + ") = " +
                                         nm(*e.rho) + " does not precede it");
                }
            }
        }
        return pass("9");
    }

    AxiomResult np_sweep() const {
        for (Index c : home_) {
            const auto& e = x_.events[c];
            if (!e.check || !e.positive) {
                continue;
            }
            if (!e.rho || *e.rho >= x_.size()) {
                return fail("9", "rho(" + nm(c) + ") is undefined");
            }
            // delivers_ is sorted by begin: the first one after C has the least begin.
            auto it = std::upper_bound(delivers_.begin(), delivers_.end(), e.end,
                                       [&](std::int64_t t, Index d) {
                                           return t < x_.events[d].begin;
                                       });
            if (it != delivers_.end() && !lt(*e.rho, *it)) {
                return fail("9", nm(c) + " < " + nm(*it) + " but rho(" + nm(c) + ") = " +
                                     nm(*e.rho) + " does not precede it");
            }
        }
        return pass("9");
    }
};

} // namespace

AxiomReport check_axioms(const AbstractExecution& x, CheckMode mode) {
    return Checker(x, resolve_mode(x, mode) == CheckMode::Reference).run();
}

} // namespace mailbox
