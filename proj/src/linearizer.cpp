#include "mailbox/linearizer.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <unordered_map>

namespace mailbox {

bool OrderRelation::contains(std::uint32_t a, std::uint32_t b) const {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
}

namespace {

using Index = std::uint32_t;
constexpr Index kNone = std::numeric_limits<Index>::max();

// dn value -> delivers carrying it (normally exactly one).
std::unordered_map<std::uint64_t, std::vector<Index>> delivers_by_dn(const AbstractExecution& x) {
    std::unordered_map<std::uint64_t, std::vector<Index>> m;
    for (Index i = 0; i < x.size(); ++i) {
        if (x.events[i].deliver && x.events[i].dn) {
            m[*x.events[i].dn].push_back(i);
        }
    }
    return m;
}

std::uint64_t rn_of(const AbstractEvent& e) { return e.rn.value_or(0); }

struct Graph {
    std::vector<std::vector<Index>> adj;
    std::vector<Index> indegree;

    explicit Graph(std::size_t n) : adj(n), indegree(n, 0) {}
    void edge(Index a, Index b) {
        adj[a].push_back(b);
        ++indegree[b];
    }
};

// Kahn's algorithm. Nodes >= events are gates: released as soon as they are
// ready, never emitted.
std::vector<Index> topological_order(const AbstractExecution& x, Graph& g) {
    const std::size_t n = x.size();
    using Key = std::pair<std::int64_t, Index>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    std::vector<Index> gates;
    auto release = [&](Index v) {
        if (v < n) {
            ready.emplace(x.events[v].begin, v);
        } else {
            gates.push_back(v);
        }
    };
    auto drain_gates = [&] {
        while (!gates.empty()) {
            Index v = gates.back();
            gates.pop_back();
            for (Index w : g.adj[v]) {
                if (--g.indegree[w] == 0) {
                    release(w);
                }
            }
        }
    };
    for (Index v = 0; v < g.adj.size(); ++v) {
        if (g.indegree[v] == 0) {
            release(v);
        }
    }
    drain_gates();
    std::vector<Index> order;
    order.reserve(n);
    while (!ready.empty()) {
        Index v = ready.top().second;
        ready.pop();
        order.push_back(v);
        for (Index w : g.adj[v]) {
            if (--g.indegree[w] == 0) {
                release(w);
            }
        }
        drain_gates();
    }
    return order;
}

Graph reference_graph(const AbstractExecution& x) {
    const Index n = static_cast<Index>(x.size());
    Graph g(n);
    for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
            if (a != b && x.precedes(a, b)) {
                g.edge(a, b);
            }
        }
    }
    for (const auto& [a, b] : build_lhd(x).pairs) {
        g.edge(a, b);
    }
    return g;
}

// Precedence through a chain of gates over the distinct begin values, lhd
// through a chain of gates over dn values.
Graph sweep_graph(const AbstractExecution& x) {
    const Index n = static_cast<Index>(x.size());
    std::vector<std::int64_t> begins;
    begins.reserve(n);
    for (const auto& e : x.events) {
        begins.push_back(e.begin);
    }
    std::sort(begins.begin(), begins.end());
    begins.erase(std::unique(begins.begin(), begins.end()), begins.end());
    const Index m = static_cast<Index>(begins.size());

    std::uint64_t max_dn = 0;
    for (const auto& e : x.events) {
        if (e.deliver && e.dn) {
            max_dn = std::max(max_dn, *e.dn);
        }
    }
    const Index gate0 = n;
    const Index dn_gate0 = n + m; // dn gate for value v is dn_gate0 + v - 1
    Graph g(n + m + static_cast<std::size_t>(max_dn));

    for (Index k = 0; k + 1 < m; ++k) {
        g.edge(gate0 + k, gate0 + k + 1);
    }
    for (Index v = 1; v < max_dn; ++v) {
        g.edge(dn_gate0 + v - 1, dn_gate0 + v);
    }
    const auto by_dn = delivers_by_dn(x);
    for (Index i = 0; i < n; ++i) {
        const auto& e = x.events[i];
        auto k = static_cast<Index>(std::lower_bound(begins.begin(), begins.end(), e.begin) -
                                    begins.begin());
        g.edge(gate0 + k, i);
        auto after = static_cast<Index>(std::upper_bound(begins.begin(), begins.end(), e.end) -
                                        begins.begin());
        if (after < m) {
            g.edge(i, gate0 + after);
        }
        if (e.deliver && e.dn && *e.dn >= 1) {
            g.edge(dn_gate0 + static_cast<Index>(*e.dn) - 1, i);
        }
        if (!e.check) {
            continue;
        }
        const auto rn = rn_of(e);
        if (!e.positive) {
            if (rn + 1 <= max_dn) {
                g.edge(i, dn_gate0 + static_cast<Index>(rn));
            }
        } else if (auto it = by_dn.find(rn + 1); it != by_dn.end()) {
            for (Index d : it->second) {
                g.edge(d, i);
            }
        }
    }
    return g;
}

void check_extends_precedence_reference(const AbstractExecution& x, LinearizationVerdict& v) {
    const Index n = static_cast<Index>(x.size());
    for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
            if (a != b && x.precedes(a, b) && !v.before(a, b)) {
                v.failures.push_back({1, {a, b},
                                      x.name(a) + " < " + x.name(b) +
                                          " but the total order puts it later"});
                return;
            }
        }
    }
}

void check_extends_precedence_sweep(const AbstractExecution& x, LinearizationVerdict& v) {
    const Index n = static_cast<Index>(x.size());
    std::vector<Index> by_begin(n);
    for (Index i = 0; i < n; ++i) {
        by_begin[i] = i;
    }
    std::sort(by_begin.begin(), by_begin.end(), [&](Index a, Index b) {
        return x.events[a].begin < x.events[b].begin;
    });
    // suffix argmin of position over events sorted by begin
    std::vector<Index> suffix(n + 1, kNone);
    for (Index k = n; k-- > 0;) {
        Index cand = by_begin[k];
        Index best = suffix[k + 1];
        suffix[k] = (best == kNone || v.position[cand] < v.position[best]) ? cand : best;
    }
    for (Index a = 0; a < n; ++a) {
        auto k = static_cast<Index>(
            std::upper_bound(by_begin.begin(), by_begin.end(), x.events[a].end,
                             [&](std::int64_t val, Index e) { return val < x.events[e].begin; }) -
            by_begin.begin());
        Index b = suffix[k];
        if (b != kNone && v.position[b] < v.position[a]) {
            v.failures.push_back({1, {a, b},
                                  x.name(a) + " < " + x.name(b) +
                                      " but the total order puts it later"});
            return;
        }
    }
}

void check_items(const AbstractExecution& x, LinearizationVerdict& v) {
    const Index n = static_cast<Index>(x.size());
    v.remnum.assign(n, 0);
    v.delnum.assign(n, 0);
    std::vector<Index> delivers;
    std::vector<Index> removes;
    Index last_home = kNone;
    for (Index e : v.order) {
        const auto& ev = x.events[e];
        v.remnum[e] = static_cast<std::uint32_t>(removes.size());
        v.delnum[e] = static_cast<std::uint32_t>(delivers.size());
        if (ev.remove) {
            const bool ok = last_home != kNone && x.events[last_home].check &&
                            x.events[last_home].positive;
            if (!ok) {
                std::vector<Index> w{e};
                if (last_home != kNone) {
                    w.push_back(last_home);
                }
                v.failures.push_back({2, w,
                                      x.name(e) +
                                          " is not immediately preceded by a positive check"});
            }
        }
        if (ev.homeowner()) {
            last_home = e;
        }
        if (ev.deliver) {
            delivers.push_back(e);
        } else if (ev.remove) {
            removes.push_back(e);
        }
    }

    const auto by_dn = delivers_by_dn(x);
    for (Index c = 0; c < n; ++c) {
        const auto& ev = x.events[c];
        if (!ev.check) {
            continue;
        }
        const bool expected = v.remnum[c] < v.delnum[c];
        std::string detail;
        if (ev.positive != expected) {
            detail = x.name(c) + " returned " + (ev.positive ? "true" : "false") +
                     " with remnum = " + std::to_string(v.remnum[c]) +
                     " and delnum = " + std::to_string(v.delnum[c]);
        } else if (ev.positive) {
            const auto want = rn_of(ev) + 1;
            auto it = by_dn.find(want);
            const bool witnessed = it != by_dn.end() &&
                                   std::any_of(it->second.begin(), it->second.end(),
                                               [&](Index d) { return v.before(d, c); });
            if (!witnessed) {
                detail = x.name(c) + " is positive but no deliver with dn = " +
                         std::to_string(want) + " precedes it in the total order";
            }
        }
        if (detail.empty()) {
            continue;
        }
        std::vector<Index> w{c};
        for (Index e : v.order) {
            if (e == c) {
                break;
            }
            if (x.events[e].deliver || x.events[e].remove) {
                w.push_back(e);
            }
        }
        v.failures.push_back({3, std::move(w), std::move(detail)});
    }

    for (std::size_t i = 0; i < removes.size(); ++i) {
        const Index r = removes[i];
        if (i >= delivers.size()) {
            v.failures.push_back({4, {r},
                                  x.name(r) + " has no matching deliver in the total order"});
            continue;
        }
        const Index d = delivers[i];
        if (x.events[r].letter != x.events[d].letter) {
            v.failures.push_back({4, {r, d},
                                  x.name(r) + " removed a different letter than " + x.name(d) +
                                      " delivered"});
        }
    }
}

} // namespace

OrderRelation build_lhd(const AbstractExecution& x) {
    OrderRelation r{RelationKind::Lhd, {}};
    const Index n = static_cast<Index>(x.size());
    for (Index c = 0; c < n; ++c) {
        const auto& ce = x.events[c];
        if (!ce.check) {
            continue;
        }
        const auto rn = rn_of(ce);
        for (Index d = 0; d < n; ++d) {
            const auto& de = x.events[d];
            if (!de.deliver || !de.dn) {
                continue;
            }
            if (!ce.positive && rn < *de.dn) {
                r.pairs.emplace_back(c, d);
            } else if (ce.positive && *de.dn == rn + 1) {
                r.pairs.emplace_back(d, c);
            }
        }
    }
    return r;
}

OrderRelation precedence_relation(const AbstractExecution& x) {
    OrderRelation r{RelationKind::Precedence, {}};
    const Index n = static_cast<Index>(x.size());
    for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
            if (a != b && x.precedes(a, b)) {
                r.pairs.emplace_back(a, b);
            }
        }
    }
    return r;
}

OrderRelation union_relation(const OrderRelation& a, const OrderRelation& b) {
    OrderRelation r{RelationKind::Union, a.pairs};
    r.pairs.insert(r.pairs.end(), b.pairs.begin(), b.pairs.end());
    std::sort(r.pairs.begin(), r.pairs.end());
    r.pairs.erase(std::unique(r.pairs.begin(), r.pairs.end()), r.pairs.end());
    return r;
}

CycleCheck check_acyclic(const OrderRelation& r, std::size_t n) {
    std::vector<std::vector<Index>> adj(n);
    for (const auto& [a, b] : r.pairs) {
        adj[a].push_back(b);
    }
    CycleCheck best;
    std::vector<Index> parent(n);
    std::vector<std::uint32_t> dist(n);
    for (Index s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kNone);
        std::deque<Index> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            Index v = q.front();
            q.pop_front();
            if (!best.acyclic && dist[v] + 1 >= best.cycle.size()) {
                break;
            }
            bool closed = false;
            for (Index w : adj[v]) {
                if (w == s) {
                    std::vector<Index> cyc;
                    for (Index u = v; u != s; u = parent[u]) {
                        cyc.push_back(u);
                    }
                    cyc.push_back(s);
                    std::reverse(cyc.begin(), cyc.end());
                    best.acyclic = false;
                    best.cycle = std::move(cyc);
                    closed = true;
                    break;
                }
                if (dist[w] == kNone) {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    q.push_back(w);
                }
            }
            if (closed) {
                break;
            }
        }
    }
    return best;
}

OrderRelation LinearizationVerdict::total() const {
    OrderRelation r{RelationKind::Total, {}};
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            r.pairs.emplace_back(order[i], order[j]);
        }
    }
    return r;
}

LinearizationVerdict linearize(const AbstractExecution& x, CheckMode mode) {
    const bool reference = resolve_mode(x, mode) == CheckMode::Reference;
    const Index n = static_cast<Index>(x.size());
    LinearizationVerdict v;
    Graph g = reference ? reference_graph(x) : sweep_graph(x);
    v.order = topological_order(x, g);
    if (v.order.size() != n) {
        v.ok = false;
        v.cyclic = true;
        v.order.clear();
        constexpr std::size_t kCycleSearchLimit = 2048;
        if (n <= kCycleSearchLimit) {
            v.cycle = check_acyclic(union_relation(precedence_relation(x), build_lhd(x)), n).cycle;
        }
        std::string detail = "precedence and lhd have a cycle";
        for (std::size_t i = 0; i < v.cycle.size(); ++i) {
            detail += (i == 0 ? ": " : " -> ") + x.name(v.cycle[i]);
        }
        v.failures.push_back({1, v.cycle, detail});
        return v;
    }
    v.position.assign(n, 0);
    for (Index i = 0; i < n; ++i) {
        v.position[v.order[i]] = i;
    }
    if (reference) {
        check_extends_precedence_reference(x, v);
    } else {
        check_extends_precedence_sweep(x, v);
    }
    check_items(x, v);
    v.ok = v.failures.empty();
    return v;
}

std::vector<Finding> check_lhd_lemmas(const AbstractExecution& x, CheckMode mode) {
    std::vector<Finding> out;
    const Index n = static_cast<Index>(x.size());
    if (resolve_mode(x, mode) == CheckMode::Reference) {
        const auto lhd = build_lhd(x);
        std::vector<std::vector<Index>> from(n);
        std::vector<std::vector<Index>> to(n);
        for (const auto& [a, b] : lhd.pairs) {
            from[a].push_back(b);
            to[b].push_back(a);
            if (x.precedes(b, a)) {
                out.push_back({"L1", x.name(a) + " lhd " + x.name(b) + " but " + x.name(b) +
                                         " < " + x.name(a)});
            }
        }
        for (const auto& [c, d] : lhd.pairs) {
            if (!x.events[c].check) {
                continue;
            }
            for (Index c2 : from[d]) {
                if (!x.precedes(c, c2)) {
                    out.push_back({"L3", x.name(c) + " lhd " + x.name(d) + " lhd " + x.name(c2) +
                                             " without " + x.name(c) + " < " + x.name(c2)});
                }
            }
        }
        for (Index c = 0; c < n; ++c) {
            if (x.events[c].check && !from[c].empty() && !to[c].empty()) {
                out.push_back({"L4", x.name(to[c].front()) + " lhd " + x.name(c) + " lhd " +
                                         x.name(from[c].front())});
            }
        }
        return out;
    }

    const auto by_dn = delivers_by_dn(x);
    // delivers sorted by end, with prefix max dn
    std::vector<Index> dels;
    for (Index i = 0; i < n; ++i) {
        if (x.events[i].deliver && x.events[i].dn) {
            dels.push_back(i);
        }
    }
    std::uint64_t max_dn = 0;
    for (Index d : dels) {
        max_dn = std::max(max_dn, *x.events[d].dn);
    }
    std::sort(dels.begin(), dels.end(),
              [&](Index a, Index b) { return x.events[a].end < x.events[b].end; });
    std::vector<Index> prefix_max(dels.size() + 1, kNone);
    for (std::size_t k = 0; k < dels.size(); ++k) {
        Index best = prefix_max[k];
        prefix_max[k + 1] =
            (best == kNone || *x.events[dels[k]].dn > *x.events[best].dn) ? dels[k] : best;
    }
    auto max_dn_ending_before = [&](std::int64_t t) {
        auto k = std::lower_bound(dels.begin(), dels.end(), t,
                                  [&](Index e, std::int64_t val) { return x.events[e].end < val; }) -
                 dels.begin();
        return prefix_max[static_cast<std::size_t>(k)];
    };

    std::vector<Index> negatives;
    for (Index c = 0; c < n; ++c) {
        const auto& ev = x.events[c];
        if (!ev.check) {
            continue;
        }
        const auto rn = rn_of(ev);
        if (!ev.positive) {
            negatives.push_back(c);
            Index d = max_dn_ending_before(ev.begin);
            if (d != kNone && *x.events[d].dn > rn) {
                out.push_back({"L1", x.name(c) + " lhd " + x.name(d) + " but " + x.name(d) +
                                         " < " + x.name(c)});
            }
        } else if (auto it = by_dn.find(rn + 1); it != by_dn.end()) {
            for (Index d : it->second) {
                if (x.precedes(c, d)) {
                    out.push_back({"L1", x.name(d) + " lhd " + x.name(c) + " but " + x.name(c) +
                                             " < " + x.name(d)});
                }
            }
        }
        const bool target = ev.positive && by_dn.count(rn + 1) > 0;
        const bool source = !ev.positive && max_dn > rn;
        if (target && source) {
            out.push_back({"L4", "lhd enters and leaves " + x.name(c)});
        }
    }

    // L3: every negative C with rn(C) <= rn(C') must end before a witnessed positive C'.
    std::sort(negatives.begin(), negatives.end(),
              [&](Index a, Index b) { return rn_of(x.events[a]) < rn_of(x.events[b]); });
    std::vector<Index> latest(negatives.size() + 1, kNone);
    for (std::size_t k = 0; k < negatives.size(); ++k) {
        Index best = latest[k];
        latest[k + 1] = (best == kNone || x.events[negatives[k]].end > x.events[best].end)
                            ? negatives[k]
                            : best;
    }
    for (Index c2 = 0; c2 < n; ++c2) {
        const auto& ev = x.events[c2];
        if (!ev.check || !ev.positive || by_dn.count(rn_of(ev) + 1) == 0) {
            continue;
        }
        auto k = std::upper_bound(negatives.begin(), negatives.end(), rn_of(ev),
                                  [&](std::uint64_t val, Index e) {
                                      return val < rn_of(x.events[e]);
                                  }) -
                 negatives.begin();
        Index c = latest[static_cast<std::size_t>(k)];
        if (c != kNone && !x.precedes(c, c2)) {
            const Index d = by_dn.at(rn_of(ev) + 1).front();
            out.push_back({"L3", x.name(c) + " lhd " + x.name(d) + " lhd " + x.name(c2) +
                                     " without " + x.name(c) + " < " + x.name(c2)});
        }
    }
    return out;
}

} // namespace mailbox
