#include "mailbox/explorer.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <random>
#include <string_view>

namespace mailbox {

std::uint32_t default_max_actions() {
    constexpr std::uint32_t kDefault = 128;
    const char* env = std::getenv("MAILBOX_MAX_ACTIONS");
    if (env == nullptr) {
        return kDefault;
    }
    std::string_view s(env);
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v == 0) {
        return kDefault;
    }
    return v;
}

void ExploreSummary::merge(ExploreSummary&& o, std::uint32_t max_examples) {
    schedules += o.schedules;
    classes += o.classes;
    violating_schedules += o.violating_schedules;
    violating_classes += o.violating_classes;
    for (const auto& [k, n] : o.failures) {
        failures[k] += n;
    }
    flags.merge(o.flags);
    max_actions_seen = std::max(max_actions_seen, o.max_actions_seen);
    max_actions_per_op = std::max(max_actions_per_op, o.max_actions_per_op);
    for (auto& v : o.violations) {
        violations.push_back(std::move(v));
    }
    std::sort(violations.begin(), violations.end(),
              [](const Violation& a, const Violation& b) { return a.choices < b.choices; });
    if (violations.size() > max_examples) {
        violations.resize(max_examples);
    }
}

std::vector<Actor> enabled_actors(const ProtocolState& s) {
    std::vector<Actor> out;
    const auto steps = enabled_steps(s);
    for (Actor a : {Actor::Postman, Actor::Homeowner}) {
        if (steps.for_actor(a)) {
            out.push_back(a);
        }
    }
    return out;
}

ActionRecord fused_step(ProtocolState& s, Actor actor) {
    auto step = enabled_steps(s).for_actor(actor);
    if (!step) {
        throw StepError(std::string(to_string(actor)) + " has no enabled step");
    }
    if (step->kind == StepKind::Begin) {
        apply_step(s, *step);
        step = enabled_steps(s).for_actor(actor);
    }
    return *apply_step(s, *step);
}

ProtocolState initial_state(const ExploreConfig& config) {
    return init_state(config.algorithm, config.predicate,
                      DriverBudget{config.max_delivers, config.max_checks});
}

namespace {

bool is_first(const ActionRecord& a) { return a.line == 1; }

bool is_last(const ActionRecord& a, Algorithm alg) {
    const bool six_four = alg == Algorithm::SixFour;
    switch (a.op) {
    case Operation::Deliver:
        return a.line == (six_four ? 6 : 3);
    case Operation::Remove:
        return a.line == (six_four ? 6 : 1);
    case Operation::Check:
        return six_four ? (a.line == 4 || (a.line == 1 && a.value == 1)) : true;
    }
    return false;
}

} // namespace

bool dependent(const ActionRecord& a, const ActionRecord& b, Algorithm algorithm) {
    if (a.actor == b.actor) {
        return true;
    }
    if (a.reg == b.reg && (a.kind != ActionKind::Read || b.kind != ActionKind::Read)) {
        return true;
    }
    const bool fa = is_first(a);
    const bool fb = is_first(b);
    return (fa && fb) || (fa && is_last(b, algorithm)) || (fb && is_last(a, algorithm));
}

std::uint64_t class_size(const std::vector<ActionRecord>& actions, Algorithm algorithm) {
    std::vector<const ActionRecord*> ps;
    std::vector<const ActionRecord*> hs;
    // need_h[i]: homeowner actions that must precede postman action i (1-based), and vice versa
    std::vector<std::size_t> need_h{0};
    std::vector<std::size_t> need_p{0};
    for (const auto& a : actions) {
        auto& own = a.actor == Actor::Postman ? ps : hs;
        const auto& other = a.actor == Actor::Postman ? hs : ps;
        auto& need = a.actor == Actor::Postman ? need_h : need_p;
        std::size_t k = other.size();
        while (k > 0 && !dependent(a, *other[k - 1], algorithm)) {
            --k;
        }
        need.push_back(k);
        own.push_back(&a);
    }
    const std::size_t m = ps.size();
    const std::size_t n = hs.size();
    std::vector<std::uint64_t> f((m + 1) * (n + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::uint64_t& { return f[i * (n + 1) + j]; };
    at(0, 0) = 1;
    for (std::size_t i = 0; i <= m; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            if (i == 0 && j == 0) {
                continue;
            }
            std::uint64_t v = 0;
            if (i > 0 && need_h[i] <= j) {
                v += at(i - 1, j);
            }
            if (j > 0 && need_p[j] <= i) {
                v += at(i, j - 1);
            }
            at(i, j) = v;
        }
    }
    return at(m, n);
}

namespace {

std::string choice_string(const std::vector<ActionRecord>& actions) {
    std::string s;
    s.reserve(actions.size());
    for (const auto& a : actions) {
        s.push_back(a.actor == Actor::Postman ? 'p' : 'h');
    }
    return s;
}

TraceHeader header_of(const ExploreConfig& c) {
    return TraceHeader{c.algorithm, c.predicate, c.max_delivers, c.max_checks, c.seed};
}

void record(ExploreSummary& s, const ExploreConfig& config, Trace&& trace, std::uint64_t weight) {
    const auto v = check_trace(trace, config.mode);
    s.schedules += weight;
    s.classes += 1;
    s.flags.merge(v.facts.flags);
    s.max_actions_seen =
        std::max<std::uint32_t>(s.max_actions_seen, static_cast<std::uint32_t>(trace.actions.size()));
    s.max_actions_per_op = std::max(s.max_actions_per_op, v.facts.max_actions_per_op);
    if (v.ok()) {
        return;
    }
    s.violating_schedules += weight;
    s.violating_classes += 1;
    v.tally(s.failures, weight);
    if (config.max_examples == 0) {
        return;
    }
    auto choices = choice_string(trace.actions);
    auto less = [](const Violation& a, const Violation& b) { return a.choices < b.choices; };
    if (s.violations.size() == config.max_examples && !(choices < s.violations.back().choices)) {
        return;
    }
    Violation viol{std::move(choices), std::move(trace), v.failure_lines()};
    auto pos = std::upper_bound(s.violations.begin(), s.violations.end(), viol, less);
    s.violations.insert(pos, std::move(viol));
    if (s.violations.size() > config.max_examples) {
        s.violations.pop_back();
    }
}

struct Search {
    const ExploreConfig& config;
    bool reduce;
    ExploreSummary summary;
    std::vector<ActionRecord> stack;

    void leaf() {
        const std::uint64_t weight = reduce ? class_size(stack, config.algorithm) : 1;
        record(summary, config, Trace{header_of(config), stack}, weight);
    }

    // Extensions of the current prefix that stay in normal form.
    template <typename F>
    bool for_each_child(const ProtocolState& s, F&& visit) {
        const auto steps = enabled_steps(s);
        bool any = false;
        for (Actor a : {Actor::Postman, Actor::Homeowner}) {
            if (!steps.for_actor(a)) {
                continue;
            }
            any = true;
            if (stack.size() >= config.max_actions) {
                throw BoundExceeded("a schedule exceeds " + std::to_string(config.max_actions) +
                                    " actions");
            }
            ProtocolState next = s;
            ActionRecord rec = fused_step(next, a);
            if (reduce && a == Actor::Postman && !stack.empty() &&
                stack.back().actor == Actor::Homeowner &&
                !dependent(rec, stack.back(), config.algorithm)) {
                continue;
            }
            stack.push_back(rec);
            visit(next);
            stack.pop_back();
        }
        return any;
    }

    void dfs(const ProtocolState& s) {
        if (!for_each_child(s, [&](const ProtocolState& next) { dfs(next); })) {
            leaf();
        }
    }
};

struct Prefix {
    ProtocolState state;
    std::vector<ActionRecord> stack;
};

} // namespace

ExploreSummary explore_reference(const ExploreConfig& config) {
    Search search{config, false, {}, {}};
    search.dfs(initial_state(config));
    return std::move(search.summary);
}

ExploreSummary explore(const ExploreConfig& config) {
    constexpr std::size_t kFrontierDepth = 10;
    Search top{config, true, {}, {}};
    std::vector<Prefix> frontier;
    auto expand = [&](auto&& self, const ProtocolState& s) -> void {
        if (top.stack.size() == kFrontierDepth) {
            frontier.push_back({s, top.stack});
            return;
        }
        if (!top.for_each_child(s, [&](const ProtocolState& next) { self(self, next); })) {
            top.leaf();
        }
    };
    expand(expand, initial_state(config));

    std::vector<ExploreSummary> parts(frontier.size());
    std::vector<std::exception_ptr> errors(frontier.size());
    const auto count = static_cast<std::int64_t>(frontier.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        auto& item = frontier[static_cast<std::size_t>(i)];
        Search worker{config, true, {}, std::move(item.stack)};
        try {
            worker.dfs(item.state);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
        parts[static_cast<std::size_t>(i)] = std::move(worker.summary);
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    ExploreSummary total = std::move(top.summary);
    for (auto& p : parts) {
        total.merge(std::move(p), config.max_examples);
    }
    return total;
}

RandomWalkResult random_walk(const ExploreConfig& config) {
    RandomWalkResult out;
    std::mt19937_64 rng(config.seed);
    for (std::uint32_t run = 0; run < config.runs; ++run) {
        ProtocolState s = initial_state(config);
        Trace t{header_of(config), {}};
        for (;;) {
            const auto actors = enabled_actors(s);
            if (actors.empty()) {
                break;
            }
            if (t.actions.size() >= config.max_actions) {
                throw BoundExceeded("a random schedule exceeds " +
                                    std::to_string(config.max_actions) + " actions");
            }
            std::uniform_int_distribution<std::size_t> pick(0, actors.size() - 1);
            t.actions.push_back(fused_step(s, actors[pick(rng)]));
        }
        out.choices.push_back(choice_string(t.actions));
        out.traces.push_back(t);
        record(out.summary, config, std::move(t), 1);
    }
    return out;
}

Trace run_schedule(const ExploreConfig& config, const std::string& choices) {
    ProtocolState s = initial_state(config);
    Trace t{header_of(config), {}};
    for (char c : choices) {
        if (c != 'p' && c != 'h') {
            throw std::invalid_argument("choices must be 'p' or 'h'");
        }
        t.actions.push_back(fused_step(s, c == 'p' ? Actor::Postman : Actor::Homeowner));
    }
    return t;
}

} // namespace mailbox
