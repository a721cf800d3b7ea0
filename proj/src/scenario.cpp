#include "mailbox/scenario.hpp"

#include "mailbox/protocol.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mailbox {

namespace {

// Keep in sync with scenarios/agl_counterexample.scn.
constexpr std::string_view kAglCounterexample = R"(# A long check that tests only tp != th returns true with two letters delivered
# and two removed. The full predicate makes the same check negative.
postman deliver
homeowner check
postman deliver lines 1-2
homeowner remove
homeowner check
homeowner remove
postman deliver lines 3-6
homeowner check
)";

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::optional<std::uint8_t> parse_line_number(std::string_view s) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 1 || v > 6) {
        return std::nullopt;
    }
    return static_cast<std::uint8_t>(v);
}

std::uint8_t last_code_line(Operation op) { return op == Operation::Check ? 5 : 6; }

} // namespace

Scenario parse_scenario(std::string_view text, std::string name) {
    Scenario sc;
    sc.name = std::move(name);
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto words = split_words(line);
        if (words.empty()) {
            continue;
        }
        auto bad = [&](const std::string& why) {
            return ParseError("scenario line " + std::to_string(line_no) + ": " + why);
        };
        if (words.size() != 2 && words.size() != 4) {
            throw bad("expected `<actor> <operation> [lines a-b]`");
        }
        Directive d;
        d.source_line = line_no;
        auto actor = parse_actor(words[0]);
        auto op = parse_operation(words[1]);
        if (!actor) {
            throw bad("unknown actor `" + std::string(words[0]) + "`");
        }
        if (!op) {
            throw bad("unknown operation `" + std::string(words[1]) + "`");
        }
        if ((*op == Operation::Deliver) != (*actor == Actor::Postman)) {
            throw bad(std::string(to_string(*actor)) + " does not run " +
                      std::string(to_string(*op)));
        }
        d.actor = *actor;
        d.op = *op;
        if (words.size() == 4) {
            if (words[2] != "lines") {
                throw bad("expected `lines`");
            }
            auto range = words[3];
            auto dash = range.find('-');
            auto a = parse_line_number(range.substr(0, dash));
            auto b = dash == std::string_view::npos ? a : parse_line_number(range.substr(dash + 1));
            if (!a || !b || *a > *b || *b > last_code_line(*op)) {
                throw bad("bad line range `" + std::string(range) + "`");
            }
            d.first_line = a;
            d.last_line = b;
        }
        sc.steps.push_back(d);
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read scenario file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    if (auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) {
        name.resize(dot);
    }
    return parse_scenario(buf.str(), name);
}

std::vector<std::string> bundled_scenarios() { return {"agl_counterexample"}; }

std::optional<Scenario> bundled_scenario(std::string_view name) {
    if (name == "agl_counterexample") {
        return parse_scenario(kAglCounterexample, "agl_counterexample");
    }
    return std::nullopt;
}

Trace replay(const Scenario& scenario, Algorithm algorithm, Predicate predicate) {
    ProtocolState s = init_state(algorithm, predicate);
    Trace t;
    t.header.algorithm = algorithm;
    t.header.predicate = predicate;

    auto next_line = [&](Actor a) -> std::uint8_t {
        return a == Actor::Postman ? s.postman.pc : s.homeowner.pc;
    };
    auto busy = [&](Actor a) { return a == Actor::Postman ? !s.postman_idle() : !s.homeowner_idle(); };
    auto current_op = [&](Actor a) {
        if (a == Actor::Postman) {
            return Operation::Deliver;
        }
        return s.homeowner.activity == HomeownerActivity::Check ? Operation::Check
                                                                : Operation::Remove;
    };

    for (const auto& d : scenario.steps) {
        auto illegal = [&](const std::string& why) {
            return IllegalDirective(scenario.name + " line " + std::to_string(d.source_line) + ": " +
                                    std::string(to_string(d.actor)) + " " +
                                    std::string(to_string(d.op)) + ": " + why);
        };
        if (!busy(d.actor)) {
            if (d.first_line && *d.first_line != 1) {
                throw illegal("no operation in progress to continue");
            }
            auto step = enabled_steps(s).for_actor(d.actor);
            if (!step || step->kind != StepKind::Begin || step->op != d.op) {
                throw illegal(d.op == Operation::Remove
                                  ? "a remove needs a positive check right before it"
                                  : "the homeowner owes a remove first");
            }
            apply_step(s, *step);
            if (d.op == Operation::Deliver) {
                ++t.header.delivers;
            } else if (d.op == Operation::Check) {
                ++t.header.checks;
            }
        } else {
            if (current_op(d.actor) != d.op) {
                throw illegal("the process is in the middle of another operation");
            }
            if (d.first_line && *d.first_line != next_line(d.actor)) {
                throw illegal("the next line to run is " + std::to_string(next_line(d.actor)));
            }
        }
        const std::uint8_t last = d.last_line.value_or(last_code_line(d.op));
        while (busy(d.actor) && next_line(d.actor) <= last) {
            auto step = enabled_steps(s).for_actor(d.actor);
            if (!step || step->kind != StepKind::Advance) {
                throw illegal("step not enabled");
            }
            t.actions.push_back(*apply_step(s, *step));
        }
    }
    return t;
}

} // namespace mailbox
