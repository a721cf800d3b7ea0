#include "mailbox/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace mailbox {

namespace {

constexpr std::string_view kMagic = "mailbox-trace 1";

std::vector<std::string_view> words_of(std::string_view line) {
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

template <typename T>
T number(std::string_view s, std::size_t line_no) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw ParseError("trace line " + std::to_string(line_no) + ": bad number `" +
                         std::string(s) + "`");
    }
    return v;
}

template <typename T>
T require(std::optional<T> v, std::string_view word, std::size_t line_no) {
    if (!v) {
        throw ParseError("trace line " + std::to_string(line_no) + ": unknown value `" +
                         std::string(word) + "`");
    }
    return *v;
}

std::string opt(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "-"; }
std::string opt8(const std::optional<std::uint8_t>& v) { return v ? std::to_string(*v) : "-"; }

} // namespace

std::string emit_trace(const Trace& t) {
    std::ostringstream out;
    out << kMagic << '\n'
        << "algorithm " << to_string(t.header.algorithm) << '\n'
        << "predicate " << to_string(t.header.predicate) << '\n'
        << "delivers " << t.header.delivers << '\n'
        << "checks " << t.header.checks << '\n'
        << "seed " << t.header.seed << '\n'
        << "actions " << t.actions.size() << '\n';
    for (const auto& a : t.actions) {
        out << a.seq << ' ' << to_string(a.actor) << ' ' << a.op_id << ' ' << to_string(a.op)
            << ' ' << unsigned{a.line} << ' ' << to_string(a.kind) << ' ' << to_string(a.reg)
            << ' ' << a.value << '\n';
    }
    out << "end\n";
    return out.str();
}

Trace parse_trace(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    }
    std::size_t k = 0;
    auto next = [&]() -> std::vector<std::string_view> {
        if (k >= lines.size()) {
            throw ParseError("trace ends early (missing `end`)");
        }
        return words_of(lines[k++]);
    };
    auto field = [&](std::string_view key) -> std::string_view {
        auto w = next();
        if (w.size() != 2 || w[0] != key) {
            throw ParseError("trace line " + std::to_string(k) + ": expected `" +
                             std::string(key) + " <value>`");
        }
        return w[1];
    };

    auto magic = next();
    if (magic.size() != 2 || magic[0] != "mailbox-trace" || magic[1] != "1") {
        throw ParseError("not a mailbox trace (expected `mailbox-trace 1`)");
    }
    Trace t;
    auto alg = field("algorithm");
    t.header.algorithm = require(parse_algorithm(alg), alg, k);
    auto pred = field("predicate");
    t.header.predicate = require(parse_predicate(pred), pred, k);
    t.header.delivers = number<std::uint32_t>(field("delivers"), k);
    t.header.checks = number<std::uint32_t>(field("checks"), k);
    t.header.seed = number<std::uint64_t>(field("seed"), k);
    const auto n = number<std::size_t>(field("actions"), k);
    t.actions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto w = next();
        if (w.size() != 8) {
            throw ParseError("trace line " + std::to_string(k) + ": expected 8 fields");
        }
        ActionRecord a;
        a.seq = number<std::int64_t>(w[0], k);
        a.actor = require(parse_actor(w[1]), w[1], k);
        a.op_id = number<std::uint32_t>(w[2], k);
        a.op = require(parse_operation(w[3]), w[3], k);
        const auto line = number<unsigned>(w[4], k);
        if (line > 255) {
            throw ParseError("trace line " + std::to_string(k) + ": bad code line");
        }
        a.line = static_cast<std::uint8_t>(line);
        a.kind = require(parse_action_kind(w[5]), w[5], k);
        a.reg = require(parse_register(w[6]), w[6], k);
        a.value = number<std::int64_t>(w[7], k);
        t.actions.push_back(a);
    }
    auto end = next();
    if (end.size() != 1 || end[0] != "end") {
        throw ParseError("trace line " + std::to_string(k) + ": expected `end`");
    }
    for (; k < lines.size(); ++k) {
        if (!words_of(lines[k]).empty()) {
            throw ParseError("trace line " + std::to_string(k + 1) + ": text after `end`");
        }
    }
    return t;
}

void write_trace_file(const std::string& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << emit_trace(trace);
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read trace file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

std::string format_event_table(const TraceVerdict& v) {
    const auto& s = v.structure;
    const auto& lin = v.linearization;
    std::ostringstream out;
    out << std::left << std::setw(6) << "event" << std::setw(15) << "kind" << std::setw(9)
        << "actions" << std::setw(34) << "omega" << std::setw(7) << "alpha" << std::setw(6)
        << "rho" << std::setw(8) << "prerem" << std::setw(7) << "color" << std::setw(4) << "rn"
        << std::setw(4) << "dn" << std::setw(10) << "polarity" << std::setw(9) << "verdict"
        << std::setw(8) << "remnum"
        << "delnum\n";
    for (EventIndex e = 0; e < s.events.size(); ++e) {
        const auto& ev = s.events[e];
        std::string actions;
        std::string omega;
        if (ev.action_count > 0) {
            actions = std::to_string(s.actions[ev.action_index[0]].seq) + ".." +
                      std::to_string(s.actions[ev.action_index[ev.action_count - 1]].seq);
        }
        for (auto i : ev.actions()) {
            if (s.omega[i] >= 0) {
                if (!omega.empty()) {
                    omega += ' ';
                }
                omega += std::string(to_string(s.actions[i].reg)) + "<-" +
                         s.name(s.owner[static_cast<std::size_t>(s.omega[i])]);
            }
        }
        auto ev_name = [&](const std::optional<EventIndex>& x) {
            return x ? s.name(*x) : std::string("-");
        };
        const bool ordered = !lin.order.empty() && e < lin.remnum.size();
        out << std::setw(6) << s.name(e) << std::setw(15) << to_string(ev.kind) << std::setw(9)
            << (actions.empty() ? "-" : actions) << std::setw(34) << (omega.empty() ? "-" : omega)
            << std::setw(7) << ev_name(ev.alpha) << std::setw(6) << ev_name(ev.rho) << std::setw(8)
            << ev_name(ev.prerem) << std::setw(7) << opt8(ev.color) << std::setw(4) << opt(ev.rn)
            << std::setw(4) << opt(ev.dn) << std::setw(10)
            << (ev.polarity ? (ev.positive() ? "positive" : "negative") : "-") << std::setw(9)
            << (ev.verdict ? (*ev.verdict ? "true" : "false") : "-") << std::setw(8)
            << (ordered && ev.is_check() ? std::to_string(lin.remnum[e]) : "-")
            << (ordered && ev.is_check() ? std::to_string(lin.delnum[e]) : "-") << '\n';
    }
    if (!lin.order.empty()) {
        out << "order:";
        for (auto e : lin.order) {
            out << ' ' << s.name(e);
        }
        out << '\n';
    }
    return out.str();
}

std::string format_verdict(const TraceVerdict& v) {
    std::ostringstream out;
    const auto lines = v.failure_lines();
    if (lines.empty()) {
        out << "verdict: pass\n";
    } else {
        out << "verdict: FAIL\n";
        for (const auto& l : lines) {
            out << "  " << l << '\n';
        }
    }
    return out.str();
}

std::string format_summary(const ExploreSummary& s) {
    std::ostringstream out;
    out << "schedules " << s.schedules << '\n'
        << "classes checked " << s.classes << '\n'
        << "violating schedules " << s.violating_schedules << '\n'
        << "violating classes " << s.violating_classes << '\n'
        << "max actions per schedule " << s.max_actions_seen << '\n'
        << "max actions per operation " << s.max_actions_per_op << '\n';
    out << "(Tp,Fp) seen:";
    for (int tp = 0; tp < 2; ++tp) {
        for (int fp = 0; fp < 3; ++fp) {
            if ((s.flags.postman_pairs >> (tp * 3 + fp)) & 1) {
                out << " (" << tp << ',' << fp << ')';
            }
        }
    }
    out << "\n(Th,Fh) seen:";
    for (int th = 0; th < 2; ++th) {
        for (int fh = 0; fh < 2; ++fh) {
            if ((s.flags.homeowner_pairs >> (th * 2 + fh)) & 1) {
                out << " (" << th << ',' << (fh ? "true" : "false") << ')';
            }
        }
    }
    out << "\ncheck reads:";
    for (int r = 0; r < kRegisterCount; ++r) {
        if ((s.flags.check_reads >> r) & 1) {
            out << ' ' << to_string(static_cast<Register>(r));
        }
    }
    out << '\n';
    if (s.flags.out_of_domain) {
        out << "flag value out of domain\n";
    }
    if (s.failures.empty()) {
        out << "failures none\n";
    } else {
        for (const auto& [k, n] : s.failures) {
            out << "failure " << k << ' ' << n << '\n';
        }
    }
    for (const auto& v : s.violations) {
        out << "violation " << v.choices << '\n';
        for (const auto& l : v.failures) {
            out << "  " << l << '\n';
        }
    }
    return out.str();
}

} // namespace mailbox
