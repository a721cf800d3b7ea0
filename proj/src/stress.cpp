#include "mailbox/stress.hpp"

#include "mailbox/protocol.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace mailbox {

namespace {

constexpr std::uint64_t kLow = 0xffffffffu;

constexpr std::uint64_t pack(std::uint64_t value, std::uint64_t stamp) {
    return (stamp << 32) | (value & kLow);
}

struct Shared {
    std::atomic<std::uint64_t> clock{1};
    // one word per Register; the queue word holds the published tail count
    std::array<std::atomic<std::uint64_t>, kRegisterCount> cells{};
    std::vector<Letter> slots;
    std::atomic<bool> abort{false};
};

struct Rec {
    std::uint64_t stamp = 0;
    std::uint64_t observed = 0; // stamp of the write a read returned
    std::uint32_t local_op = 0;
    ActionRecord action;
};

class Worker {
public:
    Worker(Shared& shared, Actor actor, std::uint64_t seed) : sh_(shared), actor_(actor), rng_(seed) {}

    void begin(Operation op) {
        op_ = op;
        ++local_op_;
    }

    void write(std::uint8_t line, Register reg, std::uint64_t value) {
        const auto stamp = sh_.clock.fetch_add(1);
        sh_.cells[static_cast<std::size_t>(reg)].store(pack(value, stamp));
        push(stamp, 0, line, ActionKind::Write, reg, static_cast<std::int64_t>(value));
    }

    std::uint64_t read(std::uint8_t line, Register reg) {
        const auto word = sh_.cells[static_cast<std::size_t>(reg)].load();
        const auto stamp = sh_.clock.fetch_add(1);
        const auto value = word & kLow;
        push(stamp, word >> 32, line, ActionKind::Read, reg, static_cast<std::int64_t>(value));
        return value;
    }

    void enqueue(std::uint8_t line, Letter letter) {
        sh_.slots[tail_] = letter;
        ++tail_;
        const auto stamp = sh_.clock.fetch_add(1);
        sh_.cells[static_cast<std::size_t>(Register::Queue)].store(pack(tail_, stamp));
        push(stamp, 0, line, ActionKind::Enqueue, Register::Queue, letter);
    }

    Letter dequeue(std::uint8_t line) {
        const auto word = sh_.cells[static_cast<std::size_t>(Register::Queue)].load();
        const auto stamp = sh_.clock.fetch_add(1);
        Letter letter = 0;
        if (head_ < (word & kLow)) {
            letter = sh_.slots[head_++];
        }
        push(stamp, word >> 32, line, ActionKind::Dequeue, Register::Queue, letter);
        return letter;
    }

    // Random yields and short spins so that operations overlap.
    void pause() {
        const auto r = rng_() & 63u;
        if (r < 4) {
            std::this_thread::yield();
        } else if (r < 6) {
            const auto spins = rng_() % 256;
            for (std::uint64_t i = 0; i < spins; ++i) {
                std::atomic_signal_fence(std::memory_order_seq_cst);
            }
        }
    }

    std::vector<Rec>& records() { return recs_; }

private:
    void push(std::uint64_t stamp, std::uint64_t observed, std::uint8_t line, ActionKind kind,
              Register reg, std::int64_t value) {
        Rec r;
        r.stamp = stamp;
        r.observed = observed;
        r.local_op = local_op_;
        r.action.actor = actor_;
        r.action.op = op_;
        r.action.line = line;
        r.action.kind = kind;
        r.action.reg = reg;
        r.action.value = value;
        recs_.push_back(r);
        pause();
    }

    Shared& sh_;
    Actor actor_;
    std::mt19937_64 rng_;
    std::vector<Rec> recs_;
    Operation op_ = Operation::Deliver;
    std::uint32_t local_op_ = 0;
    std::size_t tail_ = 0;
    std::size_t head_ = 0;
};

struct Attempt {
    bool clean = false;
    Trace trace;
    std::uint64_t checks = 0;
    std::uint64_t short_checks = 0;
};

Attempt attempt(const StressConfig& cfg, std::uint64_t seed) {
    Shared sh;
    sh.slots.assign(cfg.ops, 0);
    const RegisterFile init;
    sh.cells[static_cast<std::size_t>(Register::Dn)] = pack(init.dn, 0);
    sh.cells[static_cast<std::size_t>(Register::Tp)] = pack(init.tp, 0);
    sh.cells[static_cast<std::size_t>(Register::Fp)] = pack(init.fp, 0);
    sh.cells[static_cast<std::size_t>(Register::Rn)] = pack(init.rn, 0);
    sh.cells[static_cast<std::size_t>(Register::Th)] = pack(init.th, 0);
    sh.cells[static_cast<std::size_t>(Register::Fh)] = pack(init.fh, 0);
    sh.cells[static_cast<std::size_t>(Register::Queue)] = pack(0, 0);

    std::seed_seq seq{seed, std::uint64_t{0x6d61696c}};
    std::array<std::uint64_t, 2> seeds{};
    seq.generate(seeds.begin(), seeds.end());
    Worker postman(sh, Actor::Postman, seeds[0]);
    Worker homeowner(sh, Actor::Homeowner, seeds[1]);
    std::exception_ptr failure;
    Attempt out;

    std::thread p([&] {
        std::uint64_t dn = 0;
        for (std::uint32_t i = 0; i < cfg.ops && !sh.abort.load(); ++i) {
            postman.begin(Operation::Deliver);
            postman.enqueue(1, static_cast<Letter>(dn + 1));
            ++dn;
            postman.write(2, Register::Dn, dn);
            const auto t = postman.read(3, Register::Th);
            postman.write(4, Register::Tp, 1 - t);
            const auto rn = postman.read(5, Register::Rn);
            postman.write(6, Register::Fp, rn < dn ? 1 - t : 2);
            postman.pause();
        }
    });
    std::thread h([&] {
        const auto deadline = std::chrono::steady_clock::now() + cfg.timeout;
        std::uint64_t rn = 0;
        std::uint64_t polls = 0;
        while (rn < cfg.ops) {
            if ((++polls & 255u) == 0 && std::chrono::steady_clock::now() > deadline) {
                sh.abort = true;
                failure = std::make_exception_ptr(
                    StressTimeout("homeowner removed " + std::to_string(rn) + " of " +
                                  std::to_string(cfg.ops) + " letters before the deadline"));
                return;
            }
            homeowner.begin(Operation::Check);
            ++out.checks;
            bool positive = homeowner.read(1, Register::Fh) != 0;
            if (positive) {
                ++out.short_checks;
            } else {
                const auto th = homeowner.read(2, Register::Th);
                const auto tp = homeowner.read(3, Register::Tp);
                const auto fp = homeowner.read(4, Register::Fp);
                positive = check_verdict(false, static_cast<std::uint8_t>(th),
                                         static_cast<std::uint8_t>(tp),
                                         static_cast<std::uint8_t>(fp), cfg.predicate);
            }
            if (!positive) {
                std::this_thread::yield();
                continue;
            }
            homeowner.begin(Operation::Remove);
            homeowner.dequeue(1);
            ++rn;
            homeowner.write(2, Register::Rn, rn);
            const auto t = homeowner.read(3, Register::Tp);
            homeowner.write(4, Register::Th, t);
            const auto dn = homeowner.read(5, Register::Dn);
            homeowner.write(6, Register::Fh, rn < dn ? 1 : 0);
        }
    });
    p.join();
    h.join();
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<Rec> all;
    all.reserve(postman.records().size() + homeowner.records().size());
    all.insert(all.end(), postman.records().begin(), postman.records().end());
    all.insert(all.end(), homeowner.records().begin(), homeowner.records().end());
    std::sort(all.begin(), all.end(), [](const Rec& a, const Rec& b) { return a.stamp < b.stamp; });
    if (!all.empty() && all.back().stamp > kLow) {
        return out; // stamps no longer fit the packed word
    }

    std::array<std::uint64_t, kRegisterCount> last{};
    for (const auto& r : all) {
        const auto reg = static_cast<std::size_t>(r.action.reg);
        if (r.action.kind == ActionKind::Write || r.action.kind == ActionKind::Enqueue) {
            last[reg] = r.stamp;
        } else if (r.observed != last[reg]) {
            return out;
        }
    }

    // Operation ids in order of first action, after the two initial events.
    std::uint32_t next_id = 2;
    std::array<std::vector<std::uint32_t>, 2> ids;
    out.trace.actions.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        auto& r = all[i];
        auto& map = ids[static_cast<std::size_t>(r.action.actor)];
        if (map.size() < r.local_op) {
            map.resize(r.local_op, 0);
        }
        auto& id = map[r.local_op - 1];
        if (id == 0) {
            id = next_id++;
        }
        r.action.op_id = id;
        r.action.seq = static_cast<std::int64_t>(i);
        out.trace.actions.push_back(r.action);
    }
    out.clean = true;
    return out;
}

} // namespace

StressResult run_stress(const StressConfig& config) {
    if (config.ops == 0) {
        throw std::invalid_argument("ops must be at least 1");
    }
    StressResult res;
    for (std::uint32_t k = 0; k < config.max_attempts; ++k) {
        Attempt a = attempt(config, config.seed * 1000003u + k);
        ++res.attempts;
        if (!a.clean) {
            continue;
        }
        res.trace = std::move(a.trace);
        res.trace.header = TraceHeader{Algorithm::SixFour, config.predicate, config.ops,
                                       static_cast<std::uint32_t>(a.checks), config.seed};
        res.checks = a.checks;
        res.short_checks = a.short_checks;
        return res;
    }
    throw StressTimeout("no unambiguous recording in " + std::to_string(config.max_attempts) +
                        " attempts");
}

} // namespace mailbox
