#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/rng.hpp"

namespace matchforge {

// One recorded decision: at `step` (1-based), pick `index` from the candidate
// list, which is always in ascending canonical order.
struct ScriptEntry {
    std::size_t step = 0;
    std::size_t index = 0;
    friend bool operator==(const ScriptEntry&, const ScriptEntry&) = default;
};

struct Policy {
    enum class Kind { first, random, scripted, exhaustive };

    Kind kind = Kind::first;
    std::uint64_t seed = 0;
    std::vector<ScriptEntry> script;

    static Policy first() { return {}; }
    static Policy random(std::uint64_t seed) { return {Kind::random, seed, {}}; }
    static Policy scripted(std::vector<ScriptEntry> s) { return {Kind::scripted, 0, std::move(s)}; }
    static Policy exhaustive() { return {Kind::exhaustive, 0, {}}; }

    // "first" | "random:<seed>" | "script:<step>:<idx>,<step>:<idx>,..." | "exhaustive"
    static Policy parse(const std::string& spec) {
        if (spec == "first") return first();
        if (spec == "exhaustive") return exhaustive();
        if (spec.rfind("random:", 0) == 0) {
            std::string s = spec.substr(7);
            if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
                throw InputError("bad random policy seed in '" + spec + "'");
            return random(std::stoull(s));
        }
        if (spec == "script" || spec == "script:") return scripted({});
        if (spec.rfind("script:", 0) == 0) {
            std::vector<ScriptEntry> entries;
            std::stringstream ss(spec.substr(7));
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto colon = item.find(':');
                if (colon == std::string::npos) throw InputError("script entry '" + item + "' is not step:index");
                std::string a = item.substr(0, colon);
                std::string b = item.substr(colon + 1);
                if (a.empty() || b.empty() || a.find_first_not_of("0123456789") != std::string::npos ||
                    b.find_first_not_of("0123456789") != std::string::npos)
                    throw InputError("script entry '" + item + "' is not step:index");
                entries.push_back({std::stoull(a), std::stoull(b)});
            }
            return scripted(std::move(entries));
        }
        throw InputError("unknown policy '" + spec + "'");
    }

    std::string str() const {
        switch (kind) {
            case Kind::first: return "first";
            case Kind::random: return "random:" + std::to_string(seed);
            case Kind::exhaustive: return "exhaustive";
            case Kind::scripted: {
                std::string out = "script:";
                for (std::size_t i = 0; i < script.size(); ++i) {
                    if (i) out += ',';
                    out += std::to_string(script[i].step) + ":" + std::to_string(script[i].index);
                }
                return out;
            }
        }
        return {};
    }
};

// Resolves choice points for one run. Only choice points with two or more
// candidates consult the policy; forced moves never consume script entries.
class Chooser {
public:
    explicit Chooser(const Policy& p) : policy_(p), rng_(p.seed) {
        if (p.kind == Policy::Kind::exhaustive)
            throw InputError("the exhaustive policy is only meaningful for worst-case search");
    }

    std::size_t choose(std::size_t step, std::size_t count) {
        if (count == 0) throw InternalError("choice point with no candidates");
        if (count == 1) return 0;
        switch (policy_.kind) {
            case Policy::Kind::first: return 0;
            case Policy::Kind::random: return rng_.index(count);
            case Policy::Kind::scripted: {
                if (next_ >= policy_.script.size())
                    throw InputError("script exhausted at step " + std::to_string(step));
                const ScriptEntry& e = policy_.script[next_++];
                if (e.step != step)
                    throw InputError("script entry for step " + std::to_string(e.step) +
                                     " consumed at step " + std::to_string(step));
                if (e.index >= count)
                    throw InputError("script index " + std::to_string(e.index) + " out of range at step " +
                                     std::to_string(step) + " (" + std::to_string(count) + " candidates)");
                return e.index;
            }
            case Policy::Kind::exhaustive: break;
        }
        throw InternalError("unreachable policy kind");
    }

    void finish() const {
        if (policy_.kind == Policy::Kind::scripted && next_ != policy_.script.size())
            throw InputError("script has " + std::to_string(policy_.script.size() - next_) +
                             " unused entries after the run ended");
    }

private:
    Policy policy_;
    Rng rng_;
    std::size_t next_ = 0;
};

}  // namespace matchforge
