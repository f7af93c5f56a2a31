#pragma once

#include "bhs/audit.hpp"
#include "bhs/bhs32.hpp"
#include "bhs/bhs33.hpp"
#include "bhs/bhs42.hpp"
#include "bhs/scheduler.hpp"

#include <memory>
#include <string>

namespace bhs {

inline std::unique_ptr<Controller> make_controller(Algorithm algo, int magic_number = kDefaultMagicNumber) {
    switch (algo) {
        case Algorithm::BHS33: return std::make_unique<Bhs33>();
        case Algorithm::BHS42: return std::make_unique<Bhs42>();
        case Algorithm::BHS32: return std::make_unique<Bhs32>(magic_number);
    }
    throw UsageError("unknown algorithm");
}

/// Rejects a BHS32 scenario whose big-steps are shorter than the audited minimum.
inline void require_feasible_magic_number(const Scenario& s) {
    if (s.algorithm != Algorithm::BHS32) return;
    const int need = magic_number_audit().minimal();
    if (s.magic_number < need)
        throw UsageError("magic number " + std::to_string(s.magic_number) + " is below the audited minimum " +
                         std::to_string(need));
}

inline Simulation::Factory controller_factory(const Scenario& s) {
    require_feasible_magic_number(s);
    return [algo = s.algorithm, d = s.magic_number] { return make_controller(algo, d); };
}

}  // namespace bhs
