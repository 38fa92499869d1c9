#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vng/cone_table.hpp"
#include "vng/rng.hpp"

namespace vng {

/// A concrete pair of portfolios showing that a condition fails for the cone
/// of `transition`. For "G4" the pair (a, b) is a member and (a2, b2) is the
/// dominated pair that should have been a member.
struct Violation {
    std::string condition;  // "G1", "G2", "G4" or "G5"
    std::string transition;
    Vec a, b;
    Vec a2, b2;
    std::string detail;
};

struct ValidationReport {
    bool g1_ok = true;
    bool g2_ok = true;
    bool g3_ok = true;  // implied by G5 with horizon l = 1
    bool g4_ok = true;
    bool g5_ok = true;
    /// Smallest M with |b| <= M|a| on every cone of the table.
    double M_bound = 0.0;
    /// Largest gamma with (e_i, gamma e) in every cone, for every asset i.
    double gamma = 0.0;
    std::vector<Violation> violations;

    bool ok() const { return g1_ok && g2_ok && g3_ok && g4_ok && g5_ok; }
};

struct ValidationOptions {
    std::size_t samples = 1000;  // random members per cone for G2 and G4
    std::uint64_t seed = 20240601;
};

/// gamma values at or below this are treated as zero.
inline constexpr double kGammaFloor = 1e-12;

struct MemberSample {
    Vec a, b;
};

/// Random member of G: a uniform on [0,1]^n, b a random direction scaled to a
/// uniform fraction of the boundary distance, or exactly to the boundary when
/// `on_boundary` holds.
MemberSample sample_member(const ConeSpec& cone, CounterRng& rng, bool on_boundary = false);

/// Exact |b| <= M|a| bound of one cone.
double growth_bound(const ConeSpec& cone);

/// max{ g : (e_i, g e) in G }, minimized over assets i.
double unit_growth(const ConeSpec& cone);

ValidationReport validate_assumptions(const ConeTable& table, const ValidationOptions& options = {});

/// True when the witness really violates its condition for the given table.
bool confirm_violation(const ConeTable& table, const ValidationReport& report, const Violation& v);

}  // namespace vng
