#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocpst/cayley.hpp"
#include "ocpst/conjugacy.hpp"
#include "ocpst/group.hpp"
#include "ocpst/pst.hpp"

namespace ocpst {

/// A claimed PST certificate (group, C, z, tau) produced by a known construction.
/// Owns its group so that graphs built from it stay valid.
struct FamilyCertificate {
    std::shared_ptr<const GroupTable> group;
    std::shared_ptr<const ConjugacyData> conj;
    ConnectionSet conn;
    Element z = 0;
    double tau = 0.0;
    /// "2pi/3sqrt3", "pi/2", "pi/4" or "solved:<float>".
    std::string tau_tag;
    int claimed_size = 1;
    /// False for degenerate instances that only assert periodicity or nothing.
    bool pst_claim = true;
    std::string source;
    std::vector<std::string> notes;

    OrientedCayleyGraph graph() const { return OrientedCayleyGraph(*group, *conj, conn); }
};

/// Exact value of a tau tag; "solved:<x>" parses x.
double tau_from_tag(const std::string& tag);

/// Z_3^n with z = sum of C, tau = 2 pi / (3 sqrt 3).
FamilyCertificate family_z3n(int n, std::span<const Element> c);
/// Z_4^n with z = 2 sum of C, tau = pi / 2; a PST claim only when the sum has order 4.
FamilyCertificate family_z4n(int n, std::span<const Element> c);

/// C = E u {z} with E the preimage of a basis of G/Z.  With a seed the basis
/// is a random invertible matrix over F_3, otherwise the standard basis.
FamilyCertificate family_extraspecial3(int n, int exponent_type = 3, std::optional<std::uint64_t> basis_seed = {});

/// C = {x^(2^(n-3)), x^(2^(n-4)) s, x^(2^(n-2)+2^(n-4)) s} u {x^(4k+1)}, z = x^(2^(n-3)), tau = pi/4.
FamilyCertificate family_m2(int n);

/// Cay(Z_8, {1,2,5}); tau was obtained from the solver and frozen.
FamilyCertificate z8_example();
/// Frozen solver output for z8_example.
inline constexpr double kZ8SolvedTau = 0.78539816339744828;
inline constexpr Element kZ8Target = 2;

/// M_2(4) with C = {x^2, x s, x^5 s} and candidate target x^2.  Carries no
/// claim; the verdict is whatever the criterion and oracle report.
FamilyCertificate m2_remark_fixture();

/// Lift of C to G wr S_n: tuples with one coordinate in C and trivial
/// permutation, plus (x; pi) with pi an n-cycle and cycle product in C.
struct LiftedSet {
    std::shared_ptr<const GroupTable> group;
    std::vector<Element> single;  // first family
    std::vector<Element> cyclic;  // second family
    std::vector<Element> elements; // sorted union
    Element target = 0;            // (z, ..., z; id)
};

LiftedSet lift_connection_set(const GroupTable& base, std::span<const Element> c, Element z, int n,
                              const BuildOptions& opts = {});

/// Lifted certificate with the base time and the base claimed size.
FamilyCertificate wreath_lift(const FamilyCertificate& base, int n, const BuildOptions& opts = {});

/// Undirected case: base K_2 = Cay(Z_2, {1}) with PST 0 -> 1 at pi/2, lifted to Z_2 wr S_2.
struct UndirectedFixture {
    std::shared_ptr<const GroupTable> group;
    std::vector<Element> elements;
    Element target = 0;
    double tau = 0.0;
};

UndirectedFixture undirected_wreath_fixture(int base_order = 4, std::vector<Element> base_set = {1, 3},
                                            Element base_target = 2, double tau = 1.5707963267948966, int n = 2);

/// All certificates shipped in the default verification run.
std::vector<FamilyCertificate> shipped_certificates();

nlohmann::json certificate_json(const FamilyCertificate& cert);
/// Rebuilds the certificate from a fixture document and checks it against the
/// stored group tag, classes, z and tau tag.
FamilyCertificate certificate_from_json(const nlohmann::json& doc, const BuildOptions& opts = {});

/// Criterion check of the claim stored in an imported table: the connection
/// classes must be oriented (no identity, real or inverse-paired class).
struct ImportedVerdict {
    bool oriented = false;
    std::string orientation_issue;
    double tau = 0.0;
    PSTCheck check;
};

ImportedVerdict verify_imported_claim(const ImportedTable& imported, double tol = 1e-8);

/// Parses "z:8", "z4^2", "m2:5", "extraspecial3:1:3", "sym:3", "wreath(z:3,2)".
GroupTable build_from_name(const std::string& name, const BuildOptions& opts = {});

} // namespace ocpst
