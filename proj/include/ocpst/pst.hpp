#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocpst/cayley.hpp"
#include "ocpst/characters.hpp"
#include "ocpst/conjugacy.hpp"
#include "ocpst/group.hpp"

namespace ocpst {

enum class CertProvenance { Criterion, Oracle, Both };

const char* to_string(CertProvenance p);

struct PSTCertificate {
    Element z = 0;
    double tau = 0.0;
    /// max over characters of |chi(z)/chi(e) - exp(tau theta_chi)|.
    double residual = 0.0;
    std::vector<double> per_character;
    int phase = 1;
    CertProvenance provenance = CertProvenance::Criterion;
    /// Candidate index k of tau = (alpha + 2 pi k) / t for the reference character.
    long long k = 0;
    std::optional<double> oracle_fidelity;
};

struct PSTCheck {
    bool accepted = false;
    double residual = 0.0;
    std::vector<double> per_character;
    std::string reason;
};

/// Class-level criterion: z given by its (central) class, C by class indices.
/// Usable on imported tables where no group table exists.
PSTCheck check_pst_classes(const CharacterTable& table, std::span<const int> conn_classes, int z_class, double tau,
                           double tol = 1e-8);

PSTCheck check_pst_at(const OrientedCayleyGraph& graph, const CharacterTable& table, Element z, double tau,
                      double tol = 1e-8);

/// PST a -> b reduces to e -> b a^-1.
PSTCheck check_pst_pair(const OrientedCayleyGraph& graph, const CharacterTable& table, Element a, Element b,
                        double tau, double tol = 1e-8);

struct SolveOptions {
    /// Candidate bound; 0 means 4 |G|.
    long long k_bound = 0;
    double tol = 1e-8;
    /// Allow z = e (periodicity).
    bool period_mode = false;
};

struct SolveResult {
    std::optional<PSTCertificate> certificate;
    double best_residual = 0.0;
    double best_tau = 0.0;
    long long k_bound = 0;
    std::size_t candidates = 0;
    std::string reason;
};

SolveResult solve_pst_time(const OrientedCayleyGraph& graph, const CharacterTable& table, Element z,
                           const SolveOptions& opts = {});

struct MSTReport {
    std::vector<Element> S_e; // sorted
    Element generator = 0;
    int size = 1;
    std::optional<double> minimal_time;
    /// One certificate per nonidentity member, indexed like S_e minus e.
    std::vector<PSTCertificate> certificates;
    long long k_bound = 0;
};

/// Throws InvariantBreach when S_e is not <z_min>, its size is outside
/// {2, 3, 4, 6}, or the power law fails.
MSTReport compute_S_e(const OrientedCayleyGraph& graph, const CharacterTable& table, const SolveOptions& opts = {});

struct RationalTime {
    bool found = false;
    std::string multiplier; // "pi/sqrt3" or "pi"
    long long p = 0;
    long long q = 1;
    double error = 0.0;
};

RationalTime time_rationality_check(double tau, int size, long long max_q = 10000, double tol = 1e-8);

struct NonexistenceWitness {
    Element z = 0;
    std::vector<int> characters;
};

std::optional<NonexistenceWitness> nonexistence_witness(const ConjugacyData& conj, const CharacterTable& table,
                                                        const GaloisData& galois, Element z);

struct SolvableExclusion {
    bool solvable = false;
    std::vector<std::size_t> derived_orders;
    bool size6_excluded = false;
    std::string message;
};

SolvableExclusion solvable_exclusion_report(const GroupTable& group);

/// Cosets g S_e; empty when the report carries no PST.
std::vector<std::vector<Element>> partition_into_S_classes(const GroupTable& group, const MSTReport& report);

/// |U(tau)[z][e]| from the dense walk, with the phase of that entry.
struct OracleCheck {
    double fidelity = 0.0;
    int phase = 0;
};

OracleCheck oracle_check(const OrientedCayleyGraph& graph, Element z, double tau);

struct SweepOptions {
    int max_classes = 64;
    std::size_t max_order = 16;
    int threads = 1;
    SolveOptions solve;
};

struct SweepEntry {
    std::vector<int> classes;
    MSTReport report;
};

struct SweepReport {
    std::size_t sets = 0;
    /// histogram[s] = number of connection sets with |S_e| = s (s = 1 means no PST).
    std::vector<std::size_t> histogram = std::vector<std::size_t>(7, 0);
    std::vector<SweepEntry> certified; // enumeration order
};

/// compute_S_e over every canonical oriented class union; refuses groups above max_order.
SweepReport sweep_connection_sets(const GroupTable& group, const ConjugacyData& conj, const CharacterTable& table,
                                  const SweepOptions& opts = {});

nlohmann::json verdict_json(const OrientedCayleyGraph& graph, const MSTReport& report,
                            const std::optional<RationalTime>& rational, std::optional<double> oracle_fidelity,
                            const std::vector<NonexistenceWitness>& witnesses);

} // namespace ocpst
