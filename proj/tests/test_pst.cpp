#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ocpst/cayley.hpp"
#include "ocpst/characters.hpp"
#include "ocpst/conjugacy.hpp"
#include "ocpst/error.hpp"
#include "ocpst/families.hpp"
#include "ocpst/pst.hpp"
#include "ocpst/walk.hpp"

using namespace ocpst;

namespace {

const double kPi = std::numbers::pi;
const double kTau3 = 2.0 * kPi / (3.0 * std::sqrt(3.0));

struct Loaded {
    GroupTable group;
    ConjugacyData conj;
    CharacterTable table;
    explicit Loaded(GroupTable g) : group(std::move(g)), conj(conjugacy(group)), table(character_table(group, conj)) {}
};

} // namespace

TEST(Pst, CriterionOnTriangle) {
    Loaded s(build_cyclic(3));
    const OrientedCayleyGraph graph(s.group, s.conj, require_connection_set(s.conj, std::vector<int>{1}));
    const auto ok = check_pst_at(graph, s.table, 1, kTau3);
    EXPECT_TRUE(ok.accepted);
    EXPECT_LT(ok.residual, 1e-12);
    EXPECT_EQ(ok.per_character.size(), 3u);
    EXPECT_FALSE(check_pst_at(graph, s.table, 2, kTau3).accepted);
    EXPECT_TRUE(check_pst_at(graph, s.table, 2, 2.0 * kTau3).accepted);
    EXPECT_FALSE(check_pst_at(graph, s.table, 1, kTau3 + 1e-3).accepted);
    EXPECT_TRUE(check_pst_pair(graph, s.table, 1, 2, kTau3).accepted);
}

TEST(Pst, NonCentralTargetRejected) {
    Loaded s(build_symmetric(3));
    int three = -1;
    for (int c = 1; c < static_cast<int>(s.conj.class_count()); ++c)
        if (s.conj.class_size(c) == 2) three = c;
    const auto check = check_pst_classes(s.table, std::vector<int>{}, three, 1.0);
    EXPECT_FALSE(check.accepted);
    EXPECT_EQ(check.reason, "target is not central");
    EXPECT_TRUE(std::isinf(check.residual));
}

TEST(Pst, SolverOnZ8) {
    const auto cert = z8_example();
    const auto table = character_table(*cert.group, *cert.conj);
    const auto graph = cert.graph();
    const auto res = solve_pst_time(graph, table, kZ8Target);
    ASSERT_TRUE(res.certificate.has_value());
    EXPECT_NEAR(res.certificate->tau, kZ8SolvedTau, 1e-12);
    EXPECT_EQ(res.k_bound, 32);
    // first oracle hit from 0 is the same vertex at the same time
    const auto op = build_operator(adjacency_matrix(graph));
    const auto scan = scan_pst(op, 0);
    ASSERT_FALSE(scan.empty());
    EXPECT_EQ(scan.front().target, kZ8Target);
    EXPECT_NEAR(scan.front().t, kZ8SolvedTau, 1e-7);

    const auto miss = solve_pst_time(graph, table, 1);
    EXPECT_FALSE(miss.certificate.has_value());
    EXPECT_FALSE(miss.reason.empty());
    EXPECT_THROW(solve_pst_time(graph, table, 0), Error);
    SolveOptions period;
    period.period_mode = true;
    const auto back = solve_pst_time(graph, table, 0, period);
    ASSERT_TRUE(back.certificate.has_value());
    EXPECT_NEAR(back.certificate->tau, 4.0 * kZ8SolvedTau, 1e-9);
}

TEST(Pst, MultipleStateTransferOnZ8) {
    const auto cert = z8_example();
    const auto table = character_table(*cert.group, *cert.conj);
    const auto rep = compute_S_e(cert.graph(), table);
    EXPECT_EQ(rep.S_e, (std::vector<Element>{0, 2, 4, 6}));
    EXPECT_EQ(rep.size, 4);
    EXPECT_TRUE(rep.generator == 2 || rep.generator == 6);
    ASSERT_TRUE(rep.minimal_time.has_value());
    const auto parts = partition_into_S_classes(*cert.group, rep);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].size(), 4u);
    EXPECT_EQ(parts[1].size(), 4u);
    const auto o = oracle_check(cert.graph(), rep.generator, *rep.minimal_time);
    EXPECT_NEAR(o.fidelity, 1.0, 1e-9);
    EXPECT_EQ(o.phase, 1);
}

TEST(Pst, TimeRationality) {
    auto r = time_rationality_check(kTau3, 3);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.multiplier, "pi/sqrt3");
    EXPECT_EQ(r.p, 2);
    EXPECT_EQ(r.q, 3);
    r = time_rationality_check(kPi / 4.0, 4);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.multiplier, "pi");
    EXPECT_EQ(r.q, 4);
    r = time_rationality_check(5.0 * kPi / (6.0 * std::sqrt(3.0)), 6);
    EXPECT_EQ(r.q, 6);
    EXPECT_FALSE(time_rationality_check(std::sqrt(2.0), 4).found);
}

// Criterion acceptance coincides with the oracle reaching the target with phase +1.
TEST(Pst, CriterionAgreesWithOracle) {
    for (auto g : {build_cyclic(6), build_cyclic(8), build_abelian_power(4, 2), build_modular_maximal_cyclic(4)}) {
        Loaded s(std::move(g));
        const auto sets = enumerate_oriented_class_unions(s.conj, 3);
        int agreed = 0;
        for (const auto& cs : sets) {
            const OrientedCayleyGraph graph(s.group, s.conj, cs);
            const auto op = build_operator(adjacency_matrix(graph));
            for (Element z : s.conj.center) {
                if (z == s.group.identity()) continue;
                for (double t : {kPi / 4.0, kPi / 2.0, kTau3, kPi}) {
                    const bool criterion = check_pst_at(graph, s.table, z, t).accepted;
                    const auto f = fidelity(op, t, s.group.identity(), z);
                    const bool oracle = f.value > 1.0 - 1e-7 && f.phase.real() > 0;
                    ASSERT_EQ(criterion, oracle) << s.group.name() << " z=" << z << " t=" << t;
                    if (f.value > 1.0 - 1e-7) EXPECT_GT(f.phase.real(), 0.0);
                    ++agreed;
                }
            }
        }
        EXPECT_GT(agreed, 0);
    }
}

TEST(Pst, WitnessSoundnessBySweep) {
    for (auto g : {build_cyclic(6), build_abelian_power(4, 2)}) {
        Loaded s(std::move(g));
        const auto galois = galois_stabilizers(s.table, s.conj);
        SweepOptions opts;
        opts.max_order = 16;
        const auto sweep = sweep_connection_sets(s.group, s.conj, s.table, opts);
        EXPECT_EQ(sweep.histogram[4], 0u);
        EXPECT_EQ(sweep.histogram[6], 0u);
        for (const auto& cs : enumerate_oriented_class_unions(s.conj, 64)) {
            const OrientedCayleyGraph graph(s.group, s.conj, cs);
            const auto rep = compute_S_e(graph, s.table);
            const auto op = build_operator(adjacency_matrix(graph));
            const auto hits = scan_pst(op, s.group.identity(), 4.0 * kPi, 800);
            for (Element z : s.conj.center) {
                if (z == s.group.identity()) continue;
                if (!nonexistence_witness(s.conj, s.table, galois, z)) continue;
                EXPECT_FALSE(std::binary_search(rep.S_e.begin(), rep.S_e.end(), z));
                for (const auto& h : hits) EXPECT_NE(h.target, z);
            }
        }
        // order-4 elements always carry a witness
        for (Element z : s.conj.center)
            if (oracle::order_of(s.group, z) == 4) EXPECT_TRUE(nonexistence_witness(s.conj, s.table, galois, z).has_value());
    }
}

TEST(Pst, SolvableExclusion) {
    const auto s5 = solvable_exclusion_report(build_symmetric(5));
    EXPECT_FALSE(s5.solvable);
    EXPECT_FALSE(s5.size6_excluded);
    const auto z8 = solvable_exclusion_report(build_cyclic(8));
    EXPECT_TRUE(z8.solvable);
    EXPECT_TRUE(z8.size6_excluded);
    EXPECT_FALSE(z8.message.empty());
}

TEST(Pst, SweepIsThreadDeterministic) {
    Loaded s(build_abelian_power(4, 2));
    SweepOptions one;
    SweepOptions many = one;
    many.threads = 3;
    const auto a = sweep_connection_sets(s.group, s.conj, s.table, one);
    const auto b = sweep_connection_sets(s.group, s.conj, s.table, many);
    EXPECT_EQ(a.sets, 364u);
    EXPECT_EQ(a.histogram, b.histogram);
    ASSERT_EQ(a.certified.size(), b.certified.size());
    for (std::size_t i = 0; i < a.certified.size(); ++i) {
        EXPECT_EQ(a.certified[i].classes, b.certified[i].classes);
        EXPECT_EQ(a.certified[i].report.S_e, b.certified[i].report.S_e);
    }
    Loaded big(build_symmetric(4));
    try {
        sweep_connection_sets(big.group, big.conj, big.table, one);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
        EXPECT_NE(std::string(e.what()).find("--limit"), std::string::npos);
    }
}

TEST(Pst, VerdictJson) {
    const auto cert = z8_example();
    const auto table = character_table(*cert.group, *cert.conj);
    const auto graph = cert.graph();
    const auto rep = compute_S_e(graph, table);
    const auto j = verdict_json(graph, rep, time_rationality_check(*rep.minimal_time, rep.size), 1.0, {});
    for (const char* key : {"group", "connection_classes", "S_e", "size", "tau", "tau_rational", "residual",
                            "oracle_fidelity", "witnesses", "k_bound", "connected"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["size"], 4);
    EXPECT_EQ(j["tau_rational"]["q"], 4);
}
