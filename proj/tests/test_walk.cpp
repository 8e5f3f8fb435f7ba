#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ocpst/cayley.hpp"
#include "ocpst/characters.hpp"
#include "ocpst/conjugacy.hpp"
#include "ocpst/error.hpp"
#include "ocpst/families.hpp"
#include "ocpst/walk.hpp"

using namespace ocpst;

namespace {

const double kTau3 = 2.0 * std::numbers::pi / (3.0 * std::sqrt(3.0));

WalkOperator z3_walk() {
    const auto g = build_cyclic(3);
    return build_operator(oracle::skew_adjacency(g, {1}));
}

} // namespace

TEST(Walk, EvolutionMatchesTaylor) {
    const auto g = build_modular_maximal_cyclic(5);
    const auto conj = conjugacy(g);
    const auto cert = family_m2(5);
    const auto a = adjacency_matrix(cert.graph());
    const auto op = build_operator(a);
    EXPECT_LT(op.reconstruction_error(), 1e-10);
    for (double t : {0.1, 0.785398, 2.5, 7.0}) {
        const Eigen::MatrixXd u = evolve(op, t);
        const Eigen::MatrixXd ref = oracle::expm<Eigen::MatrixXd>(a, t);
        EXPECT_LT((u - ref).cwiseAbs().maxCoeff(), 1e-9) << t;
        const auto n = u.rows();
        EXPECT_LT((u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT(evolve_complex(op, t).imag().cwiseAbs().maxCoeff(), 1e-9);
        for (int b : {0, 3, 17}) EXPECT_NEAR(fidelity(op, t, 0, b).value, std::abs(ref(b, 0)), 1e-9);
    }
}

TEST(Walk, PerfectTransferOnTriangle) {
    const auto op = z3_walk();
    const auto f = fidelity(op, kTau3, 0, 1);
    EXPECT_NEAR(f.value, 1.0, 1e-12);
    EXPECT_NEAR(f.phase.real(), 1.0, 1e-9);
    EXPECT_NEAR(oracle::transfer(build_cyclic(3), {1}, 0, 1, kTau3), 1.0, 1e-12);
    const auto p = permutation_check(op, kTau3);
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->perm, (std::vector<int>{1, 2, 0}));
    EXPECT_TRUE(p->fixed_point_free);
    EXPECT_TRUE(p->commutes);
    EXPECT_TRUE(p->positive);
    EXPECT_EQ(p->order, 3);
    EXPECT_FALSE(permutation_check(op, 0.5).has_value());
}

TEST(Walk, ScanFindsFirstTime) {
    const auto op = z3_walk();
    const auto found = scan_pst(op, 0);
    ASSERT_FALSE(found.empty());
    EXPECT_NEAR(found.front().t, kTau3, 1e-7);
    EXPECT_EQ(found.front().target, 1);
    EXPECT_NEAR(found[1].t, 2.0 * kTau3, 1e-7);
    EXPECT_EQ(found[1].target, 2);
    const auto csv = fidelity_csv(op, 0, 1.0, 10);
    EXPECT_EQ(csv.rfind("t,fidelity,argmax\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
}

TEST(Walk, EigenvaluesFollowCharacters) {
    const auto cert = family_extraspecial3(1, 3);
    const auto table = character_table(*cert.group, *cert.conj);
    const auto spec = spectrum(cert.graph(), table);
    const auto op = build_operator(adjacency_matrix(cert.graph()));
    std::vector<double> expected;
    for (std::size_t i = 0; i < table.size(); ++i)
        for (int k = 0; k < table.degrees[i] * table.degrees[i]; ++k) expected.push_back(spec.t[i]);
    std::vector<double> mu(op.eigenvalues().data(), op.eigenvalues().data() + op.eigenvalues().size());
    std::sort(expected.begin(), expected.end());
    std::sort(mu.begin(), mu.end());
    for (std::size_t k = 0; k < mu.size(); ++k) EXPECT_NEAR(mu[k], expected[k], 1e-7);
}

TEST(Walk, UndirectedWreathFixture) {
    const auto fx = undirected_wreath_fixture();
    const auto a = undirected_adjacency_matrix(*fx.group, fx.elements);
    EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
    const auto op = build_hermitian_operator(a);
    EXPECT_TRUE(op.hermitian());
    const auto f = fidelity(op, fx.tau, fx.group->identity(), fx.target);
    EXPECT_NEAR(f.value, 1.0, 1e-7);
    const Eigen::MatrixXcd ref = oracle::expm<Eigen::MatrixXcd>(a.cast<Complex>(), Complex{0.0, -fx.tau});
    EXPECT_NEAR(std::abs(ref(fx.target, fx.group->identity())), 1.0, 1e-9);
    EXPECT_LT((evolve_complex(op, fx.tau) - ref).cwiseAbs().maxCoeff(), 1e-9);
}

// K_2 lifted to degree 2 has no transfer to (1,1) at pi/2; degree 3 does.
TEST(Walk, UndirectedLiftOfEdge) {
    const double tau = std::numbers::pi / 2.0;
    for (auto [n, expected] : {std::pair{2, 0.0}, {3, 1.0}}) {
        const auto fx = undirected_wreath_fixture(2, {1}, 1, tau, n);
        const auto a = undirected_adjacency_matrix(*fx.group, fx.elements);
        const auto op = build_hermitian_operator(a);
        EXPECT_NEAR(fidelity(op, tau, fx.group->identity(), fx.target).value, expected, 1e-7) << n;
        const Eigen::MatrixXcd ref = oracle::expm<Eigen::MatrixXcd>(a.cast<Complex>(), Complex{0.0, -tau});
        EXPECT_NEAR(std::abs(ref(fx.target, fx.group->identity())), expected, 1e-9) << n;
    }
    const auto fx = undirected_wreath_fixture(2, {1}, 1, tau, 2);
    const auto op = build_hermitian_operator(undirected_adjacency_matrix(*fx.group, fx.elements));
    EXPECT_TRUE(scan_pst(op, fx.group->identity()).empty());
}

TEST(Walk, RejectsWrongSymmetry) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 1) = 1.0;
    EXPECT_THROW(build_operator(a), Error);
    EXPECT_THROW(build_hermitian_operator(a), Error);
    EXPECT_THROW(build_operator(Eigen::MatrixXd::Zero(2, 3)), Error);
}
