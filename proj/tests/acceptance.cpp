#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ocpst/cayley.hpp"
#include "ocpst/characters.hpp"
#include "ocpst/conjugacy.hpp"
#include "ocpst/error.hpp"
#include "ocpst/families.hpp"
#include "ocpst/pst.hpp"
#include "ocpst/walk.hpp"
#include "ocpst/wreath.hpp"

using namespace ocpst;

namespace {

const double kPi = std::numbers::pi;
const double kTau3 = 2.0 * kPi / (3.0 * std::sqrt(3.0));
constexpr double kCriterionTol = 1e-8;
constexpr double kOracleTol = 1e-7;

// Every MST report produced during the run, kept for the structural checks.
struct Produced {
    std::shared_ptr<const GroupTable> group;
    std::shared_ptr<const ConjugacyData> conj;
    ConnectionSet conn;
    MSTReport report;
    std::string origin;
};
std::vector<Produced> g_produced;

class Criterion {
public:
    explicit Criterion(std::string name) : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    void require(bool ok, const std::string& what) {
        if (!ok) {
            ok_ = false;
            if (failures_.size() < 8) failures_.push_back(what);
        }
    }
    void note(const std::string& s) { notes_.push_back(s); }
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    void within(double limit) {
        const double t = elapsed();
        std::ostringstream os;
        os << "runtime " << t << " s exceeds " << limit << " s";
        require(t < limit, os.str());
    }
    bool finish() {
        std::printf("%s %s (%.2f s)\n", ok_ ? "PASS" : "FAIL", name_.c_str(), elapsed());
        for (const auto& n : notes_) std::printf("    %s\n", n.c_str());
        for (const auto& f : failures_) std::printf("    failed: %s\n", f.c_str());
        std::fflush(stdout);
        return ok_;
    }
    void fail(const std::string& what) { require(false, what); }

private:
    std::string name_;
    std::chrono::steady_clock::time_point start_;
    bool ok_ = true;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Criterion check, oracle check and S_e report for a certificate; the report joins the pool.
void dual(Criterion& c, const FamilyCertificate& cert, const CharacterTable& table, bool with_oracle = true) {
    const auto graph = cert.graph();
    const std::string name = cert.group->name();
    const auto check = check_pst_at(graph, table, cert.z, cert.tau, kCriterionTol);
    c.require(check.accepted && check.residual < kCriterionTol, name + ": criterion residual " + fmt(check.residual));
    if (with_oracle) {
        const auto o = oracle_check(graph, cert.z, cert.tau);
        c.require(o.fidelity > 1.0 - kOracleTol, name + ": oracle fidelity " + fmt(o.fidelity));
        c.require(o.phase == 1, name + ": phase " + std::to_string(o.phase));
    }
    auto rep = compute_S_e(graph, table);
    c.require(std::binary_search(rep.S_e.begin(), rep.S_e.end(), cert.z), name + ": target missing from S_e");
    g_produced.push_back({cert.group, cert.conj, cert.conn, std::move(rep), name});
}

// Random inverse-free subset of Z_r^n: each pair {g, -g} contributes g, -g or nothing.
std::vector<Element> random_set(const GroupTable& g, std::mt19937_64& rng) {
    std::vector<Element> out;
    std::uniform_int_distribution<int> pick(0, 2);
    while (out.empty()) {
        for (Element x = 1; x < static_cast<Element>(g.order()); ++x) {
            const Element y = g.inv(x);
            if (y <= x) continue;
            const int d = pick(rng);
            if (d == 1) out.push_back(x);
            if (d == 2) out.push_back(y);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Element sum_of(const GroupTable& g, const std::vector<Element>& c) {
    Element s = g.identity();
    for (Element x : c) s = g.mul(s, x);
    return s;
}

bool criterion_1() {
    Criterion c("C1 Z_3^n: random oriented sets, transfer 0 -> sigma at 2pi/(3sqrt3)");
    int certified = 0, zero_sigma = 0;
    for (int n = 1; n <= 3; ++n) {
        std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(n));
        const auto g = build_abelian_power(3, n);
        for (int k = 0; k < 5; ++k) {
            const auto set = random_set(g, rng);
            const auto cert = family_z3n(n, set);
            if (!cert.pst_claim) {
                ++zero_sigma;
                c.require(sum_of(*cert.group, set) == 0, "claim withheld for nonzero sigma");
                continue;
            }
            c.require(cert.z == sum_of(*cert.group, set), "target differs from sigma");
            c.require(std::abs(cert.tau - kTau3) < 1e-15, "time differs from 2pi/(3sqrt3)");
            const auto table = character_table(*cert.group, *cert.conj);
            dual(c, cert, table);
            ++certified;
        }
    }
    c.note(std::to_string(certified) + " sets certified, " + std::to_string(zero_sigma) + " with sigma = 0");
    c.require(certified > 0, "no nonzero sigma drawn");
    c.within(5.0);
    return c.finish();
}

bool criterion_2() {
    Criterion c("C2 Z_4^n: transfer 0 -> 2 sigma at pi/2 exactly when sigma has order 4");
    int positive = 0, negative = 0;
    for (int n = 1; n <= 2; ++n) {
        std::mt19937_64 rng(2000 + static_cast<std::uint64_t>(n));
        const auto g = build_abelian_power(4, n);
        for (int k = 0; k < 5 || (n == 2 && (positive == 0 || negative == 0) && k < 200); ++k) {
            const auto set = random_set(g, rng);
            const auto cert = family_z4n(n, set);
            const Element sigma = sum_of(*cert.group, set);
            const bool order4 = oracle::order_of(*cert.group, sigma) == 4;
            c.require(cert.pst_claim == order4, "claim disagrees with the order of sigma");
            const auto table = character_table(*cert.group, *cert.conj);
            if (order4) {
                c.require(cert.z == cert.group->mul(sigma, sigma), "target differs from 2 sigma");
                dual(c, cert, table);
                ++positive;
                continue;
            }
            // 2 sigma is 0 here: no vertex other than 0 is reached at pi/2.
            const auto graph = cert.graph();
            const auto op = build_operator(adjacency_matrix(graph));
            double best = 0.0;
            for (Element v = 1; v < static_cast<Element>(cert.group->order()); ++v) {
                best = std::max(best, fidelity(op, kPi / 2.0, 0, v).value);
                if (cert.conj->is_central_class(cert.conj->class_of[static_cast<std::size_t>(v)]))
                    c.require(!check_pst_at(graph, table, v, kPi / 2.0).accepted, "criterion accepts order-2 sigma");
            }
            c.require(best < 0.999, "order-2 sigma reaches a vertex with fidelity " + fmt(best));
            ++negative;
        }
    }
    c.note(std::to_string(positive) + " order-4 sigma certified, " + std::to_string(negative) +
           " order <= 2 sigma refuted");
    c.require(positive > 0 && negative > 0, "both directions must be exercised");
    c.within(5.0);
    return c.finish();
}

bool criterion_3() {
    Criterion c("C3 Z_4^2: exhaustive sweep finds no size-4 MST; witnesses for order-4 centre");
    auto group = std::make_shared<const GroupTable>(build_abelian_power(4, 2));
    auto conj = std::make_shared<const ConjugacyData>(conjugacy(*group));
    const auto table = character_table(*group, *conj);
    SweepOptions opts;
    opts.max_order = 16;
    const auto sweep = sweep_connection_sets(*group, *conj, table, opts);
    c.require(sweep.sets == 364, "expected 364 canonical sets, got " + std::to_string(sweep.sets));
    c.require(sweep.histogram[4] == 0, std::to_string(sweep.histogram[4]) + " size-4 certificates");
    std::ostringstream hist;
    for (std::size_t s = 1; s < sweep.histogram.size(); ++s)
        if (sweep.histogram[s]) hist << " size " << s << ": " << sweep.histogram[s];
    c.note(std::to_string(sweep.sets) + " sets;" + hist.str());
    for (const auto& e : sweep.certified)
        g_produced.push_back({group, conj, require_connection_set(*conj, e.classes), e.report, "z4^2 sweep"});
    const auto galois = galois_stabilizers(table, *conj);
    int order4 = 0;
    for (Element z : conj->center) {
        if (oracle::order_of(*group, z) != 4) continue;
        ++order4;
        const auto w = nonexistence_witness(*conj, table, galois, z);
        c.require(w.has_value(), "no witness for " + group->label(z));
        if (w) {
            // A witness is a set of rational characters that move z: every one must be
            // Galois-fixed and take a value other than its degree at z.
            c.require(rational_intersection(w->characters, galois), "witness characters not rational");
        }
    }
    c.note(std::to_string(order4) + " order-4 elements witnessed");
    c.within(60.0);
    return c.finish();
}

bool criterion_4() {
    Criterion c("C4 Cay(Z_8,{1,2,5}): S_0 = {0,2,4,6}, phase +1, tau/pi rational");
    const auto cert = z8_example();
    const auto table = character_table(*cert.group, *cert.conj);
    dual(c, cert, table);
    const auto& rep = g_produced.back().report;
    c.require(rep.S_e == std::vector<Element>{0, 2, 4, 6}, "S_0 differs");
    c.require(rep.size == 4, "size " + std::to_string(rep.size));
    if (rep.minimal_time) {
        const auto o = oracle_check(cert.graph(), rep.generator, *rep.minimal_time);
        c.require(o.phase == 1 && o.fidelity > 1.0 - kOracleTol, "minimal-time oracle check");
        const auto r = time_rationality_check(*rep.minimal_time, rep.size);
        c.require(r.found && r.multiplier == "pi" && r.q <= 16, "tau/pi not rational with q <= 16");
        c.note("tau = " + std::to_string(r.p) + "/" + std::to_string(r.q) + " pi");
    } else {
        c.fail("no minimal time");
    }
    c.within(5.0);
    return c.finish();
}

bool criterion_5() {
    Criterion c("C5 extraspecial 3-groups: S_e is the centre at 2pi/(3sqrt3)");
    const auto small = family_extraspecial3(1, 3);
    const auto t27 = character_table(*small.group, *small.conj);
    dual(c, small, t27);
    const auto& rep = g_produced.back().report;
    c.require(rep.size == 3, "order 27 size " + std::to_string(rep.size));
    c.require(rep.S_e == small.conj->center, "order 27 S_e differs from the centre");

    const auto big = family_extraspecial3(2, 3);
    const auto t243 = character_table(*big.group, *big.conj);
    dual(c, big, t243, false);
    const auto& rep2 = g_produced.back().report;
    c.require(rep2.size == 3 && rep2.S_e == big.conj->center, "order 243 S_e differs from the centre");
    c.within(30.0);
    return c.finish();
}

bool criterion_6() {
    Criterion c("C6 M_2(5): transfer e -> x^4 at pi/4, |S_e| = 4, degree-2 values");
    const auto cert = family_m2(5);
    const auto table = character_table(*cert.group, *cert.conj);
    c.require(cert.z == m2_element(5, 4, 0), "target is not x^4");
    c.require(std::abs(cert.tau - kPi / 4.0) < 1e-15, "time is not pi/4");
    dual(c, cert, table);
    c.require(g_produced.back().report.size == 4, "size " + std::to_string(g_produced.back().report.size));
    const int zc = cert.conj->class_of[static_cast<std::size_t>(cert.z)];
    int deg2 = 0;
    for (int i = 0; i < static_cast<int>(table.size()); ++i) {
        if (table.degrees[static_cast<std::size_t>(i)] != 2) continue;
        ++deg2;
        const Complex v = table(i, zc);
        c.require(std::abs(v.real()) < 1e-8 && std::abs(std::abs(v.imag()) - 2.0) < 1e-8, "value at x^4 is not +-2i");
        for (int k = 0; k < static_cast<int>(cert.conj->class_count()); ++k)
            if (!cert.conj->is_central_class(k))
                c.require(std::abs(table(i, k)) < 1e-8, "degree-2 character nonzero off the centre");
    }
    c.require(deg2 == 4, "expected 4 degree-2 characters");
    c.within(5.0);
    return c.finish();
}

bool criterion_7() {
    Criterion c("C7 wreath lifts: transfer to (z,...,z) at the base time; conjugacy types");
    const auto z3 = family_z3n(1, std::vector<Element>{1});
    const auto z4 = family_z4n(1, std::vector<Element>{1});
    for (const auto& [base, n] : {std::pair{&z3, 2}, {&z3, 3}, {&z4, 2}}) {
        const auto cert = wreath_lift(*base, n);
        c.require(std::abs(cert.tau - base->tau) < 1e-15, "lift changes the time");
        const auto table = character_table(*cert.group, *cert.conj);
        dual(c, cert, table);
        c.require(g_produced.back().report.size == base->claimed_size, cert.group->name() + ": size differs from base");
    }

    const auto base = build_cyclic(3);
    const auto bconj = conjugacy(base);
    {
        const auto w = build_wreath_sym(base, 2);
        const WreathLayout layout(3, 2);
        std::size_t pairs = 0;
        for (Element a = 0; a < static_cast<Element>(w.order()); ++a)
            for (Element b = 0; b < static_cast<Element>(w.order()); ++b, ++pairs) {
                const bool same = wreath_type(base, bconj, layout.decode(a)) == wreath_type(base, bconj, layout.decode(b));
                c.require(same == oracle::conjugate_brute(w, a, b), "type mismatch on Z_3 wr S_2");
            }
        c.note(std::to_string(pairs) + " pairs exhaustive on Z_3 wr S_2");
    }
    {
        const auto w = build_wreath_sym(base, 3);
        const WreathLayout layout(3, 3);
        std::mt19937_64 rng(7000);
        std::uniform_int_distribution<Element> pick(0, static_cast<Element>(w.order()) - 1);
        int conjugate = 0;
        for (int i = 0; i < 10000; ++i) {
            const Element a = pick(rng);
            // Bias half the pairs towards conjugates so both outcomes are exercised.
            const Element b = i % 2 ? pick(rng) : w.conjugate(a, pick(rng));
            const bool same = wreath_type(base, bconj, layout.decode(a)) == wreath_type(base, bconj, layout.decode(b));
            const bool brute = oracle::conjugate_brute(w, a, b);
            conjugate += brute;
            c.require(same == brute, "type mismatch on Z_3 wr S_3");
        }
        c.note("10000 seeded pairs on Z_3 wr S_3, " + std::to_string(conjugate) + " conjugate");
    }
    c.within(120.0);
    return c.finish();
}

bool criterion_8() {
    Criterion c("C8 structural properties of every S_e produced in this run");
    std::size_t checked = 0;
    std::set<int> sizes;
    for (const auto& p : g_produced) {
        const auto& rep = p.report;
        if (!rep.minimal_time) continue;
        ++checked;
        const std::string tag = p.origin + " C=" + std::to_string(p.conn.class_indices.size()) + " classes";
        const auto& g = *p.group;
        sizes.insert(rep.size);

        c.require(rep.S_e == subgroup_closure(g, std::vector<Element>{rep.generator}), tag + ": S_e not cyclic");
        for (Element s : rep.S_e)
            c.require(p.conj->is_central_class(p.conj->class_of[static_cast<std::size_t>(s)]), tag + ": S_e not central");
        c.require(rep.size == 2 || rep.size == 3 || rep.size == 4 || rep.size == 6, tag + ": size " + std::to_string(rep.size));
        if (rep.size == 6) c.require(!derived_series_solvable(g).solvable, tag + ": size 6 on a solvable group");

        const OrientedCayleyGraph graph(g, *p.conj, p.conn);
        const auto op = build_operator(adjacency_matrix(graph));
        const auto perm = permutation_check(op, *rep.minimal_time);
        c.require(perm.has_value(), tag + ": U(tau) is not a permutation");
        if (perm) {
            c.require(perm->fixed_point_free, tag + ": fixed point");
            c.require(perm->commutes, tag + ": U(tau) does not commute with A");
            c.require(perm->positive, tag + ": signed permutation");
            c.require(perm->order == rep.size, tag + ": permutation order " + std::to_string(perm->order));
            c.require(perm->perm[static_cast<std::size_t>(g.identity())] == rep.generator, tag + ": e not sent to the generator");
        }

        const auto parts = partition_into_S_classes(g, rep);
        std::vector<int> hit(g.order(), 0);
        for (const auto& part : parts) {
            c.require(part.size() == rep.S_e.size(), tag + ": unequal S-classes");
            for (Element x : part) ++hit[static_cast<std::size_t>(x)];
        }
        c.require(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }), tag + ": S-classes do not partition");

        if (rep.size != 2) {
            const auto r = time_rationality_check(*rep.minimal_time, rep.size);
            c.require(r.found && r.q <= 10000, tag + ": time not a rational multiple");
            c.require(r.multiplier == (rep.size == 4 ? "pi" : "pi/sqrt3"), tag + ": wrong multiplier");
        }
    }
    std::string s;
    for (int v : sizes) s += " " + std::to_string(v);
    c.note(std::to_string(checked) + " reports checked; sizes seen:" + s);
    c.require(checked > 0, "no reports produced");
    return c.finish();
}

void check_table(Criterion& c, const CharacterTable& t, const std::string& name) {
    const auto h = static_cast<Eigen::Index>(t.size());
    const double n = static_cast<double>(t.group_order);
    std::size_t degsq = 0;
    for (int d : t.degrees) degsq += static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    c.require(degsq == t.group_order, name + ": sum of squared degrees");
    double row = 0.0, col = 0.0;
    for (Eigen::Index i = 0; i < h; ++i)
        for (Eigen::Index j = 0; j < h; ++j) {
            Complex r{0, 0}, k{0, 0};
            for (Eigen::Index m = 0; m < h; ++m) {
                r += static_cast<double>(t.class_sizes[static_cast<std::size_t>(m)]) * t.values(i, m) * std::conj(t.values(j, m));
                k += t.values(m, i) * std::conj(t.values(m, j));
            }
            row = std::max(row, std::abs(r / n - (i == j ? 1.0 : 0.0)));
            const double expect = i == j ? n / static_cast<double>(t.class_sizes[static_cast<std::size_t>(i)]) : 0.0;
            col = std::max(col, std::abs(k - expect) / n);
        }
    c.require(row < 1e-8, name + ": row orthogonality " + fmt(row));
    c.require(col < 1e-8, name + ": column orthogonality " + fmt(col));
}

bool criterion_9() {
    Criterion c("C9 numerical core: tables, spectra, unitarity");
    int tables = 0, spectra = 0;
    auto certs = shipped_certificates();
    certs.push_back(m2_remark_fixture());
    for (const auto& cert : certs) {
        const auto table = character_table(*cert.group, *cert.conj);
        check_table(c, table, cert.group->name());
        ++tables;
        if (cert.group->order() > 200) continue;
        const auto graph = cert.graph();
        const auto a = adjacency_matrix(graph);
        const auto op = build_operator(a);
        const auto spec = spectrum(graph, table);
        std::vector<double> expected, mu(op.eigenvalues().data(), op.eigenvalues().data() + op.eigenvalues().size());
        for (std::size_t i = 0; i < table.size(); ++i)
            for (int k = 0; k < table.degrees[i] * table.degrees[i]; ++k) expected.push_back(spec.t[i]);
        std::sort(expected.begin(), expected.end());
        std::sort(mu.begin(), mu.end());
        double gap = expected.size() == mu.size() ? 0.0 : 1.0;
        for (std::size_t k = 0; k < std::min(mu.size(), expected.size()); ++k) gap = std::max(gap, std::abs(mu[k] - expected[k]));
        c.require(gap < 1e-7, cert.group->name() + ": eigenvalue gap " + fmt(gap));
        for (double t : {0.3, cert.tau, 5.0}) {
            const Eigen::MatrixXcd u = evolve_complex(op, t);
            const auto nn = u.rows();
            const double imag = u.imag().cwiseAbs().maxCoeff();
            const Eigen::MatrixXd re = u.real();
            const double orth = (re.transpose() * re - Eigen::MatrixXd::Identity(nn, nn)).cwiseAbs().maxCoeff();
            c.require(imag < 1e-9 && orth < 1e-9, cert.group->name() + ": U(t) not real orthogonal");
        }
        ++spectra;
    }
    for (const auto& g : {build_symmetric(5), build_wreath_sym(build_cyclic(4), 2)}) {
        check_table(c, character_table(g, conjugacy(g)), g.name());
        ++tables;
    }
    int matched = 0;
    for (auto [r, n] : {std::pair{3, 1}, {3, 2}, {3, 3}, {4, 1}, {4, 2}, {8, 1}}) {
        const auto g = build_abelian_power(r, n);
        const auto numeric = character_table_numerical(g, conjugacy(g));
        const auto closed = abelian_character_table(r, n);
        const bool ok = match_tables(closed, numeric, 1e-8).has_value();
        c.require(ok, "closed form and numerical tables differ for " + g.name());
        matched += ok;
    }
    c.note(std::to_string(tables) + " tables, " + std::to_string(spectra) + " spectra, " + std::to_string(matched) +
           " abelian tables matched");
    return c.finish();
}

bool criterion_10() {
    Criterion c("C10 imported tables: synthetic exact-cyclotomic fixture");
    try {
        std::ifstream in(std::string(OCPST_TEST_DATA) + "/z3_cyclotomic.json");
        const auto imp = import_character_table(nlohmann::json::parse(in));
        c.require(imp.table.has_exact(), "fixture not read as exact");
        check_table(c, imp.table, "imported z3");
        const auto v = verify_imported_claim(imp, kCriterionTol);
        c.require(v.oriented, "claim not oriented: " + v.orientation_issue);
        c.require(v.check.accepted, "claim rejected, residual " + fmt(v.check.residual));
    } catch (const std::exception& e) {
        c.fail(e.what());
    }
    if (const char* path = std::getenv("OCPST_EXTERNAL_TABLE")) {
        try {
            std::ifstream in(path);
            const auto imp = import_character_table(nlohmann::json::parse(in));
            bool nontrivial = false;
            for (std::size_t k = 1; k < imp.table.class_sizes.size(); ++k)
                if (imp.table.class_sizes[k] == 1)
                    for (std::size_t i = 0; i < imp.table.size(); ++i)
                        nontrivial |= std::abs(imp.table(static_cast<int>(i), static_cast<int>(k)) -
                                               static_cast<double>(imp.table.degrees[i])) > 1e-8;
            c.require(nontrivial, "no character is nontrivial on the centre");
            if (imp.claim) {
                const auto v = verify_imported_claim(imp, kCriterionTol);
                c.require(v.oriented && v.check.accepted, "external claim rejected");
            }
            c.note(std::string("external table ") + path + " checked");
        } catch (const std::exception& e) {
            c.fail(e.what());
        }
    } else {
        c.note("no external table supplied (set OCPST_EXTERNAL_TABLE); optional check skipped");
    }
    return c.finish();
}

} // namespace

int main() {
    const std::vector<std::function<bool()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    int failed = 0;
    for (const auto& run : criteria) {
        try {
            failed += !run();
        } catch (const std::exception& e) {
            std::printf("FAIL (exception: %s)\n", e.what());
            ++failed;
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
