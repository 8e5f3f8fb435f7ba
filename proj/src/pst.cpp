#include "ocpst/pst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <exception>
#include <thread>

#include "ocpst/error.hpp"
#include "ocpst/walk.hpp"

namespace ocpst {

const char* to_string(CertProvenance p) {
    switch (p) {
    case CertProvenance::Criterion: return "criterion";
    case CertProvenance::Oracle: return "oracle";
    case CertProvenance::Both: return "both";
    }
    return "criterion";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTieTol = 1e-12;

// Everything the criterion needs for one (C, z): theta_chi and chi(z)/chi(e).
struct Criterion {
    std::vector<Complex> theta;
    std::vector<Complex> ratio;

    double residual(double tau, std::vector<double>* per = nullptr) const {
        double worst = 0.0;
        if (per) per->resize(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double r = std::abs(ratio[i] - std::exp(tau * theta[i]));
            if (per) (*per)[i] = r;
            worst = std::max(worst, r);
        }
        return worst;
    }
};

Criterion make_criterion(const CharacterTable& table, std::span<const int> conn_classes, int z_class) {
    Criterion c;
    c.theta = spectrum_from_classes(table, conn_classes).theta;
    c.ratio.resize(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
        c.ratio[i] = table.values(static_cast<Eigen::Index>(i), z_class) / static_cast<double>(table.degrees[i]);
    return c;
}

void require_matching(const OrientedCayleyGraph& graph, const CharacterTable& table) {
    if (table.group_order != graph.order() || table.size() != graph.conj().class_count()) {
        throw Error(ErrorKind::Inconsistency, "character table does not match the graph's group");
    }
}

int class_of(const OrientedCayleyGraph& graph, Element z) {
    if (!graph.group().contains(z)) throw Error(ErrorKind::InvalidParameter, "target element out of range");
    return graph.conj().class_of[static_cast<std::size_t>(z)];
}

} // namespace

PSTCheck check_pst_classes(const CharacterTable& table, std::span<const int> conn_classes, int z_class, double tau,
                           double tol) {
    PSTCheck out;
    if (z_class < 0 || static_cast<std::size_t>(z_class) >= table.class_sizes.size()) {
        throw Error(ErrorKind::InvalidParameter, "target class out of range");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::InvalidParameter, "time must be positive");
    if (table.class_sizes[static_cast<std::size_t>(z_class)] != 1) {
        out.reason = "target is not central";
        out.residual = std::numeric_limits<double>::infinity();
        return out;
    }
    const auto crit = make_criterion(table, conn_classes, z_class);
    out.residual = crit.residual(tau, &out.per_character);
    out.accepted = out.residual < tol;
    if (!out.accepted) out.reason = "residual above tolerance";
    return out;
}

PSTCheck check_pst_at(const OrientedCayleyGraph& graph, const CharacterTable& table, Element z, double tau,
                      double tol) {
    require_matching(graph, table);
    return check_pst_classes(table, graph.connection().class_indices, class_of(graph, z), tau, tol);
}

PSTCheck check_pst_pair(const OrientedCayleyGraph& graph, const CharacterTable& table, Element a, Element b,
                        double tau, double tol) {
    const auto& g = graph.group();
    if (!g.contains(a) || !g.contains(b)) throw Error(ErrorKind::InvalidParameter, "vertex out of range");
    return check_pst_at(graph, table, g.mul(b, g.inv(a)), tau, tol);
}

SolveResult solve_pst_time(const OrientedCayleyGraph& graph, const CharacterTable& table, Element z,
                           const SolveOptions& opts) {
    require_matching(graph, table);
    SolveResult res;
    res.k_bound = opts.k_bound > 0 ? opts.k_bound : 4 * static_cast<long long>(graph.order());
    res.best_residual = std::numeric_limits<double>::infinity();
    const int zc = class_of(graph, z);
    if (z == graph.group().identity() && !opts.period_mode) {
        throw Error(ErrorKind::InvalidParameter, "target is the identity; enable period mode");
    }
    if (!graph.conj().is_central_class(zc)) {
        res.reason = "target is not central";
        return res;
    }
    const auto crit = make_criterion(table, graph.connection().class_indices, zc);

    std::size_t ref = 0;
    bool moving = false;
    for (std::size_t i = 0; i < crit.theta.size(); ++i) {
        if (std::abs(crit.theta[i].imag()) > std::abs(crit.theta[ref].imag())) ref = i;
        const bool outside_kernel = std::abs(crit.ratio[i] - 1.0) >= table.tolerance;
        if (outside_kernel && std::abs(crit.theta[i].imag()) >= table.tolerance) moving = true;
    }
    const double t_ref = crit.theta[ref].imag();
    if (std::abs(t_ref) < table.tolerance) {
        res.reason = "all eigenvalues vanish";
        return res;
    }
    if (!moving && z != graph.group().identity()) {
        res.reason = "every character moved by the target has eigenvalue 0";
        return res;
    }
    double alpha = std::arg(crit.ratio[ref]);
    if (alpha < 0.0) alpha += kTwoPi;

    std::vector<std::pair<double, long long>> cands;
    for (long long k = -res.k_bound; k <= res.k_bound; ++k) {
        const double tau = (alpha + kTwoPi * static_cast<double>(k)) / t_ref;
        if (tau > kTieTol) cands.emplace_back(tau, k);
    }
    std::sort(cands.begin(), cands.end());
    double last = -1.0;
    for (const auto& [tau, k] : cands) {
        if (tau - last < kTieTol) continue;
        last = tau;
        ++res.candidates;
        const double r = crit.residual(tau);
        if (r < res.best_residual) {
            res.best_residual = r;
            res.best_tau = tau;
        }
        if (r < opts.tol) {
            PSTCertificate cert;
            cert.z = z;
            cert.tau = tau;
            cert.residual = crit.residual(tau, &cert.per_character);
            cert.k = k;
            res.certificate = std::move(cert);
            return res;
        }
    }
    res.reason = "no candidate time passes";
    return res;
}

MSTReport compute_S_e(const OrientedCayleyGraph& graph, const CharacterTable& table, const SolveOptions& opts) {
    const auto& group = graph.group();
    const Element e = group.identity();
    MSTReport rep;
    rep.S_e = {e};
    rep.generator = e;
    rep.k_bound = opts.k_bound > 0 ? opts.k_bound : 4 * static_cast<long long>(graph.order());

    std::vector<PSTCertificate> found;
    for (Element z : graph.conj().center) {
        if (z == e) continue;
        auto s = solve_pst_time(graph, table, z, opts);
        if (s.certificate) found.push_back(std::move(*s.certificate));
    }
    if (found.empty()) return rep;

    const auto best = std::min_element(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.tau - b.tau) > kTieTol) return a.tau < b.tau;
        return a.z < b.z;
    });
    rep.generator = best->z;
    rep.minimal_time = best->tau;
    for (const auto& c : found) rep.S_e.push_back(c.z);
    std::sort(rep.S_e.begin(), rep.S_e.end());
    rep.size = static_cast<int>(rep.S_e.size());

    const Element gen[] = {rep.generator};
    if (subgroup_closure(group, gen) != rep.S_e) {
        throw Error(ErrorKind::InvariantBreach, "S_e is not the cyclic subgroup generated by the fastest target");
    }
    if (rep.size != 2 && rep.size != 3 && rep.size != 4 && rep.size != 6) {
        throw Error(ErrorKind::InvariantBreach, "|S_e| = " + std::to_string(rep.size) + " is outside {2,3,4,6}");
    }
    Element power = e;
    for (int k = 1; k <= rep.size; ++k) {
        power = group.mul(power, rep.generator);
        const auto check = check_pst_at(graph, table, power, k * *rep.minimal_time, 10.0 * opts.tol);
        if (!check.accepted) {
            throw Error(ErrorKind::InvariantBreach, "power law fails at k = " + std::to_string(k));
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.z < b.z; });
    rep.certificates = std::move(found);
    return rep;
}

RationalTime time_rationality_check(double tau, int size, long long max_q, double tol) {
    if (size != 2 && size != 3 && size != 4 && size != 6) {
        throw Error(ErrorKind::InvalidParameter, "size must be one of 2, 3, 4, 6");
    }
    RationalTime r;
    const bool sqrt3 = size == 3 || size == 6;
    r.multiplier = sqrt3 ? "pi/sqrt3" : "pi";
    const double x = sqrt3 ? tau * std::sqrt(3.0) / std::numbers::pi : tau / std::numbers::pi;
    for (long long q = 1; q <= max_q; ++q) {
        const auto p = std::llround(x * static_cast<double>(q));
        const double err = std::abs(x - static_cast<double>(p) / static_cast<double>(q));
        if (err < tol) {
            r.found = true;
            r.p = p;
            r.q = q;
            r.error = err;
            return r;
        }
    }
    return r;
}

std::optional<NonexistenceWitness> nonexistence_witness(const ConjugacyData& conj, const CharacterTable& table,
                                                        const GaloisData& galois, Element z) {
    if (z < 0 || static_cast<std::size_t>(z) >= conj.class_of.size()) {
        throw Error(ErrorKind::InvalidParameter, "target element out of range");
    }
    const int zc = conj.class_of[static_cast<std::size_t>(z)];
    if (!conj.is_central_class(zc)) throw Error(ErrorKind::InvalidParameter, "target is not central");

    std::vector<int> moved;
    for (std::size_t i = 0; i < table.size(); ++i)
        if (std::abs(table.values(static_cast<Eigen::Index>(i), zc) - static_cast<double>(table.degrees[i])) >=
            table.tolerance)
            moved.push_back(static_cast<int>(i));

    // A single rational character is the smallest witness.
    for (int chi : moved)
        if (rational_intersection({chi}, galois)) return NonexistenceWitness{z, {chi}};

    std::vector<int> y;
    std::vector<int> gens;
    std::size_t reached = 1;
    for (int chi : moved) {
        const auto& h = galois.stabilizers[static_cast<std::size_t>(chi)];
        auto trial = gens;
        trial.insert(trial.end(), h.begin(), h.end());
        const auto grown = generated_unit_subgroup(galois.exponent, trial).size();
        if (grown == reached) continue;
        gens = std::move(trial);
        reached = grown;
        y.push_back(chi);
        if (rational_intersection(y, galois)) return NonexistenceWitness{z, y};
    }
    return std::nullopt;
}

SolvableExclusion solvable_exclusion_report(const GroupTable& group) {
    SolvableExclusion r;
    const auto series = derived_series_solvable(group);
    r.solvable = series.solvable;
    r.derived_orders = series.orders;
    r.size6_excluded = series.solvable;
    r.message = series.solvable ? "solvable: |S_e| = 6 is impossible for every normal connection set"
                                : "not solvable: size 6 is not excluded";
    return r;
}

std::vector<std::vector<Element>> partition_into_S_classes(const GroupTable& group, const MSTReport& report) {
    std::vector<std::vector<Element>> parts;
    if (!report.minimal_time) return parts;
    std::vector<char> used(group.order(), 0);
    for (std::size_t g = 0; g < group.order(); ++g) {
        if (used[g]) continue;
        std::vector<Element> coset;
        for (Element s : report.S_e) {
            const Element x = group.mul(static_cast<Element>(g), s);
            used[static_cast<std::size_t>(x)] = 1;
            coset.push_back(x);
        }
        std::sort(coset.begin(), coset.end());
        parts.push_back(std::move(coset));
    }
    return parts;
}

OracleCheck oracle_check(const OrientedCayleyGraph& graph, Element z, double tau) {
    const auto op = build_operator(adjacency_matrix(graph));
    const auto f = fidelity(op, tau, graph.group().identity(), z);
    return {f.value, f.phase.real() > 0.0 ? 1 : (f.phase.real() < 0.0 ? -1 : 0)};
}

SweepReport sweep_connection_sets(const GroupTable& group, const ConjugacyData& conj, const CharacterTable& table,
                                  const SweepOptions& opts) {
    if (group.order() > opts.max_order) {
        throw Error(ErrorKind::SizeLimit, "sweep refused: group order " + std::to_string(group.order()) +
                                              " exceeds the sweep limit " + std::to_string(opts.max_order) +
                                              " (raise it with --limit)");
    }
    const auto sets = enumerate_oriented_class_unions(conj, opts.max_classes);
    std::vector<MSTReport> reports(sets.size());
    const auto workers = static_cast<std::size_t>(std::max(1, opts.threads));
    std::vector<std::exception_ptr> failures(workers);
    auto run = [&](std::size_t begin) {
        try {
            for (std::size_t i = begin; i < sets.size(); i += workers) {
                OrientedCayleyGraph graph(group, conj, sets[i]);
                reports[i] = compute_S_e(graph, table, opts.solve);
            }
        } catch (...) {
            failures[begin] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    SweepReport out;
    out.sets = sets.size();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        ++out.histogram[static_cast<std::size_t>(reports[i].size)];
        if (reports[i].minimal_time) out.certified.push_back({sets[i].class_indices, std::move(reports[i])});
    }
    return out;
}

nlohmann::json verdict_json(const OrientedCayleyGraph& graph, const MSTReport& report,
                            const std::optional<RationalTime>& rational, std::optional<double> oracle_fidelity,
                            const std::vector<NonexistenceWitness>& witnesses) {
    nlohmann::json j;
    j["group"] = graph.group().name();
    j["connection_classes"] = graph.connection().class_indices;
    j["S_e"] = report.S_e;
    j["size"] = report.size;
    j["tau"] = report.minimal_time ? nlohmann::json(*report.minimal_time) : nlohmann::json(nullptr);
    if (rational && rational->found) {
        j["tau_rational"] = {{"multiplier", rational->multiplier}, {"p", rational->p}, {"q", rational->q}};
    } else {
        j["tau_rational"] = nullptr;
    }
    double residual = 0.0;
    for (const auto& c : report.certificates) residual = std::max(residual, c.residual);
    j["residual"] = report.certificates.empty() ? nlohmann::json(nullptr) : nlohmann::json(residual);
    j["oracle_fidelity"] = oracle_fidelity ? nlohmann::json(*oracle_fidelity) : nlohmann::json(nullptr);
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : witnesses) w.push_back({{"z", x.z}, {"characters", x.characters}});
    j["witnesses"] = std::move(w);
    j["k_bound"] = report.k_bound;
    j["connected"] = is_connected(graph);
    return j;
}

} // namespace ocpst
