#include "ocpst/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <regex>
#include <set>

#include "ocpst/error.hpp"
#include "ocpst/wreath.hpp"

namespace ocpst {

namespace {

const double kTauThird = 2.0 * std::numbers::pi / (3.0 * std::sqrt(3.0));

struct Owned {
    std::shared_ptr<const GroupTable> group;
    std::shared_ptr<const ConjugacyData> conj;
};

Owned own(GroupTable g) {
    auto group = std::make_shared<const GroupTable>(std::move(g));
    auto conj = std::make_shared<const ConjugacyData>(conjugacy(*group));
    return {group, conj};
}

ConnectionSet validated(const Owned& o, std::span<const Element> elements) {
    for (Element c : elements)
        if (!o.group->contains(c)) throw Error(ErrorKind::Validation, "connection element out of range");
    auto check = connection_set_from_elements(*o.conj, elements);
    if (!check.ok()) throw Error(ErrorKind::Validation, check.describe());
    return std::move(*check.set);
}

Element sum_of(const GroupTable& g, std::span<const Element> c) {
    Element s = g.identity();
    for (Element x : c) s = g.mul(s, x);
    return s;
}

// Row-reduces over F_3; true iff the square matrix is invertible.
bool invertible_mod3(std::vector<std::vector<int>> m) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] % 3 == 0) ++piv;
        if (piv == n) return false;
        std::swap(m[piv], m[col]);
        const int inv = m[col][col] % 3 == 1 ? 1 : 2;
        for (auto& x : m[col]) x = (x * inv) % 3;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] % 3 == 0) continue;
            const int f = m[r][col];
            for (std::size_t k = 0; k < n; ++k) m[r][k] = ((m[r][k] - f * m[col][k]) % 3 + 3) % 3;
        }
    }
    return true;
}

std::string format_tau(double tau) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "solved:%.17g", tau);
    return buf;
}

} // namespace

double tau_from_tag(const std::string& tag) {
    if (tag == "2pi/3sqrt3") return kTauThird;
    if (tag == "pi/2") return std::numbers::pi / 2.0;
    if (tag == "pi/4") return std::numbers::pi / 4.0;
    if (tag.rfind("solved:", 0) == 0) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tag.substr(7), &used);
            if (used == tag.size() - 7 && v > 0.0) return v;
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorKind::Schema, "unknown tau tag '" + tag + "'");
}

FamilyCertificate family_z3n(int n, std::span<const Element> c) {
    auto o = own(build_abelian_power(3, n));
    FamilyCertificate cert;
    cert.conn = validated(o, c);
    cert.z = sum_of(*o.group, cert.conn.elements);
    cert.tau = kTauThird;
    cert.tau_tag = "2pi/3sqrt3";
    cert.pst_claim = cert.z != o.group->identity();
    cert.claimed_size = cert.pst_claim ? 3 : 1;
    cert.source = "Z_3^n sum rule";
    if (!cert.pst_claim) cert.notes.push_back("sum of C is zero: periodic only");
    cert.group = o.group;
    cert.conj = o.conj;
    return cert;
}

FamilyCertificate family_z4n(int n, std::span<const Element> c) {
    auto o = own(build_abelian_power(4, n));
    FamilyCertificate cert;
    cert.conn = validated(o, c);
    const Element sigma = sum_of(*o.group, cert.conn.elements);
    cert.z = o.group->mul(sigma, sigma);
    cert.tau = std::numbers::pi / 2.0;
    cert.tau_tag = "pi/2";
    cert.pst_claim = o.group->element_order(sigma) == 4;
    cert.claimed_size = cert.pst_claim ? 2 : 1;
    cert.source = "Z_4^n doubled sum rule";
    cert.notes.push_back("no MST on a set of size 4 exists on Z_4^n");
    if (!cert.pst_claim) cert.notes.push_back("sum of C has order at most 2: no PST at pi/2");
    cert.group = o.group;
    cert.conj = o.conj;
    return cert;
}

FamilyCertificate family_extraspecial3(int n, int exponent_type, std::optional<std::uint64_t> basis_seed) {
    auto o = own(build_extraspecial3(n, exponent_type));
    const int dim = 2 * n;
    std::vector<std::vector<int>> basis(static_cast<std::size_t>(dim), std::vector<int>(static_cast<std::size_t>(dim), 0));
    for (int i = 0; i < dim; ++i) basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    if (basis_seed) {
        std::mt19937_64 rng(*basis_seed);
        std::uniform_int_distribution<int> digit(0, 2);
        do {
            for (auto& row : basis)
                for (auto& x : row) x = digit(rng);
        } while (!invertible_mod3(basis));
    }
    std::vector<Element> c;
    for (const auto& f : basis)
        for (int central = 0; central < 3; ++central) c.push_back(extraspecial3_element(n, exponent_type, f, central));
    const Element z = extraspecial3_center_generator(n, exponent_type);
    c.push_back(z);

    FamilyCertificate cert;
    cert.conn = validated(o, c);
    cert.z = z;
    cert.tau = kTauThird;
    cert.tau_tag = "2pi/3sqrt3";
    cert.claimed_size = 3;
    cert.source = "extraspecial 3-group, basis preimage plus centre generator";
    if (basis_seed) cert.notes.push_back("random basis, seed " + std::to_string(*basis_seed));
    cert.group = o.group;
    cert.conj = o.conj;
    return cert;
}

FamilyCertificate family_m2(int n) {
    if (n < 5) throw Error(ErrorKind::InvalidParameter, "the M_2(n) construction needs n >= 5");
    auto o = own(build_modular_maximal_cyclic(n));
    const long long p3 = 1LL << (n - 3);
    const long long p4 = 1LL << (n - 4);
    const long long p2 = 1LL << (n - 2);
    std::vector<Element> c{m2_element(n, p3, 0), m2_element(n, p4, 1), m2_element(n, p2 + p4, 1)};
    for (long long k = 0; k < p3; ++k) c.push_back(m2_element(n, 4 * k + 1, 0));

    FamilyCertificate cert;
    cert.conn = validated(o, c);
    cert.z = m2_element(n, p3, 0);
    cert.tau = std::numbers::pi / 4.0;
    cert.tau_tag = "pi/4";
    cert.claimed_size = 4;
    cert.source = "modular maximal-cyclic group";
    cert.group = o.group;
    cert.conj = o.conj;
    return cert;
}

FamilyCertificate z8_example() {
    auto o = own(build_cyclic(8));
    const Element c[] = {1, 2, 5};
    FamilyCertificate cert;
    cert.conn = validated(o, c);
    cert.z = kZ8Target;
    cert.tau = kZ8SolvedTau;
    cert.tau_tag = format_tau(kZ8SolvedTau);
    cert.claimed_size = 4;
    cert.source = "Cay(Z_8,{1,2,5})";
    cert.notes.push_back("time obtained from the solver and frozen");
    cert.group = o.group;
    cert.conj = o.conj;
    return cert;
}

FamilyCertificate m2_remark_fixture() {
    auto o = own(build_modular_maximal_cyclic(4));
    const Element c[] = {m2_element(4, 2, 0), m2_element(4, 1, 1), m2_element(4, 5, 1)};
    FamilyCertificate cert;
    cert.conn = validated(o, c);
    cert.z = m2_element(4, 2, 0);
    cert.tau = std::numbers::pi / 4.0;
    cert.tau_tag = "pi/4";
    cert.claimed_size = 4;
    cert.pst_claim = false;
    cert.source = "M_2(4) with C = {x^2, xs, x^5s}";
    cert.notes.push_back("no claim asserted; verdict reported by criterion and oracle");
    cert.group = o.group;
    cert.conj = o.conj;
    return cert;
}

LiftedSet lift_connection_set(const GroupTable& base, std::span<const Element> c, Element z, int n,
                              const BuildOptions& opts) {
    if (n < 2) throw Error(ErrorKind::InvalidParameter, "wreath lift needs n >= 2");
    auto group = std::make_shared<const GroupTable>(build_wreath_sym(base, n, opts));
    const WreathLayout layout(base.order(), n);
    const std::set<Element> in_c(c.begin(), c.end());
    LiftedSet lifted;
    const Permutation id = permutation_unrank(n, 0);
    for (int i = 0; i < n; ++i)
        for (Element x : c) {
            WreathElement w{std::vector<Element>(static_cast<std::size_t>(n), base.identity()), id};
            w.tuple[static_cast<std::size_t>(i)] = x;
            lifted.single.push_back(layout.encode(w));
        }
    for (std::size_t g = 0; g < group->order(); ++g) {
        const auto w = layout.decode(static_cast<Element>(g));
        if (!is_full_cycle(w.perm)) continue;
        const auto cyc = cycles(w.perm).front();
        if (in_c.count(cycle_product(base, w.tuple, cyc))) lifted.cyclic.push_back(static_cast<Element>(g));
    }
    std::sort(lifted.single.begin(), lifted.single.end());
    lifted.elements = lifted.single;
    lifted.elements.insert(lifted.elements.end(), lifted.cyclic.begin(), lifted.cyclic.end());
    std::sort(lifted.elements.begin(), lifted.elements.end());
    lifted.elements.erase(std::unique(lifted.elements.begin(), lifted.elements.end()), lifted.elements.end());
    lifted.target = layout.encode({std::vector<Element>(static_cast<std::size_t>(n), z), id});
    lifted.group = std::move(group);
    return lifted;
}

FamilyCertificate wreath_lift(const FamilyCertificate& base, int n, const BuildOptions& opts) {
    if (!base.pst_claim) throw Error(ErrorKind::InvalidParameter, "base certificate carries no PST claim");
    auto lifted = lift_connection_set(*base.group, base.conn.elements, base.z, n, opts);
    Owned o{lifted.group, std::make_shared<const ConjugacyData>(conjugacy(*lifted.group))};
    FamilyCertificate cert;
    cert.conn = validated(o, lifted.elements);
    cert.z = lifted.target;
    cert.tau = base.tau;
    cert.tau_tag = base.tau_tag;
    cert.claimed_size = base.claimed_size;
    cert.source = "wreath lift of " + base.source + " to degree " + std::to_string(n);
    cert.group = o.group;
    cert.conj = o.conj;
    return cert;
}

UndirectedFixture undirected_wreath_fixture(int base_order, std::vector<Element> base_set, Element base_target,
                                            double tau, int n) {
    const auto base = build_cyclic(base_order);
    auto lifted = lift_connection_set(base, base_set, base_target, n);
    return {lifted.group, lifted.elements, lifted.target, tau};
}

std::vector<FamilyCertificate> shipped_certificates() {
    std::vector<FamilyCertificate> out;
    auto idx = [](std::vector<int> d, int r) { return abelian_index(d, r); };

    out.push_back(family_z3n(1, std::vector<Element>{1}));
    out.push_back(family_z3n(2, std::vector<Element>{idx({1, 0}, 3), idx({0, 1}, 3), idx({1, 1}, 3)}));
    out.push_back(family_z3n(3, std::vector<Element>{idx({1, 0, 0}, 3), idx({0, 1, 0}, 3), idx({0, 0, 1}, 3),
                                                     idx({1, 1, 1}, 3)}));
    out.push_back(family_z4n(1, std::vector<Element>{1}));
    out.push_back(family_z4n(2, std::vector<Element>{idx({1, 0}, 4), idx({0, 1}, 4)}));
    out.push_back(z8_example());
    out.push_back(family_extraspecial3(1, 3));
    out.push_back(family_extraspecial3(1, 9));
    out.push_back(family_m2(5));
    out.push_back(wreath_lift(family_z3n(1, std::vector<Element>{1}), 2));
    out.push_back(wreath_lift(family_z3n(1, std::vector<Element>{1}), 3));
    out.push_back(wreath_lift(family_z4n(1, std::vector<Element>{1}), 2));
    out.push_back(family_extraspecial3(2, 3));
    return out;
}

nlohmann::json certificate_json(const FamilyCertificate& cert) {
    nlohmann::json j;
    j["group"] = cert.group->name();
    j["connection_classes"] = cert.conn.class_indices;
    j["connection_elements"] = cert.conn.elements;
    j["z"] = cert.z;
    j["z_label"] = cert.group->label(cert.z);
    j["tau"] = cert.tau_tag;
    j["claimed_size"] = cert.claimed_size;
    j["pst_claim"] = cert.pst_claim;
    j["source"] = cert.source;
    if (!cert.notes.empty()) j["notes"] = cert.notes;
    return j;
}

FamilyCertificate certificate_from_json(const nlohmann::json& doc, const BuildOptions& opts) {
    try {
        auto o = own(build_from_name(doc.at("group").get<std::string>(), opts));
        const auto classes = doc.at("connection_classes").get<std::vector<int>>();
        FamilyCertificate cert;
        cert.conn = require_connection_set(*o.conj, classes);
        if (doc.contains("connection_elements") &&
            doc.at("connection_elements").get<std::vector<Element>>() != cert.conn.elements) {
            throw Error(ErrorKind::Schema, "connection elements do not match the listed classes");
        }
        cert.z = doc.at("z").get<Element>();
        if (!o.group->contains(cert.z)) throw Error(ErrorKind::Schema, "target out of range");
        if (doc.contains("z_label") && doc.at("z_label").get<std::string>() != o.group->label(cert.z)) {
            throw Error(ErrorKind::Schema, "target label does not match");
        }
        cert.tau_tag = doc.at("tau").get<std::string>();
        cert.tau = tau_from_tag(cert.tau_tag);
        cert.claimed_size = doc.at("claimed_size").get<int>();
        cert.pst_claim = doc.value("pst_claim", true);
        cert.source = doc.value("source", std::string{});
        if (doc.contains("notes")) cert.notes = doc.at("notes").get<std::vector<std::string>>();
        cert.group = o.group;
        cert.conj = o.conj;
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("certificate document: ") + e.what());
    }
}

ImportedVerdict verify_imported_claim(const ImportedTable& imported, double tol) {
    if (!imported.claim) throw Error(ErrorKind::Schema, "table carries no pst_claim");
    const auto& claim = *imported.claim;
    ImportedVerdict v;
    std::set<int> chosen(claim.connection_classes.begin(), claim.connection_classes.end());
    for (int c : chosen) {
        const int inv = imported.class_inv[static_cast<std::size_t>(c)];
        if (c == 0) v.orientation_issue = "identity class in C";
        else if (inv == c) v.orientation_issue = "class " + std::to_string(c) + " is real";
        else if (chosen.count(inv)) v.orientation_issue = "classes " + std::to_string(c) + " and " + std::to_string(inv) + " are mutually inverse";
        if (!v.orientation_issue.empty()) break;
    }
    v.oriented = v.orientation_issue.empty();
    v.tau = tau_from_tag(claim.tau.empty() ? std::string("2pi/3sqrt3") : claim.tau);
    v.check = check_pst_classes(imported.table, claim.connection_classes, claim.target_class, v.tau, tol);
    return v;
}

GroupTable build_from_name(const std::string& name, const BuildOptions& opts) {
    std::smatch m;
    static const std::regex cyclic(R"(z:(\d+))");
    static const std::regex power(R"(z(\d+)\^(\d+))");
    static const std::regex m2(R"(m2:(\d+))");
    static const std::regex extra(R"(extraspecial3:(\d+):(\d+))");
    static const std::regex sym(R"(sym:(\d+))");
    static const std::regex wreath(R"(wreath\((.+),(\d+)\))");
    if (std::regex_match(name, m, cyclic)) return build_cyclic(std::stoi(m[1]), opts);
    if (std::regex_match(name, m, power)) return build_abelian_power(std::stoi(m[1]), std::stoi(m[2]), opts);
    if (std::regex_match(name, m, m2)) return build_modular_maximal_cyclic(std::stoi(m[1]), opts);
    if (std::regex_match(name, m, extra)) return build_extraspecial3(std::stoi(m[1]), std::stoi(m[2]), opts);
    if (std::regex_match(name, m, sym)) return build_symmetric(std::stoi(m[1]), opts);
    if (std::regex_match(name, m, wreath)) {
        const auto base = build_from_name(m[1], opts);
        return build_wreath_sym(base, std::stoi(m[2]), opts);
    }
    throw Error(ErrorKind::InvalidParameter, "unknown group name '" + name + "'");
}

} // namespace ocpst
