#include "ocpst/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "ocpst/error.hpp"

namespace ocpst {

std::string Violation::describe() const {
    std::ostringstream os;
    switch (kind) {
    case ViolationKind::BadIndex: os << "class index " << class_index << " out of range"; break;
    case ViolationKind::IdentityClass: os << "class " << class_index << " is the identity class"; break;
    case ViolationKind::RealClass: os << "class " << class_index << " is real (closed under inversion)"; break;
    case ViolationKind::InversePair:
        os << "classes " << class_index << " and " << other_class << " are mutually inverse";
        break;
    case ViolationKind::NotNormal: os << "element set is not a union of conjugacy classes"; break;
    }
    return os.str();
}

std::string ConnectionCheck::describe() const {
    if (ok()) return "valid";
    std::string s;
    for (const auto& v : violations) s += (s.empty() ? "" : "; ") + v.describe();
    return s;
}

ConnectionCheck make_connection_set(const ConjugacyData& conj, std::span<const int> classes) {
    ConnectionCheck check;
    std::set<int> chosen;
    const auto d = static_cast<int>(conj.class_count());
    for (int c : classes) {
        if (c < 0 || c >= d) {
            check.violations.push_back({ViolationKind::BadIndex, c, -1});
            continue;
        }
        chosen.insert(c);
    }
    for (int c : chosen) {
        if (c == 0) {
            check.violations.push_back({ViolationKind::IdentityClass, c, -1});
            continue;
        }
        const int inv = conj.class_inv[static_cast<std::size_t>(c)];
        if (inv == c) {
            check.violations.push_back({ViolationKind::RealClass, c, -1});
        } else if (c < inv && chosen.count(inv)) {
            check.violations.push_back({ViolationKind::InversePair, c, inv});
        }
    }
    if (!check.violations.empty()) return check;

    ConnectionSet set;
    set.class_indices.assign(chosen.begin(), chosen.end());
    for (int c : set.class_indices) {
        const auto& cls = conj.classes[static_cast<std::size_t>(c)];
        set.elements.insert(set.elements.end(), cls.begin(), cls.end());
    }
    std::sort(set.elements.begin(), set.elements.end());
    check.set = std::move(set);
    return check;
}

ConnectionCheck connection_set_from_elements(const ConjugacyData& conj, std::span<const Element> elements) {
    std::set<Element> elems(elements.begin(), elements.end());
    std::set<int> classes;
    for (Element g : elems) {
        if (g < 0 || static_cast<std::size_t>(g) >= conj.class_of.size()) {
            ConnectionCheck bad;
            bad.violations.push_back({ViolationKind::BadIndex, g, -1});
            return bad;
        }
        classes.insert(conj.class_of[static_cast<std::size_t>(g)]);
    }
    std::size_t covered = 0;
    for (int c : classes) covered += conj.class_size(c);
    if (covered != elems.size()) {
        ConnectionCheck bad;
        bad.violations.push_back({ViolationKind::NotNormal, -1, -1});
        return bad;
    }
    std::vector<int> idx(classes.begin(), classes.end());
    return make_connection_set(conj, idx);
}

ConnectionSet require_connection_set(const ConjugacyData& conj, std::span<const int> classes) {
    auto check = make_connection_set(conj, classes);
    if (!check.ok()) throw Error(ErrorKind::Validation, check.describe());
    return std::move(*check.set);
}

ConnectionSet require_connection_set_elements(const ConjugacyData& conj, std::span<const Element> elements) {
    auto check = connection_set_from_elements(conj, elements);
    if (!check.ok()) throw Error(ErrorKind::Validation, check.describe());
    return std::move(*check.set);
}

bool is_inverse_free(const GroupTable& group, std::span<const Element> elements) {
    std::set<Element> s(elements.begin(), elements.end());
    if (s.count(group.identity())) return false;
    for (Element g : s)
        if (s.count(group.inv(g))) return false;
    return true;
}

OrientedCayleyGraph::OrientedCayleyGraph(const GroupTable& group, const ConjugacyData& conj, ConnectionSet conn)
    : group_(&group), conj_(&conj), conn_(std::move(conn)) {
    if (conj.group_order != group.order()) throw Error(ErrorKind::Inconsistency, "class data belongs to another group");
    if (!is_inverse_free(group, conn_.elements)) {
        throw Error(ErrorKind::Validation, "connection set meets its inverse set");
    }
}

Eigen::MatrixXd adjacency_matrix(const OrientedCayleyGraph& graph, std::size_t max_order) {
    const auto n = graph.order();
    if (n > max_order) throw Error(ErrorKind::SizeLimit, "adjacency matrix of order " + std::to_string(n));
    const auto& group = graph.group();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t h = 0; h < n; ++h)
        for (Element c : graph.connection().elements) {
            const Element g = group.mul(c, static_cast<Element>(h)); // arc h -> ch
            a(g, static_cast<Eigen::Index>(h)) = 1.0;
            a(static_cast<Eigen::Index>(h), g) = -1.0;
        }
    return a;
}

Eigen::MatrixXd undirected_adjacency_matrix(const GroupTable& group, std::span<const Element> elements) {
    const auto n = static_cast<Eigen::Index>(group.order());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index h = 0; h < n; ++h)
        for (Element c : elements) a(group.mul(c, static_cast<Element>(h)), h) = 1.0;
    return a;
}

Spectrum spectrum_from_classes(const CharacterTable& table, std::span<const int> classes) {
    Spectrum s;
    for (std::size_t i = 0; i < table.size(); ++i) {
        Complex sum{0.0, 0.0};
        for (int c : classes)
            sum += static_cast<double>(table.class_sizes[static_cast<std::size_t>(c)]) *
                   table.values(static_cast<Eigen::Index>(i), c);
        const Complex theta = (sum - std::conj(sum)) / static_cast<double>(table.degrees[i]);
        s.theta.push_back(theta);
        s.t.push_back(theta.imag());
    }
    return s;
}

Spectrum spectrum(const OrientedCayleyGraph& graph, const CharacterTable& table) {
    const auto& conj = graph.conj();
    if (table.class_sizes != conj.class_sizes() || table.group_order != graph.order()) {
        throw Error(ErrorKind::Inconsistency, "character table does not match the graph's group");
    }
    Spectrum s = spectrum_from_classes(table, graph.connection().class_indices);
    Complex trace{0.0, 0.0};
    for (std::size_t i = 0; i < s.theta.size(); ++i) {
        if (std::abs(s.theta[i].real()) >= table.tolerance) {
            throw Error(ErrorKind::Inconsistency, "eigenvalue with nonzero real part");
        }
        trace += static_cast<double>(table.degrees[i]) * static_cast<double>(table.degrees[i]) * s.theta[i];
    }
    if (std::abs(trace) >= table.tolerance * static_cast<double>(graph.order()) * (1.0 + static_cast<double>(graph.connection().elements.size()))) {
        throw Error(ErrorKind::Inconsistency, "spectrum does not sum to the zero trace");
    }
    return s;
}

std::vector<int> abelian_residue_counts(const GroupTable& group, Element v, const ConnectionSet& conn, int r) {
    if (group.family() != FamilyTag::Cyclic && group.family() != FamilyTag::AbelianPower) {
        throw Error(ErrorKind::InvalidParameter, "residue counts need a group Z_r^n");
    }
    int n = 0;
    for (std::size_t s = 1; s < group.order(); s *= static_cast<std::size_t>(r)) ++n;
    std::size_t check = 1;
    for (int i = 0; i < n; ++i) check *= static_cast<std::size_t>(r);
    if (check != group.order()) throw Error(ErrorKind::InvalidParameter, "group order is not a power of r");
    const auto vd = abelian_digits(v, r, n);
    std::vector<int> counts(static_cast<std::size_t>(r), 0);
    for (Element w : conn.elements) {
        const auto wd = abelian_digits(w, r, n);
        long long dot = 0;
        for (int i = 0; i < n; ++i) dot += static_cast<long long>(vd[static_cast<std::size_t>(i)]) * wd[static_cast<std::size_t>(i)];
        ++counts[static_cast<std::size_t>(dot % r)];
    }
    return counts;
}

Complex theta_from_residue_counts(std::span<const int> counts, int r) {
    double s = 0.0;
    for (int j = 1; j < r; ++j) s += counts[static_cast<std::size_t>(j)] * std::sin(2.0 * std::numbers::pi * j / r);
    return {0.0, 2.0 * s};
}

Eigen::MatrixXcd idempotent(const CharacterTable& table, int chi, const GroupTable& group, const ConjugacyData& conj,
                            std::size_t max_order) {
    const auto n = group.order();
    if (n > max_order) throw Error(ErrorKind::SizeLimit, "idempotent of order " + std::to_string(n));
    const double scale = table.degrees[static_cast<std::size_t>(chi)] / static_cast<double>(n);
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t g = 0; g < n; ++g) {
        const Element ginv = group.inv(static_cast<Element>(g));
        for (std::size_t h = 0; h < n; ++h) {
            const int cls = conj.class_of[static_cast<std::size_t>(group.mul(static_cast<Element>(h), ginv))];
            e(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h)) = table.values(chi, cls) * scale;
        }
    }
    return e;
}

OrientedClassUnions::OrientedClassUnions(const ConjugacyData& conj, int max_classes)
    : conj_(&conj), max_classes_(max_classes) {
    if (max_classes < 1) throw Error(ErrorKind::InvalidParameter, "max_classes must be >= 1");
    for (std::size_t c = 1; c < conj.class_count(); ++c) {
        const int inv = conj.class_inv[c];
        if (static_cast<int>(c) < inv) pairs_.emplace_back(static_cast<int>(c), inv);
    }
    digits_.assign(pairs_.size(), 0);
    done_ = pairs_.empty();
}

bool OrientedClassUnions::advance() {
    for (auto& d : digits_) {
        if (++d < 3) return true;
        d = 0;
    }
    return false;
}

std::optional<ConnectionSet> OrientedClassUnions::next() {
    while (!done_) {
        if (!advance()) {
            done_ = true;
            break;
        }
        int chosen = 0;
        std::vector<int> cls;
        std::vector<int> inv;
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            if (digits_[p] == 0) continue;
            ++chosen;
            const auto [a, b] = pairs_[p];
            cls.push_back(digits_[p] == 1 ? a : b);
            inv.push_back(digits_[p] == 1 ? b : a);
        }
        if (chosen > max_classes_) continue;
        std::sort(cls.begin(), cls.end());
        std::sort(inv.begin(), inv.end());
        if (!(cls < inv)) continue;
        auto check = make_connection_set(*conj_, cls);
        return std::move(*check.set);
    }
    return std::nullopt;
}

std::vector<ConnectionSet> enumerate_oriented_class_unions(const ConjugacyData& conj, int max_classes) {
    OrientedClassUnions stream(conj, max_classes);
    std::vector<ConnectionSet> out;
    while (auto s = stream.next()) out.push_back(std::move(*s));
    return out;
}

bool is_connected(const OrientedCayleyGraph& graph) {
    return subgroup_closure(graph.group(), graph.connection().elements).size() == graph.order();
}

std::string to_dot(const OrientedCayleyGraph& graph) {
    std::ostringstream os;
    const auto& g = graph.group();
    os << "digraph cayley {\n";
    for (std::size_t v = 0; v < g.order(); ++v) os << "  " << v << " [label=\"" << g.label(static_cast<Element>(v)) << "\"];\n";
    for (std::size_t v = 0; v < g.order(); ++v)
        for (Element c : graph.connection().elements)
            os << "  " << v << " -> " << g.mul(c, static_cast<Element>(v)) << ";\n";
    os << "}\n";
    return os.str();
}

std::string adjacency_csv(const Eigen::MatrixXd& a) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? "," : "") << static_cast<int>(a(i, j));
        os << "\n";
    }
    return os.str();
}

nlohmann::json spectrum_json(const Spectrum& spec, const CharacterTable& table) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < spec.theta.size(); ++i)
        arr.push_back({{"character", i}, {"degree", table.degrees[i]}, {"im_theta", spec.t[i]}});
    return arr;
}

} // namespace ocpst
