#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ocpst/characters.hpp"
#include "ocpst/conjugacy.hpp"
#include "ocpst/group.hpp"

namespace ocpst {

/// A union of conjugacy classes with no class paired with its own inverse class.
struct ConnectionSet {
    std::vector<int> class_indices; // sorted
    std::vector<Element> elements;  // sorted union of the classes
};

enum class ViolationKind { BadIndex, IdentityClass, RealClass, InversePair, NotNormal };

struct Violation {
    ViolationKind kind;
    int class_index = -1;
    int other_class = -1;

    std::string describe() const;
};

struct ConnectionCheck {
    std::optional<ConnectionSet> set;
    std::vector<Violation> violations;

    bool ok() const noexcept { return set.has_value(); }
    std::string describe() const;
};

ConnectionCheck make_connection_set(const ConjugacyData& conj, std::span<const int> classes);
/// Accepts an element set; it must be a union of classes (normality) as well as oriented.
ConnectionCheck connection_set_from_elements(const ConjugacyData& conj, std::span<const Element> elements);
/// Throws Error(Validation) carrying the violation list.
ConnectionSet require_connection_set(const ConjugacyData& conj, std::span<const int> classes);
ConnectionSet require_connection_set_elements(const ConjugacyData& conj, std::span<const Element> elements);

/// Element-level check that S and S^-1 are disjoint and e is not in S.
bool is_inverse_free(const GroupTable& group, std::span<const Element> elements);

/// Cay(G, C) with arcs g -> cg.  Holds non-owning references; the group and
/// its class data must outlive the graph.
class OrientedCayleyGraph {
public:
    OrientedCayleyGraph(const GroupTable& group, const ConjugacyData& conj, ConnectionSet conn);

    const GroupTable& group() const noexcept { return *group_; }
    const ConjugacyData& conj() const noexcept { return *conj_; }
    const ConnectionSet& connection() const noexcept { return conn_; }
    std::size_t order() const noexcept { return group_->order(); }

private:
    const GroupTable* group_;
    const ConjugacyData* conj_;
    ConnectionSet conn_;
};

/// A[g][h] = +1 if g h^-1 in C, -1 if h g^-1 in C, 0 otherwise.  Column h of
/// A sends h to its out-neighbours ch, so U(t) = e^{tA} moves basis states
/// along arcs and PST from e to z reads |U(t)[z][e]| = 1.
Eigen::MatrixXd adjacency_matrix(const OrientedCayleyGraph& graph, std::size_t max_order = 4096);

/// Symmetric A_S[g][h] = 1 iff g h^-1 in S (undirected Cayley graph, S = S^-1).
Eigen::MatrixXd undirected_adjacency_matrix(const GroupTable& group, std::span<const Element> elements);

struct Spectrum {
    std::vector<Complex> theta; // per character, purely imaginary
    std::vector<double> t;      // Im theta
};

/// theta_chi = (chi(C) - conj chi(C)) / chi(e) from class indices alone.
Spectrum spectrum_from_classes(const CharacterTable& table, std::span<const int> classes);
Spectrum spectrum(const OrientedCayleyGraph& graph, const CharacterTable& table);

/// n_{v,j} = #{w in C : v.w = j mod r} for Z_r^n.
std::vector<int> abelian_residue_counts(const GroupTable& group, Element v, const ConnectionSet& conn, int r);
/// 2i sum_j n_j sin(2 j pi / r).
Complex theta_from_residue_counts(std::span<const int> counts, int r);

/// E_chi(g, h) = chi(h g^-1) chi(e) / |G|.
Eigen::MatrixXcd idempotent(const CharacterTable& table, int chi, const GroupTable& group, const ConjugacyData& conj,
                            std::size_t max_order = 4096);

/// Streams every inverse-free union of non-real classes with at most
/// max_classes classes, keeping only the lexicographically smaller of C and
/// C^-1.  Order is deterministic: choices per inverse pair are enumerated as
/// base-3 digits (none, first, second), first pair least significant.
class OrientedClassUnions {
public:
    OrientedClassUnions(const ConjugacyData& conj, int max_classes);

    std::optional<ConnectionSet> next();
    std::size_t pair_count() const noexcept { return pairs_.size(); }

private:
    bool advance();

    const ConjugacyData* conj_;
    int max_classes_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<int> digits_;
    bool done_ = false;
};

std::vector<ConnectionSet> enumerate_oriented_class_unions(const ConjugacyData& conj, int max_classes);

/// True iff <C> = G.
bool is_connected(const OrientedCayleyGraph& graph);

/// digraph with arcs g -> cg, labelled by element labels.
std::string to_dot(const OrientedCayleyGraph& graph);
std::string adjacency_csv(const Eigen::MatrixXd& a);
nlohmann::json spectrum_json(const Spectrum& spec, const CharacterTable& table);

} // namespace ocpst
