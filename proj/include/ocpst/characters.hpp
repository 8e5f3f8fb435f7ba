#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ocpst/conjugacy.hpp"
#include "ocpst/group.hpp"

namespace ocpst {

using Complex = std::complex<double>;

enum class Provenance { ClosedForm, Numerical, Imported };

const char* to_string(Provenance p);

/// Irreducible complex characters, one row per character and one column per
/// conjugacy class (in the class order of the ConjugacyData it was built from).
struct CharacterTable {
    Eigen::MatrixXcd values;
    std::vector<int> degrees;
    std::vector<std::size_t> class_sizes;
    std::size_t group_order = 0;
    Provenance provenance = Provenance::Numerical;
    double tolerance = 1e-8;

    /// Optional exact layer: value(i, j) = sum_k coeff[k] zeta_m^k with
    /// coeff = cyclotomic[(i * classes + j) * m .. + m).  Empty when absent.
    int cyclotomic_order = 0;
    std::vector<int> cyclotomic;

    std::size_t size() const noexcept { return degrees.size(); }
    Complex operator()(int chi, int cls) const { return values(chi, cls); }
    bool has_exact() const noexcept { return cyclotomic_order > 0 && !cyclotomic.empty(); }
    std::span<const int> exact(int chi, int cls) const;
};

struct CharacterOptions {
    double tolerance = 1e-8;
    std::uint64_t seed = 42;
    int max_retries = 8;
    std::size_t max_classes = 128;
};

/// Throws CorruptTable when row/column orthogonality, the degree sum or the
/// identity column fail at the table's tolerance.
void validate_character_table(const CharacterTable& table);

/// chi_v(w) = exp(2 pi i v.w / r); rows indexed by v in element order.
CharacterTable abelian_character_table(int r, int n, double tolerance = 1e-8);

/// Class-algebra (Burnside) method: common eigenvectors of a seeded random
/// combination of the class multiplication matrices.  Rows are sorted by
/// degree, then by value vector (rounded to 1e-6) in decreasing order, so the
/// trivial character is row 0.
CharacterTable character_table_numerical(const GroupTable& group, const ConjugacyData& conj,
                                         const CharacterOptions& opts = {});

/// Closed form for Z_r^n family groups, numerical otherwise.
CharacterTable character_table(const GroupTable& group, const ConjugacyData& conj, const CharacterOptions& opts = {});

/// Sorts rows into the canonical order used by the numerical algorithm.
void canonicalize_rows(CharacterTable& table);

struct ImportedClaim {
    std::vector<int> connection_classes;
    int target_class = -1;
    std::string tau;
};

struct ImportedTable {
    CharacterTable table;
    int exponent = 1;
    std::vector<int> class_rep_orders;
    std::map<long long, std::vector<int>> power_maps;
    /// Class of inverses, read off from complex-conjugate columns.
    std::vector<int> class_inv;
    std::optional<ImportedClaim> claim;

    /// Class of g^k for each class; uses the supplied power maps (composed
    /// over the factorisation of k mod exponent) and falls back to the Galois
    /// action on exact cyclotomic values.
    std::vector<int> class_power(long long k) const;
};

ImportedTable import_character_table(const nlohmann::json& doc, double tolerance = 1e-8);

/// Emits complex values always, and cyclotomic coefficients when exact data exists.
nlohmann::json export_character_table(const CharacterTable& table, int exponent,
                                      const std::vector<int>& class_rep_orders = {},
                                      const std::map<long long, std::vector<int>>& power_maps = {});

/// Row and column permutations with b(row_map[i], col_map[j]) == a(i, j).
struct TableMatch {
    std::vector<int> row_map;
    std::vector<int> col_map;
};

std::optional<TableMatch> match_tables(const CharacterTable& a, const CharacterTable& b, double tol = 1e-8);

/// Elements g with |chi(g) - chi(e)| < tolerance.
std::vector<Element> kernel(const CharacterTable& table, int chi, const ConjugacyData& conj);
/// Kernel at class level.
std::vector<int> kernel_classes(const CharacterTable& table, int chi);

/// Galois stabilisers H_chi inside the units mod the group exponent, via
/// chi^{sigma_k}(g) = chi(g^k).
struct GaloisData {
    int exponent = 1;
    std::vector<int> units;
    std::vector<std::vector<int>> stabilizers;
};

using ClassPowerMap = std::function<std::vector<int>(long long)>;

GaloisData galois_stabilizers(const CharacterTable& table, int exponent, const ClassPowerMap& power);
GaloisData galois_stabilizers(const CharacterTable& table, const ConjugacyData& conj);
GaloisData galois_stabilizers(const ImportedTable& imported);

/// Subgroup of the units mod m generated by the given residues.
std::vector<int> generated_unit_subgroup(int m, const std::vector<int>& generators);

/// True iff the intersection of the character fields Q(chi), chi in Y, is Q.
bool rational_intersection(const std::vector<int>& characters, const GaloisData& galois);

} // namespace ocpst
