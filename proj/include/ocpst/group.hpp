#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ocpst {

/// Dense element index in 0..order-1.
using Element = int;

enum class FamilyTag {
    None,
    Cyclic,
    AbelianPower,
    Extraspecial3,
    ModularMaximalCyclic,
    Wreath,
    Symmetric,
    Imported,
};

const char* to_string(FamilyTag tag);

struct BuildOptions {
    std::size_t max_order = 4096;
};

/// A finite group given by its full multiplication table.
///
/// The table is validated on construction: Latin square, two-sided identity,
/// and associativity (exhaustive up to order 256, seeded spot checks above).
/// Instances are immutable afterwards.
class GroupTable {
public:
    GroupTable(std::size_t order, std::vector<Element> mul, Element identity,
               std::vector<std::string> labels, FamilyTag family = FamilyTag::None,
               std::string name = {});

    std::size_t order() const noexcept { return order_; }
    Element identity() const noexcept { return identity_; }
    Element mul(Element a, Element b) const noexcept {
        return mul_[static_cast<std::size_t>(a) * order_ + static_cast<std::size_t>(b)];
    }
    Element inv(Element a) const noexcept { return inv_[static_cast<std::size_t>(a)]; }
    /// g^k for any integer k.
    Element pow(Element g, long long k) const;
    /// h g h^-1
    Element conjugate(Element g, Element h) const noexcept { return mul(mul(h, g), inv(h)); }
    Element commutator(Element g, Element h) const noexcept {
        return mul(mul(g, h), mul(inv(g), inv(h)));
    }
    int element_order(Element g) const;

    const std::string& label(Element g) const { return labels_[static_cast<std::size_t>(g)]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::optional<Element> find_label(std::string_view label) const;

    FamilyTag family() const noexcept { return family_; }
    /// Reproducible spec string, e.g. "z:8", "z4^2", "m2:5".
    const std::string& name() const noexcept { return name_; }

    const std::vector<Element>& table() const noexcept { return mul_; }
    bool contains(Element g) const noexcept {
        return g >= 0 && static_cast<std::size_t>(g) < order_;
    }

private:
    std::size_t order_;
    std::vector<Element> mul_;
    Element identity_;
    std::vector<Element> inv_;
    std::vector<std::string> labels_;
    FamilyTag family_;
    std::string name_;
};

GroupTable build_cyclic(int r, const BuildOptions& opts = {});

/// Z_r^n; element index is the base-r number with the first coordinate most significant.
GroupTable build_abelian_power(int r, int n, const BuildOptions& opts = {});
std::vector<int> abelian_digits(Element g, int r, int n);
Element abelian_index(std::span<const int> digits, int r);

/// Extraspecial group of order 3^(2n+1).  exponent_type 3 is the Heisenberg
/// group over F_3 with coordinates (a; b; c), product
/// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a.b').  exponent_type 9 (n = 1 only) is
/// Z_9 x| Z_3 with y x y^-1 = x^4.
GroupTable build_extraspecial3(int n, int exponent_type, const BuildOptions& opts = {});

/// Coordinates of an extraspecial element in G/Z (length 2n over F_3).
std::vector<int> extraspecial3_quotient(int n, int exponent_type, Element g);
/// Element with the given G/Z coordinates and central coordinate.
Element extraspecial3_element(int n, int exponent_type, std::span<const int> quotient, int central);
/// Canonical generator of the centre: (0;0;1) or x^3.
Element extraspecial3_center_generator(int n, int exponent_type);

/// M_2(n) = <x, s | x^(2^(n-1)) = s^2 = e, s x s = x^(2^(n-2)+1)>, element x^a s^b
/// at index 2a + b.
GroupTable build_modular_maximal_cyclic(int n, const BuildOptions& opts = {});
Element m2_element(int n, long long x_exponent, int s_exponent);

/// Full symmetric group on n points; elements in lexicographic rank order.
GroupTable build_symmetric(int n, const BuildOptions& opts = {});

/// Smallest subgroup containing the generators.
std::vector<Element> subgroup_closure(const GroupTable& group, std::span<const Element> generators);

struct DerivedSeries {
    bool solvable = false;
    /// Orders G = G^(0) > G^(1) > ... until the series stabilises.
    std::vector<std::size_t> orders;
    std::size_t length() const { return orders.empty() ? 0 : orders.size() - 1; }
};

std::vector<Element> derived_subgroup(const GroupTable& group, std::span<const Element> subgroup);
DerivedSeries derived_series_solvable(const GroupTable& group);

nlohmann::json group_to_json(const GroupTable& group);
GroupTable group_from_json(const nlohmann::json& doc, const BuildOptions& opts = {});

} // namespace ocpst
