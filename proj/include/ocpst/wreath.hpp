#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ocpst/conjugacy.hpp"
#include "ocpst/group.hpp"

namespace ocpst {

/// Permutation of {0..n-1} in one-line notation: p[i] is the image of i.
using Permutation = std::vector<int>;

/// Lexicographic rank of the one-line notation; identity has rank 0.
std::size_t permutation_rank(const Permutation& p);
Permutation permutation_unrank(int n, std::size_t rank);
/// (p q)(i) = p(q(i)).
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);
/// Disjoint cycles including fixed points.  Each cycle starts at its smallest
/// point and lists a, p(a), p^2(a), ...; cycles are ordered by that point.
std::vector<std::vector<int>> cycles(const Permutation& p);
bool is_full_cycle(const Permutation& p);
std::size_t factorial(int n);

/// (x; pi) in G wr S_n.
struct WreathElement {
    std::vector<Element> tuple;
    Permutation perm;

    friend bool operator==(const WreathElement&, const WreathElement&) = default;
};

/// Mixed-radix index of wreath elements: tuple digits major (first coordinate
/// most significant), permutation rank minor.
class WreathLayout {
public:
    WreathLayout(std::size_t base_order, int n);

    std::size_t order() const noexcept { return order_; }
    std::size_t base_order() const noexcept { return base_order_; }
    int degree() const noexcept { return n_; }

    Element encode(const WreathElement& w) const;
    WreathElement decode(Element g) const;

private:
    std::size_t base_order_;
    int n_;
    std::size_t perms_;
    std::size_t order_;
};

/// (x; pi)(y; rho) = (x . (pi . y); pi rho) with (pi . y)_i = y_{pi^-1(i)}.
WreathElement wreath_multiply(const GroupTable& base, const WreathElement& a, const WreathElement& b);

GroupTable build_wreath_sym(const GroupTable& base, int n, const BuildOptions& opts = {});

/// Cycle product y_a y_{k^-1(a)} ... y_{k^-(r-1)(a)} for the cycle k given as
/// (c_0, k(c_0), k^2(c_0), ...), with a the smallest point of the cycle.
/// Indices are 0-based.
Element cycle_product(const GroupTable& base, std::span<const Element> tuple, std::span<const int> cycle);

/// ty_g: for every base class, the multiset of lengths of cycles whose cycle
/// product lies in that class, sorted in decreasing order.
using WreathType = std::vector<std::vector<int>>;

WreathType wreath_type(const GroupTable& base, const ConjugacyData& base_classes, const WreathElement& g);

} // namespace ocpst
