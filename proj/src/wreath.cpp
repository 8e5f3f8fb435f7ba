#include "ocpst/wreath.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "ocpst/error.hpp"

namespace ocpst {

std::size_t factorial(int n) {
    std::size_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
    return f;
}

std::size_t permutation_rank(const Permutation& p) {
    const int n = static_cast<int>(p.size());
    std::size_t rank = 0;
    std::vector<char> used(p.size(), 0);
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int v = 0; v < p[static_cast<std::size_t>(i)]; ++v)
            if (!used[static_cast<std::size_t>(v)]) ++smaller;
        rank += static_cast<std::size_t>(smaller) * factorial(n - 1 - i);
        used[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] = 1;
    }
    return rank;
}

Permutation permutation_unrank(int n, std::size_t rank) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    Permutation p;
    p.reserve(pool.size());
    for (int i = n - 1; i >= 0; --i) {
        const std::size_t f = factorial(i);
        const std::size_t q = rank / f;
        rank %= f;
        p.push_back(pool[q]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(q));
    }
    return p;
}

Permutation compose(const Permutation& p, const Permutation& q) {
    Permutation r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[static_cast<std::size_t>(q[i])];
    return r;
}

Permutation inverse(const Permutation& p) {
    Permutation r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    return r;
}

std::vector<std::vector<int>> cycles(const Permutation& p) {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (seen[a]) continue;
        std::vector<int> c;
        for (int x = static_cast<int>(a); !seen[static_cast<std::size_t>(x)]; x = p[static_cast<std::size_t>(x)]) {
            seen[static_cast<std::size_t>(x)] = 1;
            c.push_back(x);
        }
        out.push_back(std::move(c));
    }
    return out;
}

bool is_full_cycle(const Permutation& p) { return cycles(p).size() == 1; }

WreathLayout::WreathLayout(std::size_t base_order, int n)
    : base_order_(base_order), n_(n), perms_(factorial(n)), order_(perms_) {
    for (int i = 0; i < n; ++i) order_ *= base_order;
}

Element WreathLayout::encode(const WreathElement& w) const {
    std::size_t idx = 0;
    for (Element x : w.tuple) idx = idx * base_order_ + static_cast<std::size_t>(x);
    return static_cast<Element>(idx * perms_ + permutation_rank(w.perm));
}

WreathElement WreathLayout::decode(Element g) const {
    auto idx = static_cast<std::size_t>(g);
    WreathElement w;
    w.perm = permutation_unrank(n_, idx % perms_);
    idx /= perms_;
    w.tuple.assign(static_cast<std::size_t>(n_), 0);
    for (int i = n_ - 1; i >= 0; --i) {
        w.tuple[static_cast<std::size_t>(i)] = static_cast<Element>(idx % base_order_);
        idx /= base_order_;
    }
    return w;
}

WreathElement wreath_multiply(const GroupTable& base, const WreathElement& a, const WreathElement& b) {
    const Permutation pinv = inverse(a.perm);
    WreathElement r;
    r.tuple.resize(a.tuple.size());
    for (std::size_t i = 0; i < a.tuple.size(); ++i)
        r.tuple[i] = base.mul(a.tuple[i], b.tuple[static_cast<std::size_t>(pinv[i])]);
    r.perm = compose(a.perm, b.perm);
    return r;
}

GroupTable build_wreath_sym(const GroupTable& base, int n, const BuildOptions& opts) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "wreath degree must be >= 1");
    std::size_t order = factorial(n);
    for (int i = 0; i < n; ++i) {
        order *= base.order();
        if (order > opts.max_order) {
            throw Error(ErrorKind::SizeLimit, "wreath product order exceeds configured maximum " +
                                                  std::to_string(opts.max_order));
        }
    }
    if (order > opts.max_order) {
        throw Error(ErrorKind::SizeLimit, "wreath product order exceeds configured maximum " +
                                              std::to_string(opts.max_order));
    }
    const WreathLayout layout(base.order(), n);
    std::vector<WreathElement> elems(order);
    std::vector<std::string> labels(order);
    for (std::size_t g = 0; g < order; ++g) {
        elems[g] = layout.decode(static_cast<Element>(g));
        std::string s = "(";
        for (std::size_t i = 0; i < elems[g].tuple.size(); ++i)
            s += (i ? "," : "") + base.label(elems[g].tuple[i]);
        s += ";[";
        for (std::size_t i = 0; i < elems[g].perm.size(); ++i)
            s += (i ? "," : "") + std::to_string(elems[g].perm[i]);
        labels[g] = s + "])";
    }
    // Identity tuple uses the base identity, which need not be index 0.
    WreathElement id{std::vector<Element>(static_cast<std::size_t>(n), base.identity()), permutation_unrank(n, 0)};
    std::vector<Element> mul(order * order);
    for (std::size_t a = 0; a < order; ++a)
        for (std::size_t b = 0; b < order; ++b)
            mul[a * order + b] = layout.encode(wreath_multiply(base, elems[a], elems[b]));
    std::string name = "wreath(" + (base.name().empty() ? std::string("?") : base.name()) + "," + std::to_string(n) + ")";
    return GroupTable(order, std::move(mul), layout.encode(id), std::move(labels), FamilyTag::Wreath, std::move(name));
}

Element cycle_product(const GroupTable& base, std::span<const Element> tuple, std::span<const int> cycle) {
    const auto n = static_cast<int>(tuple.size());
    if (cycle.empty()) throw Error(ErrorKind::InvalidParameter, "empty cycle");
    std::vector<char> seen(tuple.size(), 0);
    for (int c : cycle) {
        if (c < 0 || c >= n) throw Error(ErrorKind::InvalidParameter, "cycle point out of range");
        if (seen[static_cast<std::size_t>(c)]) throw Error(ErrorKind::InvalidParameter, "repeated point in cycle");
        seen[static_cast<std::size_t>(c)] = 1;
    }
    for (Element x : tuple)
        if (!base.contains(x)) throw Error(ErrorKind::InvalidParameter, "tuple entry out of range");
    const auto r = cycle.size();
    const auto start = static_cast<std::size_t>(std::min_element(cycle.begin(), cycle.end()) - cycle.begin());
    // Walk backwards along the cycle from its smallest point.
    Element prod = base.identity();
    for (std::size_t i = 0; i < r; ++i) {
        const int point = cycle[(start + r - i) % r];
        prod = base.mul(prod, tuple[static_cast<std::size_t>(point)]);
    }
    return prod;
}

WreathType wreath_type(const GroupTable& base, const ConjugacyData& base_classes, const WreathElement& g) {
    WreathType ty(base_classes.class_count());
    for (const auto& c : cycles(g.perm)) {
        const Element x = cycle_product(base, g.tuple, c);
        ty[static_cast<std::size_t>(base_classes.class_of[static_cast<std::size_t>(x)])].push_back(static_cast<int>(c.size()));
    }
    for (auto& part : ty) std::sort(part.begin(), part.end(), std::greater<>());
    return ty;
}

} // namespace ocpst
