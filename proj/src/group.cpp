#include "ocpst/group.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "ocpst/error.hpp"
#include "ocpst/wreath.hpp"

namespace ocpst {

const char* to_string(FamilyTag tag) {
    switch (tag) {
    case FamilyTag::None: return "none";
    case FamilyTag::Cyclic: return "cyclic";
    case FamilyTag::AbelianPower: return "abelian-power";
    case FamilyTag::Extraspecial3: return "extraspecial3";
    case FamilyTag::ModularMaximalCyclic: return "modular-maximal-cyclic";
    case FamilyTag::Wreath: return "wreath";
    case FamilyTag::Symmetric: return "symmetric";
    case FamilyTag::Imported: return "imported";
    }
    return "none";
}

namespace {

constexpr std::size_t kFullAssociativityLimit = 256;
constexpr std::uint64_t kSpotCheckSeed = 0x5eed'ab1eULL;

void check_size(std::size_t order, const BuildOptions& opts) {
    if (order > opts.max_order) {
        throw Error(ErrorKind::SizeLimit, "group order " + std::to_string(order) +
                                              " exceeds configured maximum " +
                                              std::to_string(opts.max_order));
    }
}

std::size_t checked_power(long long base, int exp, const BuildOptions& opts) {
    std::size_t result = 1;
    for (int i = 0; i < exp; ++i) {
        result *= static_cast<std::size_t>(base);
        check_size(result, opts);
    }
    return result;
}

long long mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

GroupTable::GroupTable(std::size_t order, std::vector<Element> mul, Element identity,
                       std::vector<std::string> labels, FamilyTag family, std::string name)
    : order_(order), mul_(std::move(mul)), identity_(identity), labels_(std::move(labels)),
      family_(family), name_(std::move(name)) {
    if (order_ == 0) throw Error(ErrorKind::InvalidParameter, "group order must be positive");
    if (mul_.size() != order_ * order_) {
        throw Error(ErrorKind::Validation, "multiplication table has wrong size");
    }
    if (!contains(identity_)) throw Error(ErrorKind::Validation, "identity out of range");
    if (labels_.empty()) {
        labels_.resize(order_);
        for (std::size_t g = 0; g < order_; ++g) labels_[g] = std::to_string(g);
    }
    if (labels_.size() != order_) throw Error(ErrorKind::Validation, "label count mismatch");

    // Latin square.
    std::vector<char> seen(order_);
    for (std::size_t a = 0; a < order_; ++a) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t b = 0; b < order_; ++b) {
            Element v = mul_[a * order_ + b];
            if (!contains(v) || seen[static_cast<std::size_t>(v)]) {
                throw Error(ErrorKind::Validation, "row " + std::to_string(a) + " is not a permutation");
            }
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    for (std::size_t b = 0; b < order_; ++b) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t a = 0; a < order_; ++a) {
            Element v = mul_[a * order_ + b];
            if (seen[static_cast<std::size_t>(v)]) {
                throw Error(ErrorKind::Validation, "column " + std::to_string(b) + " is not a permutation");
            }
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    for (std::size_t g = 0; g < order_; ++g) {
        auto e = static_cast<Element>(g);
        if (this->mul(identity_, e) != e || this->mul(e, identity_) != e) {
            throw Error(ErrorKind::Validation, "identity axiom fails at element " + std::to_string(g));
        }
    }
    inv_.assign(order_, -1);
    for (std::size_t a = 0; a < order_; ++a) {
        for (std::size_t b = 0; b < order_; ++b) {
            if (mul_[a * order_ + b] == identity_) {
                inv_[a] = static_cast<Element>(b);
                break;
            }
        }
        if (this->mul(static_cast<Element>(a), inv_[a]) != identity_ ||
            this->mul(inv_[a], static_cast<Element>(a)) != identity_) {
            throw Error(ErrorKind::Validation, "inverse axiom fails at element " + std::to_string(a));
        }
    }

    auto assoc = [&](Element a, Element b, Element c) {
        if (this->mul(this->mul(a, b), c) != this->mul(a, this->mul(b, c))) {
            throw Error(ErrorKind::Validation, "associativity fails on (" + std::to_string(a) + "," +
                                                   std::to_string(b) + "," + std::to_string(c) + ")");
        }
    };
    const auto n = static_cast<Element>(order_);
    if (order_ <= kFullAssociativityLimit) {
        for (Element a = 0; a < n; ++a)
            for (Element b = 0; b < n; ++b)
                for (Element c = 0; c < n; ++c) assoc(a, b, c);
    } else {
        std::mt19937_64 rng(kSpotCheckSeed);
        std::uniform_int_distribution<Element> pick(0, n - 1);
        for (std::size_t i = 0; i < 10 * order_; ++i) assoc(pick(rng), pick(rng), pick(rng));
    }
}

Element GroupTable::pow(Element g, long long k) const {
    if (k < 0) {
        g = inv(g);
        k = -k;
    }
    Element result = identity_;
    Element base = g;
    while (k > 0) {
        if (k & 1) result = mul(result, base);
        base = mul(base, base);
        k >>= 1;
    }
    return result;
}

int GroupTable::element_order(Element g) const {
    int k = 1;
    Element x = g;
    while (x != identity_) {
        x = mul(x, g);
        ++k;
    }
    return k;
}

std::optional<Element> GroupTable::find_label(std::string_view label) const {
    for (std::size_t g = 0; g < order_; ++g)
        if (labels_[g] == label) return static_cast<Element>(g);
    return std::nullopt;
}

GroupTable build_cyclic(int r, const BuildOptions& opts) {
    if (r < 1) throw Error(ErrorKind::InvalidParameter, "cyclic order must be >= 1");
    const auto n = static_cast<std::size_t>(r);
    check_size(n, opts);
    std::vector<Element> mul(n * n);
    std::vector<std::string> labels(n);
    for (int a = 0; a < r; ++a) {
        labels[static_cast<std::size_t>(a)] = std::to_string(a);
        for (int b = 0; b < r; ++b) mul[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = (a + b) % r;
    }
    return GroupTable(n, std::move(mul), 0, std::move(labels), FamilyTag::Cyclic, "z:" + std::to_string(r));
}

std::vector<int> abelian_digits(Element g, int r, int n) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        d[static_cast<std::size_t>(i)] = g % r;
        g /= r;
    }
    return d;
}

Element abelian_index(std::span<const int> digits, int r) {
    Element g = 0;
    for (int d : digits) g = g * r + static_cast<Element>(mod(d, r));
    return g;
}

GroupTable build_abelian_power(int r, int n, const BuildOptions& opts) {
    if (r < 2 || n < 1) throw Error(ErrorKind::InvalidParameter, "abelian power needs r >= 2, n >= 1");
    const std::size_t order = checked_power(r, n, opts);
    std::vector<Element> mul(order * order);
    std::vector<std::string> labels(order);
    std::vector<std::vector<int>> digits(order);
    for (std::size_t g = 0; g < order; ++g) {
        digits[g] = abelian_digits(static_cast<Element>(g), r, n);
        if (n == 1) {
            labels[g] = std::to_string(digits[g][0]);
        } else {
            std::string s = "(";
            for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(digits[g][static_cast<std::size_t>(i)]);
            labels[g] = s + ")";
        }
    }
    std::vector<int> sum(static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < order; ++a)
        for (std::size_t b = 0; b < order; ++b) {
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = digits[a][i] + digits[b][i];
            mul[a * order + b] = abelian_index(sum, r);
        }
    return GroupTable(order, std::move(mul), 0, std::move(labels), FamilyTag::AbelianPower,
                      "z" + std::to_string(r) + "^" + std::to_string(n));
}

// Heisenberg coordinates: index = ((a digits) (b digits) c) base 3, c least significant,
// so the centre is {0, 1, 2}.  Exponent-9 type: index = 3a + b for x^a y^b, a in Z_9.
std::vector<int> extraspecial3_quotient(int n, int exponent_type, Element g) {
    if (exponent_type == 9) {
        return {(g / 3) % 3, g % 3};
    }
    auto d = abelian_digits(g, 3, 2 * n + 1);
    d.pop_back();
    return d;
}

Element extraspecial3_element(int n, int exponent_type, std::span<const int> quotient, int central) {
    if (exponent_type == 9) {
        const auto a = static_cast<int>(mod(quotient[0] + 3 * central, 9));
        return 3 * a + static_cast<int>(mod(quotient[1], 3));
    }
    std::vector<int> d(quotient.begin(), quotient.end());
    d.resize(static_cast<std::size_t>(2 * n));
    d.push_back(central);
    return abelian_index(d, 3);
}

Element extraspecial3_center_generator(int n, int exponent_type) {
    std::vector<int> zero(static_cast<std::size_t>(2 * n), 0);
    return extraspecial3_element(n, exponent_type, zero, 1);
}

GroupTable build_extraspecial3(int n, int exponent_type, const BuildOptions& opts) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "extraspecial3 needs n >= 1");
    if (exponent_type != 3 && exponent_type != 9) {
        throw Error(ErrorKind::InvalidParameter, "exponent type must be 3 or 9");
    }
    if (exponent_type == 9 && n != 1) {
        throw Error(ErrorKind::InvalidParameter, "exponent-9 extraspecial group only provided at order 27");
    }
    const std::string name = "extraspecial3:" + std::to_string(n) + ":" + std::to_string(exponent_type);
    if (exponent_type == 9) {
        const std::size_t order = 27;
        check_size(order, opts);
        std::vector<Element> mul(order * order);
        std::vector<std::string> labels(order);
        const int twist[3] = {1, 4, 7}; // 4^b mod 9
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 3; ++b) {
                const auto g = static_cast<std::size_t>(3 * a + b);
                std::string s;
                if (a == 0 && b == 0) s = "e";
                if (a == 1) s += "x";
                if (a > 1) s += "x^" + std::to_string(a);
                if (b == 1) s += "y";
                if (b == 2) s += "y^2";
                labels[g] = s;
                for (int c = 0; c < 9; ++c)
                    for (int d = 0; d < 3; ++d) {
                        const int prod_a = (a + twist[b] * c) % 9;
                        const int prod_b = (b + d) % 3;
                        mul[g * order + static_cast<std::size_t>(3 * c + d)] = 3 * prod_a + prod_b;
                    }
            }
        return GroupTable(order, std::move(mul), 0, std::move(labels), FamilyTag::Extraspecial3, name);
    }

    const int dims = 2 * n + 1;
    const std::size_t order = checked_power(3, dims, opts);
    std::vector<std::vector<int>> digits(order);
    std::vector<std::string> labels(order);
    for (std::size_t g = 0; g < order; ++g) {
        digits[g] = abelian_digits(static_cast<Element>(g), 3, dims);
        std::string s = "(";
        for (int i = 0; i < dims; ++i) {
            if (i == n || i == 2 * n) s += ";";
            s += std::to_string(digits[g][static_cast<std::size_t>(i)]);
        }
        labels[g] = s + ")";
    }
    std::vector<Element> mul(order * order);
    std::vector<int> prod(static_cast<std::size_t>(dims));
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t g = 0; g < order; ++g)
        for (std::size_t h = 0; h < order; ++h) {
            const auto& x = digits[g];
            const auto& y = digits[h];
            int dot = 0;
            for (std::size_t i = 0; i < un; ++i) {
                prod[i] = x[i] + y[i];
                prod[un + i] = x[un + i] + y[un + i];
                dot += x[i] * y[un + i];
            }
            prod[2 * un] = x[2 * un] + y[2 * un] + dot;
            mul[g * order + h] = abelian_index(prod, 3);
        }
    return GroupTable(order, std::move(mul), 0, std::move(labels), FamilyTag::Extraspecial3, name);
}

Element m2_element(int n, long long x_exponent, int s_exponent) {
    const long long xo = 1LL << (n - 1);
    return static_cast<Element>(2 * mod(x_exponent, xo) + mod(s_exponent, 2));
}

GroupTable build_modular_maximal_cyclic(int n, const BuildOptions& opts) {
    if (n < 3) throw Error(ErrorKind::InvalidParameter, "M_2(n) needs n >= 3");
    if (n > 62) throw Error(ErrorKind::SizeLimit, "M_2(n) order overflows");
    const std::size_t order = std::size_t{1} << n;
    check_size(order, opts);
    const long long xo = 1LL << (n - 1);
    const long long twist = (1LL << (n - 2)) + 1; // s x s = x^twist
    std::vector<Element> mul(order * order);
    std::vector<std::string> labels(order);
    for (long long a = 0; a < xo; ++a)
        for (int b = 0; b < 2; ++b) {
            const auto g = static_cast<std::size_t>(2 * a + b);
            std::string s;
            if (a == 1) s = "x";
            if (a > 1) s = "x^" + std::to_string(a);
            if (b == 1) s += "s";
            labels[g] = s.empty() ? "e" : s;
            for (long long c = 0; c < xo; ++c)
                for (int d = 0; d < 2; ++d) {
                    // x^a s^b x^c s^d = x^(a + c twist^b) s^(b+d)
                    const long long ce = b ? mod(c * twist, xo) : c;
                    mul[g * order + static_cast<std::size_t>(2 * c + d)] =
                        static_cast<Element>(2 * mod(a + ce, xo) + (b + d) % 2);
                }
        }
    return GroupTable(order, std::move(mul), 0, std::move(labels), FamilyTag::ModularMaximalCyclic,
                      "m2:" + std::to_string(n));
}

GroupTable build_symmetric(int n, const BuildOptions& opts) {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "symmetric group needs n >= 1");
    std::size_t order = 1;
    for (int i = 2; i <= n; ++i) {
        order *= static_cast<std::size_t>(i);
        check_size(order, opts);
    }
    std::vector<Permutation> perms(order);
    std::vector<std::string> labels(order);
    for (std::size_t r = 0; r < order; ++r) {
        perms[r] = permutation_unrank(n, r);
        std::string s = "[";
        for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(perms[r][static_cast<std::size_t>(i)]);
        labels[r] = s + "]";
    }
    std::vector<Element> mul(order * order);
    for (std::size_t a = 0; a < order; ++a)
        for (std::size_t b = 0; b < order; ++b)
            mul[a * order + b] = static_cast<Element>(permutation_rank(compose(perms[a], perms[b])));
    return GroupTable(order, std::move(mul), 0, std::move(labels), FamilyTag::Symmetric,
                      "sym:" + std::to_string(n));
}

std::vector<Element> subgroup_closure(const GroupTable& group, std::span<const Element> generators) {
    std::vector<char> in(group.order(), 0);
    std::vector<Element> members{group.identity()};
    in[static_cast<std::size_t>(group.identity())] = 1;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (Element s : generators) {
            Element next = group.mul(members[i], s);
            if (!in[static_cast<std::size_t>(next)]) {
                in[static_cast<std::size_t>(next)] = 1;
                members.push_back(next);
            }
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

std::vector<Element> derived_subgroup(const GroupTable& group, std::span<const Element> subgroup) {
    std::vector<char> in(group.order(), 0);
    std::vector<Element> gens;
    std::vector<Element> current{group.identity()};
    in[static_cast<std::size_t>(group.identity())] = 1;
    for (Element g : subgroup)
        for (Element h : subgroup) {
            Element c = group.commutator(g, h);
            if (!in[static_cast<std::size_t>(c)]) {
                gens.push_back(c);
                current = subgroup_closure(group, gens);
                for (Element x : current) in[static_cast<std::size_t>(x)] = 1;
            }
        }
    return current;
}

DerivedSeries derived_series_solvable(const GroupTable& group) {
    DerivedSeries series;
    std::vector<Element> current(group.order());
    std::iota(current.begin(), current.end(), 0);
    series.orders.push_back(current.size());
    while (current.size() > 1) {
        auto next = derived_subgroup(group, current);
        if (next.size() == current.size()) break;
        current = std::move(next);
        series.orders.push_back(current.size());
    }
    series.solvable = current.size() == 1;
    return series;
}

nlohmann::json group_to_json(const GroupTable& group) {
    const std::size_t n = group.order();
    nlohmann::json mul = nlohmann::json::array();
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<Element> row(group.table().begin() + static_cast<std::ptrdiff_t>(a * n),
                                 group.table().begin() + static_cast<std::ptrdiff_t>((a + 1) * n));
        mul.push_back(std::move(row));
    }
    nlohmann::json doc;
    doc["order"] = n;
    doc["identity"] = group.identity();
    doc["mul"] = std::move(mul);
    doc["labels"] = group.labels();
    if (!group.name().empty()) doc["name"] = group.name();
    if (group.family() != FamilyTag::None) doc["family"] = to_string(group.family());
    return doc;
}

GroupTable group_from_json(const nlohmann::json& doc, const BuildOptions& opts) {
    try {
        const auto n = doc.at("order").get<std::size_t>();
        check_size(n, opts);
        const auto identity = doc.at("identity").get<Element>();
        const auto& rows = doc.at("mul");
        if (!rows.is_array() || rows.size() != n) throw Error(ErrorKind::Schema, "mul must have order rows");
        std::vector<Element> mul;
        mul.reserve(n * n);
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != n) throw Error(ErrorKind::Schema, "mul rows must have order entries");
            for (const auto& v : row) mul.push_back(v.get<Element>());
        }
        std::vector<std::string> labels;
        if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
        FamilyTag family = FamilyTag::None;
        if (doc.contains("family")) {
            const auto f = doc.at("family").get<std::string>();
            for (auto tag : {FamilyTag::Cyclic, FamilyTag::AbelianPower, FamilyTag::Extraspecial3,
                             FamilyTag::ModularMaximalCyclic, FamilyTag::Wreath, FamilyTag::Symmetric,
                             FamilyTag::Imported, FamilyTag::None})
                if (f == to_string(tag)) family = tag;
        }
        std::string name = doc.value("name", std::string{});
        return GroupTable(n, std::move(mul), identity, std::move(labels), family, std::move(name));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("group document: ") + e.what());
    }
}

} // namespace ocpst
