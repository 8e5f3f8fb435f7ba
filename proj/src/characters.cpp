#include "ocpst/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "ocpst/error.hpp"

namespace ocpst {

const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::ClosedForm: return "closed-form";
    case Provenance::Numerical: return "numerical";
    case Provenance::Imported: return "imported";
    }
    return "numerical";
}

std::span<const int> CharacterTable::exact(int chi, int cls) const {
    const auto m = static_cast<std::size_t>(cyclotomic_order);
    const auto offset = (static_cast<std::size_t>(chi) * class_sizes.size() + static_cast<std::size_t>(cls)) * m;
    return {cyclotomic.data() + offset, m};
}

namespace {

Complex root_of_unity(long long k, long long m) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % m) / static_cast<double>(m);
    return {std::cos(angle), std::sin(angle)};
}

Complex evaluate_cyclotomic(std::span<const int> coeffs) {
    const auto m = static_cast<long long>(coeffs.size());
    Complex v{0.0, 0.0};
    for (long long k = 0; k < m; ++k)
        if (coeffs[static_cast<std::size_t>(k)] != 0) v += static_cast<double>(coeffs[static_cast<std::size_t>(k)]) * root_of_unity(k, m);
    return v;
}

std::string fmt_index(const char* what, std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << what << " (" << i << ", " << j << ")";
    return os.str();
}

} // namespace

void validate_character_table(const CharacterTable& t) {
    const auto h = t.size();
    const auto classes = t.class_sizes.size();
    if (static_cast<std::size_t>(t.values.rows()) != h || static_cast<std::size_t>(t.values.cols()) != classes) {
        throw Error(ErrorKind::Schema, "value matrix shape does not match degrees and class sizes");
    }
    if (h != classes) throw Error(ErrorKind::Schema, "number of characters differs from number of classes");
    if (classes == 0) throw Error(ErrorKind::Schema, "empty character table");
    if (t.class_sizes[0] != 1) throw Error(ErrorKind::Schema, "class 0 must be the identity class");
    const std::size_t order = std::accumulate(t.class_sizes.begin(), t.class_sizes.end(), std::size_t{0});
    if (order != t.group_order) throw Error(ErrorKind::Schema, "class sizes do not sum to the group order");

    const double g = static_cast<double>(t.group_order);
    const double tol = t.tolerance;
    const double orth_tol = tol * std::sqrt(g);

    std::size_t degree_sq = 0;
    for (std::size_t i = 0; i < h; ++i) {
        const Complex v = t.values(static_cast<Eigen::Index>(i), 0);
        if (std::abs(v - static_cast<double>(t.degrees[i])) >= tol || t.degrees[i] < 1) {
            throw Error(ErrorKind::CorruptTable, "identity column does not match degree of character " + std::to_string(i));
        }
        degree_sq += static_cast<std::size_t>(t.degrees[i]) * static_cast<std::size_t>(t.degrees[i]);
    }
    if (degree_sq != t.group_order) {
        throw Error(ErrorKind::CorruptTable, "sum of squared degrees " + std::to_string(degree_sq) +
                                                 " differs from group order " + std::to_string(t.group_order));
    }

    // Row orthogonality, normalised by |G|.
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t k = i; k < h; ++k) {
            Complex s{0.0, 0.0};
            for (std::size_t j = 0; j < classes; ++j)
                s += static_cast<double>(t.class_sizes[j]) * t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                     std::conj(t.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
            s /= g;
            if (std::abs(s - (i == k ? 1.0 : 0.0)) >= orth_tol) {
                throw Error(ErrorKind::CorruptTable, fmt_index("row orthogonality fails at", i, k));
            }
        }
    // Column orthogonality, normalised by sqrt(|C_j||C_l|)/|G|.
    for (std::size_t j = 0; j < classes; ++j)
        for (std::size_t l = j; l < classes; ++l) {
            Complex s{0.0, 0.0};
            for (std::size_t i = 0; i < h; ++i)
                s += t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                     std::conj(t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)));
            s *= std::sqrt(static_cast<double>(t.class_sizes[j]) * static_cast<double>(t.class_sizes[l])) / g;
            if (std::abs(s - (j == l ? 1.0 : 0.0)) >= orth_tol) {
                throw Error(ErrorKind::CorruptTable, fmt_index("column orthogonality fails at", j, l));
            }
        }
}

CharacterTable abelian_character_table(int r, int n, double tolerance) {
    if (r < 1 || n < 1) throw Error(ErrorKind::InvalidParameter, "abelian table needs r >= 1, n >= 1");
    std::size_t order = 1;
    for (int i = 0; i < n; ++i) order *= static_cast<std::size_t>(r);
    CharacterTable t;
    t.group_order = order;
    t.provenance = Provenance::ClosedForm;
    t.tolerance = tolerance;
    t.degrees.assign(order, 1);
    t.class_sizes.assign(order, 1);
    t.values.resize(static_cast<Eigen::Index>(order), static_cast<Eigen::Index>(order));

    std::vector<std::vector<int>> digits(order);
    for (std::size_t g = 0; g < order; ++g) digits[g] = r == 1 ? std::vector<int>(static_cast<std::size_t>(n), 0) : abelian_digits(static_cast<Element>(g), r, n);

    const bool keep_exact = order * order * static_cast<std::size_t>(r) <= (std::size_t{1} << 22);
    if (keep_exact) {
        t.cyclotomic_order = r;
        t.cyclotomic.assign(order * order * static_cast<std::size_t>(r), 0);
    }
    for (std::size_t v = 0; v < order; ++v)
        for (std::size_t w = 0; w < order; ++w) {
            long long dot = 0;
            for (int i = 0; i < n; ++i) dot += static_cast<long long>(digits[v][static_cast<std::size_t>(i)]) * digits[w][static_cast<std::size_t>(i)];
            dot %= r;
            t.values(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) = root_of_unity(dot, r);
            if (keep_exact) t.cyclotomic[(v * order + w) * static_cast<std::size_t>(r) + static_cast<std::size_t>(dot)] = 1;
        }
    validate_character_table(t);
    return t;
}

void canonicalize_rows(CharacterTable& t) {
    const auto h = static_cast<Eigen::Index>(t.size());
    const auto cols = t.values.cols();
    using Key = std::pair<int, std::vector<long long>>;
    std::vector<Key> keys(static_cast<std::size_t>(h));
    for (Eigen::Index i = 0; i < h; ++i) {
        auto& key = keys[static_cast<std::size_t>(i)];
        key.first = t.degrees[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < cols; ++j) {
            key.second.push_back(std::llround(t.values(i, j).real() * 1e6));
            key.second.push_back(std::llround(t.values(i, j).imag() * 1e6));
        }
    }
    std::vector<int> order(static_cast<std::size_t>(h));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ka = keys[static_cast<std::size_t>(a)];
        const auto& kb = keys[static_cast<std::size_t>(b)];
        if (ka.first != kb.first) return ka.first < kb.first;
        return ka.second > kb.second;
    });
    CharacterTable sorted = t;
    for (Eigen::Index i = 0; i < h; ++i) {
        const auto src = order[static_cast<std::size_t>(i)];
        sorted.values.row(i) = t.values.row(src);
        sorted.degrees[static_cast<std::size_t>(i)] = t.degrees[static_cast<std::size_t>(src)];
        if (t.has_exact()) {
            const auto block = t.class_sizes.size() * static_cast<std::size_t>(t.cyclotomic_order);
            std::copy_n(t.cyclotomic.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(src) * block), block,
                        sorted.cyclotomic.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * block));
        }
    }
    t = std::move(sorted);
}

CharacterTable character_table_numerical(const GroupTable& group, const ConjugacyData& conj,
                                         const CharacterOptions& opts) {
    const std::size_t d = conj.class_count();
    if (d > opts.max_classes) {
        throw Error(ErrorKind::SizeLimit, "class count " + std::to_string(d) + " exceeds limit " +
                                              std::to_string(opts.max_classes));
    }
    const auto dd = static_cast<Eigen::Index>(d);

    // a[i](j, k) = #{(u, v) in C_i x C_j : uv = rep_k}; w = (omega_k)_k satisfies
    // a[i] w = omega_i w for every central character omega.
    std::vector<Eigen::MatrixXd> structure(d, Eigen::MatrixXd::Zero(dd, dd));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const Element target = conj.representative(static_cast<int>(k));
            for (Element u : conj.classes[i]) {
                const Element v = group.mul(group.inv(u), target);
                structure[i](conj.class_of[static_cast<std::size_t>(v)], static_cast<Eigen::Index>(k)) += 1.0;
            }
        }

    const double order = static_cast<double>(group.order());
    for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
        std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> coeff(-1.0, 1.0);
        Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(dd, dd);
        for (std::size_t i = 1; i < d; ++i) combo += coeff(rng) * structure[i];

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(combo.cast<Complex>());
        if (solver.info() != Eigen::Success) continue;
        const auto& lambda = solver.eigenvalues();
        double scale = 1.0;
        for (Eigen::Index a = 0; a < dd; ++a) scale = std::max(scale, std::abs(lambda(a)));
        double gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index a = 0; a < dd; ++a)
            for (Eigen::Index b = a + 1; b < dd; ++b) gap = std::min(gap, std::abs(lambda(a) - lambda(b)));
        if (d > 1 && gap < 1e-6 * scale) continue;

        CharacterTable t;
        t.group_order = group.order();
        t.provenance = Provenance::Numerical;
        t.tolerance = opts.tolerance;
        t.class_sizes = conj.class_sizes();
        t.values.resize(dd, dd);
        t.degrees.resize(d);
        bool ok = true;
        for (Eigen::Index c = 0; c < dd && ok; ++c) {
            Eigen::VectorXcd w = solver.eigenvectors().col(c);
            if (std::abs(w(0)) < 1e-12) {
                ok = false;
                break;
            }
            w /= w(0);
            // Re-derive each central character value from its own class matrix.
            Eigen::VectorXcd omega(dd);
            for (Eigen::Index i = 0; i < dd; ++i) {
                const Eigen::VectorXcd mw = structure[static_cast<std::size_t>(i)].cast<Complex>() * w;
                omega(i) = w.dot(mw) / w.squaredNorm();
            }
            double norm = 0.0;
            for (Eigen::Index j = 0; j < dd; ++j) norm += std::norm(omega(j)) / static_cast<double>(t.class_sizes[static_cast<std::size_t>(j)]);
            const double degree = std::sqrt(order / norm);
            const double rounded = std::round(degree);
            if (std::abs(degree - rounded) >= opts.tolerance || rounded < 1.0) {
                throw Error(ErrorKind::NumericalFailure, "degree rounding residual " +
                                                             std::to_string(std::abs(degree - rounded)) +
                                                             " exceeds tolerance");
            }
            t.degrees[static_cast<std::size_t>(c)] = static_cast<int>(rounded);
            for (Eigen::Index j = 0; j < dd; ++j)
                t.values(c, j) = omega(j) * rounded / static_cast<double>(t.class_sizes[static_cast<std::size_t>(j)]);
        }
        if (!ok) continue;
        canonicalize_rows(t);
        validate_character_table(t);
        return t;
    }
    throw Error(ErrorKind::NumericalFailure, "class-matrix eigenvalues stayed degenerate after " +
                                                 std::to_string(opts.max_retries) + " random combinations");
}

// ---------------------------------------------------------------------------
// Import / export

namespace {

std::vector<long long> prime_factors(long long k) {
    std::vector<long long> f;
    for (long long p = 2; p * p <= k; ++p)
        while (k % p == 0) {
            f.push_back(p);
            k /= p;
        }
    if (k > 1) f.push_back(k);
    return f;
}

long long modl(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

std::vector<int> ImportedTable::class_power(long long k) const {
    const auto classes = table.class_sizes.size();
    std::vector<int> result(classes, -1);
    std::optional<std::vector<int>> galois;
    for (std::size_t j = 0; j < classes; ++j) {
        const long long ord = class_rep_orders.empty() ? exponent : class_rep_orders[j];
        const long long r = modl(k, ord);
        if (r == 0) {
            result[j] = 0;
            continue;
        }
        if (r == 1) {
            result[j] = static_cast<int>(j);
            continue;
        }
        if (r == ord - 1) {
            result[j] = class_inv[j];
            continue;
        }
        bool found = false;
        for (const auto& [key, map] : power_maps) {
            if (modl(key, ord) == r) {
                result[j] = map[j];
                found = true;
                break;
            }
        }
        if (!found) {
            // Compose prime power maps along the factorisation of r.
            int cls = static_cast<int>(j);
            bool all = true;
            for (long long p : prime_factors(r)) {
                auto it = power_maps.find(p);
                if (it == power_maps.end()) {
                    all = false;
                    break;
                }
                cls = it->second[static_cast<std::size_t>(cls)];
            }
            if (all) {
                result[j] = cls;
                found = true;
            }
        }
        if (!found && table.has_exact()) {
            if (!galois) {
                // sigma_k applied to each column, matched against the columns.
                const auto m = static_cast<long long>(table.cyclotomic_order);
                galois = std::vector<int>(classes, -1);
                for (std::size_t c = 0; c < classes; ++c) {
                    Eigen::VectorXcd image(static_cast<Eigen::Index>(table.size()));
                    for (std::size_t i = 0; i < table.size(); ++i) {
                        auto coeffs = table.exact(static_cast<int>(i), static_cast<int>(c));
                        Complex v{0.0, 0.0};
                        for (long long e = 0; e < m; ++e)
                            if (coeffs[static_cast<std::size_t>(e)] != 0)
                                v += static_cast<double>(coeffs[static_cast<std::size_t>(e)]) * root_of_unity(modl(e * k, m), m);
                        image(static_cast<Eigen::Index>(i)) = v;
                    }
                    for (std::size_t c2 = 0; c2 < classes; ++c2)
                        if ((table.values.col(static_cast<Eigen::Index>(c2)) - image).cwiseAbs().maxCoeff() < 1e-6) {
                            (*galois)[c] = static_cast<int>(c2);
                            break;
                        }
                }
            }
            result[j] = (*galois)[j];
            found = result[j] >= 0;
        }
        if (!found) {
            throw Error(ErrorKind::Schema, "no power-map data to resolve class " + std::to_string(j) +
                                               " under k = " + std::to_string(k));
        }
    }
    return result;
}

ImportedTable import_character_table(const nlohmann::json& doc, double tolerance) {
    ImportedTable out;
    try {
        auto& t = out.table;
        t.provenance = Provenance::Imported;
        t.tolerance = tolerance;
        t.group_order = doc.at("group_order").get<std::size_t>();
        out.exponent = doc.at("exponent").get<int>();
        if (out.exponent < 1) throw Error(ErrorKind::Schema, "exponent must be positive");
        t.class_sizes = doc.at("class_sizes").get<std::vector<std::size_t>>();
        const auto classes = t.class_sizes.size();
        if (doc.contains("class_rep_orders")) {
            out.class_rep_orders = doc.at("class_rep_orders").get<std::vector<int>>();
            if (out.class_rep_orders.size() != classes) throw Error(ErrorKind::Schema, "class_rep_orders length mismatch");
        }
        if (doc.contains("class_power_maps")) {
            for (const auto& [key, value] : doc.at("class_power_maps").items()) {
                auto map = value.get<std::vector<int>>();
                if (map.size() != classes) throw Error(ErrorKind::Schema, "power map length mismatch");
                for (int c : map)
                    if (c < 0 || static_cast<std::size_t>(c) >= classes) throw Error(ErrorKind::Schema, "power map entry out of range");
                out.power_maps[std::stoll(key)] = std::move(map);
            }
        }
        const auto& chars = doc.at("characters");
        if (!chars.is_array()) throw Error(ErrorKind::Schema, "characters must be an array");
        if (chars.size() != classes) {
            throw Error(ErrorKind::Schema, "class count mismatch: " + std::to_string(chars.size()) +
                                               " characters for " + std::to_string(classes) + " classes");
        }
        const auto h = static_cast<Eigen::Index>(chars.size());
        t.values.resize(h, static_cast<Eigen::Index>(classes));
        t.degrees.resize(chars.size());
        bool all_exact = true;
        for (const auto& ch : chars) all_exact = all_exact && ch.contains("cyclotomic");
        if (all_exact) {
            t.cyclotomic_order = out.exponent;
            t.cyclotomic.assign(chars.size() * classes * static_cast<std::size_t>(out.exponent), 0);
        }
        for (std::size_t i = 0; i < chars.size(); ++i) {
            const auto& ch = chars[i];
            t.degrees[i] = ch.at("degree").get<int>();
            if (ch.contains("cyclotomic")) {
                const auto& rows = ch.at("cyclotomic");
                if (rows.size() != classes) throw Error(ErrorKind::Schema, "class count mismatch in character " + std::to_string(i));
                for (std::size_t j = 0; j < classes; ++j) {
                    auto coeffs = rows[j].get<std::vector<int>>();
                    if (coeffs.size() != static_cast<std::size_t>(out.exponent)) {
                        throw Error(ErrorKind::Schema, "cyclotomic vector length must equal the exponent");
                    }
                    t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate_cyclotomic(coeffs);
                    if (all_exact)
                        std::copy(coeffs.begin(), coeffs.end(),
                                  t.cyclotomic.begin() + static_cast<std::ptrdiff_t>((i * classes + j) * coeffs.size()));
                }
            } else {
                const auto& rows = ch.at("values");
                if (rows.size() != classes) throw Error(ErrorKind::Schema, "class count mismatch in character " + std::to_string(i));
                for (std::size_t j = 0; j < classes; ++j) {
                    const auto pair = rows[j].get<std::vector<double>>();
                    if (pair.size() != 2) throw Error(ErrorKind::Schema, "values must be [re, im] pairs");
                    t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex{pair[0], pair[1]};
                }
            }
        }
        if (doc.contains("pst_claim")) {
            const auto& c = doc.at("pst_claim");
            ImportedClaim claim;
            claim.connection_classes = c.at("connection_classes").get<std::vector<int>>();
            claim.target_class = c.at("target_class").get<int>();
            claim.tau = c.value("tau", std::string{});
            out.claim = std::move(claim);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("character table document: ") + e.what());
    }
    validate_character_table(out.table);

    const auto classes = out.table.class_sizes.size();
    out.class_inv.assign(classes, -1);
    for (std::size_t j = 0; j < classes; ++j) {
        const Eigen::VectorXcd target = out.table.values.col(static_cast<Eigen::Index>(j)).conjugate();
        for (std::size_t l = 0; l < classes; ++l)
            if ((out.table.values.col(static_cast<Eigen::Index>(l)) - target).cwiseAbs().maxCoeff() < 1e-6) {
                out.class_inv[j] = static_cast<int>(l);
                break;
            }
        if (out.class_inv[j] < 0) throw Error(ErrorKind::CorruptTable, "no conjugate column for class " + std::to_string(j));
    }
    if (out.claim) {
        for (int c : out.claim->connection_classes)
            if (c < 0 || static_cast<std::size_t>(c) >= classes) throw Error(ErrorKind::Schema, "claim class out of range");
        if (out.claim->target_class < 0 || static_cast<std::size_t>(out.claim->target_class) >= classes) {
            throw Error(ErrorKind::Schema, "claim target class out of range");
        }
    }
    return out;
}

nlohmann::json export_character_table(const CharacterTable& t, int exponent, const std::vector<int>& class_rep_orders,
                                      const std::map<long long, std::vector<int>>& power_maps) {
    nlohmann::json doc;
    doc["group_order"] = t.group_order;
    doc["exponent"] = exponent;
    doc["class_sizes"] = t.class_sizes;
    if (!class_rep_orders.empty()) doc["class_rep_orders"] = class_rep_orders;
    if (!power_maps.empty()) {
        nlohmann::json maps = nlohmann::json::object();
        for (const auto& [k, map] : power_maps) maps[std::to_string(k)] = map;
        doc["class_power_maps"] = std::move(maps);
    }
    doc["provenance"] = to_string(t.provenance);
    const bool exact = t.has_exact() && t.cyclotomic_order == exponent;
    nlohmann::json chars = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        nlohmann::json ch;
        ch["degree"] = t.degrees[i];
        nlohmann::json values = nlohmann::json::array();
        for (std::size_t j = 0; j < t.class_sizes.size(); ++j) {
            const Complex v = t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            values.push_back({v.real(), v.imag()});
        }
        ch["values"] = std::move(values);
        if (exact) {
            nlohmann::json cyc = nlohmann::json::array();
            for (std::size_t j = 0; j < t.class_sizes.size(); ++j) {
                auto coeffs = t.exact(static_cast<int>(i), static_cast<int>(j));
                cyc.push_back(std::vector<int>(coeffs.begin(), coeffs.end()));
            }
            ch["cyclotomic"] = std::move(cyc);
        }
        chars.push_back(std::move(ch));
    }
    doc["characters"] = std::move(chars);
    return doc;
}

// ---------------------------------------------------------------------------

std::optional<TableMatch> match_tables(const CharacterTable& a, const CharacterTable& b, double tol) {
    const auto h = a.size();
    if (b.size() != h || a.class_sizes.size() != b.class_sizes.size()) return std::nullopt;
    const auto cols = a.class_sizes.size();

    // Candidate rows of b for every row of a, narrowed as columns are fixed.
    std::vector<std::vector<int>> candidates(h);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t r = 0; r < h; ++r)
            if (a.degrees[i] == b.degrees[r]) candidates[i].push_back(static_cast<int>(r));

    std::vector<int> col_map(cols, -1);
    std::vector<char> used(cols, 0);

    std::function<bool(std::size_t, const std::vector<std::vector<int>>&)> assign =
        [&](std::size_t j, const std::vector<std::vector<int>>& cand) -> bool {
        if (j == cols) {
            candidates = cand;
            return true;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (used[c] || a.class_sizes[j] != b.class_sizes[c]) continue;
            std::vector<std::vector<int>> next(h);
            bool ok = true;
            for (std::size_t i = 0; i < h && ok; ++i) {
                for (int r : cand[i])
                    if (std::abs(a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                 b.values(r, static_cast<Eigen::Index>(c))) < tol)
                        next[i].push_back(r);
                ok = !next[i].empty();
            }
            if (!ok) continue;
            used[c] = 1;
            col_map[j] = static_cast<int>(c);
            if (assign(j + 1, next)) return true;
            used[c] = 0;
            col_map[j] = -1;
        }
        return false;
    };
    if (!assign(0, candidates)) return std::nullopt;

    TableMatch m;
    m.col_map = col_map;
    m.row_map.resize(h);
    std::set<int> taken;
    for (std::size_t i = 0; i < h; ++i) {
        // Distinct characters have distinct rows, so the survivor is unique.
        if (candidates[i].size() != 1 || !taken.insert(candidates[i][0]).second) return std::nullopt;
        m.row_map[i] = candidates[i][0];
    }
    return m;
}

std::vector<int> kernel_classes(const CharacterTable& t, int chi) {
    std::vector<int> out;
    const Complex deg = t.values(chi, 0);
    for (Eigen::Index j = 0; j < t.values.cols(); ++j)
        if (std::abs(t.values(chi, j) - deg) < t.tolerance) out.push_back(static_cast<int>(j));
    return out;
}

std::vector<Element> kernel(const CharacterTable& t, int chi, const ConjugacyData& conj) {
    std::vector<Element> out;
    for (int j : kernel_classes(t, chi)) {
        const auto& cls = conj.classes[static_cast<std::size_t>(j)];
        out.insert(out.end(), cls.begin(), cls.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

GaloisData galois_stabilizers(const CharacterTable& t, int exponent, const ClassPowerMap& power) {
    GaloisData g;
    g.exponent = exponent;
    if (exponent <= 1) {
        g.units.push_back(1);
    } else {
        for (int k = 1; k < exponent; ++k)
            if (std::gcd(k, exponent) == 1) g.units.push_back(k);
    }

    g.stabilizers.assign(t.size(), {});
    const auto cols = t.values.cols();
    for (int k : g.units) {
        const auto perm = power(k);
        for (std::size_t i = 0; i < t.size(); ++i) {
            bool fixed = true;
            for (Eigen::Index j = 0; j < cols && fixed; ++j)
                fixed = std::abs(t.values(static_cast<Eigen::Index>(i), perm[static_cast<std::size_t>(j)]) -
                                 t.values(static_cast<Eigen::Index>(i), j)) < t.tolerance * std::max(1, t.degrees[i]);
            if (fixed) g.stabilizers[i].push_back(k);
        }
    }
    return g;
}

GaloisData galois_stabilizers(const CharacterTable& t, const ConjugacyData& conj) {
    return galois_stabilizers(t, conj.exponent, [&conj](long long k) { return conj.class_power(k); });
}

GaloisData galois_stabilizers(const ImportedTable& imported) {
    return galois_stabilizers(imported.table, imported.exponent,
                              [&imported](long long k) { return imported.class_power(k); });
}

std::vector<int> generated_unit_subgroup(int m, const std::vector<int>& generators) {
    if (m <= 1) return {1};
    std::set<int> group{1};
    std::vector<int> frontier{1};
    while (!frontier.empty()) {
        const int x = frontier.back();
        frontier.pop_back();
        for (int g : generators) {
            const int y = static_cast<int>((static_cast<long long>(x) * g) % m);
            if (group.insert(y).second) frontier.push_back(y);
        }
    }
    return {group.begin(), group.end()};
}

bool rational_intersection(const std::vector<int>& characters, const GaloisData& galois) {
    std::vector<int> gens;
    for (int chi : characters) {
        const auto& h = galois.stabilizers.at(static_cast<std::size_t>(chi));
        gens.insert(gens.end(), h.begin(), h.end());
    }
    return generated_unit_subgroup(galois.exponent, gens).size() == galois.units.size();
}

} // namespace ocpst

namespace ocpst {

CharacterTable character_table(const GroupTable& group, const ConjugacyData& conj, const CharacterOptions& opts) {
    if (group.family() == FamilyTag::Cyclic) return abelian_character_table(static_cast<int>(group.order()), 1, opts.tolerance);
    if (group.family() == FamilyTag::AbelianPower) {
        const auto& name = group.name();
        const auto hat = name.find('^');
        if (name.size() > 1 && name[0] == 'z' && hat != std::string::npos) {
            const int r = std::stoi(name.substr(1, hat - 1));
            const int n = std::stoi(name.substr(hat + 1));
            auto t = abelian_character_table(r, n, opts.tolerance);
            if (t.group_order == group.order()) return t;
        }
    }
    return character_table_numerical(group, conj, opts);
}

} // namespace ocpst
