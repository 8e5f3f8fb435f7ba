#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ocpst/cayley.hpp"
#include "ocpst/characters.hpp"
#include "ocpst/error.hpp"
#include "ocpst/families.hpp"
#include "ocpst/group.hpp"
#include "ocpst/pst.hpp"
#include "ocpst/walk.hpp"
#include "ocpst/wreath.hpp"

using namespace ocpst;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;
constexpr int kExitSizeLimit = 4;

struct RunConfig {
    double tolerance = 1e-8;
    double oracle_tolerance = 1e-7;
    long long k_bound = 0;
    std::size_t max_order = 4096;
    int threads = 1;
    std::uint64_t seed = 42;
    std::string format = "text";
};

struct GroupSpec {
    std::vector<std::string> tokens;
    int exponent = 3;
    std::string base;
    int n = 0;
};

std::vector<std::string> split_words(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    for (const auto& s : in) {
        std::istringstream is(s);
        std::string w;
        while (is >> w) out.push_back(w);
    }
    return out;
}

int to_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidParameter, std::string("expected an integer for ") + what + ", got '" + s + "'");
}

GroupTable load_group_file(const std::string& path, const BuildOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidParameter, "cannot open group file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("group file: ") + e.what());
    }
    return group_from_json(doc, opts);
}

GroupTable build_group(const GroupSpec& spec, const RunConfig& cfg) {
    const BuildOptions opts{cfg.max_order};
    const auto t = split_words(spec.tokens);
    if (t.empty()) throw Error(ErrorKind::InvalidParameter, "missing group specification");
    const auto& head = t[0];
    auto arg = [&](std::size_t i, const char* what) {
        if (t.size() <= i) throw Error(ErrorKind::InvalidParameter, std::string("missing ") + what);
        return to_int(t[i], what);
    };
    if (head == "m2") return build_modular_maximal_cyclic(arg(1, "m2 degree"), opts);
    if (head == "extraspecial3") return build_extraspecial3(arg(1, "extraspecial3 n"), spec.exponent, opts);
    if (head == "sym") return build_symmetric(arg(1, "sym degree"), opts);
    if (head == "file") {
        if (t.size() < 2) throw Error(ErrorKind::InvalidParameter, "missing file path");
        return load_group_file(t[1], opts);
    }
    if (head.rfind("file:", 0) == 0) return load_group_file(head.substr(5), opts);
    if (head == "wreath") {
        if (spec.base.empty() || spec.n < 1) throw Error(ErrorKind::InvalidParameter, "wreath needs --base and --n");
        GroupSpec base{{spec.base}, spec.exponent, {}, 0};
        return build_wreath_sym(build_group(base, cfg), spec.n, opts);
    }
    return build_from_name(head, opts);
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::string cur;
        int depth = 0;
        for (char ch : item) {
            if (ch == '(' || ch == '[') ++depth;
            if (ch == ')' || ch == ']') --depth;
            if (ch == ',' && depth == 0) {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// "#k" forces an index, "@label" forces a label; a bare token may be either
// but must not name two different things.
Element select_element(const GroupTable& g, const std::string& tok) {
    if (tok.size() > 1 && tok[0] == '#') {
        const int v = to_int(tok.substr(1), "element index");
        if (!g.contains(v)) throw Error(ErrorKind::Validation, "element index " + tok + " out of range");
        return v;
    }
    if (tok.size() > 1 && tok[0] == '@') {
        if (auto e = g.find_label(tok.substr(1))) return *e;
        throw Error(ErrorKind::Validation, "no element labelled '" + tok.substr(1) + "'");
    }
    std::optional<Element> by_index;
    if (all_digits(tok) && g.contains(to_int(tok, "element"))) by_index = to_int(tok, "element");
    const auto by_label = g.find_label(tok);
    if (by_index && by_label && *by_index != *by_label) {
        throw Error(ErrorKind::Validation, "'" + tok + "' is ambiguous: element index " + std::to_string(*by_index) +
                                               " or label of element " + std::to_string(*by_label) +
                                               " (use #index or @label)");
    }
    if (by_label) return *by_label;
    if (by_index) return *by_index;
    throw Error(ErrorKind::Validation, "unknown element '" + tok + "'");
}

int select_class(const GroupTable& g, const ConjugacyData& conj, const std::string& tok) {
    const auto classes = static_cast<int>(conj.class_count());
    if (tok.size() > 1 && tok[0] == '#') {
        const int v = to_int(tok.substr(1), "class index");
        if (v < 0 || v >= classes) throw Error(ErrorKind::Validation, "class index " + tok + " out of range");
        return v;
    }
    if (tok.size() > 1 && tok[0] == '@') {
        if (auto e = g.find_label(tok.substr(1))) return conj.class_of[static_cast<std::size_t>(*e)];
        throw Error(ErrorKind::Validation, "no element labelled '" + tok.substr(1) + "'");
    }
    std::optional<int> by_index;
    if (all_digits(tok) && to_int(tok, "class") < classes) by_index = to_int(tok, "class");
    std::optional<int> by_label;
    if (auto e = g.find_label(tok)) by_label = conj.class_of[static_cast<std::size_t>(*e)];
    if (by_index && by_label && *by_index != *by_label) {
        throw Error(ErrorKind::Validation, "'" + tok + "' is ambiguous: class index " + std::to_string(*by_index) +
                                               " or the class of the element labelled '" + tok +
                                               "' (class " + std::to_string(*by_label) + "); use #index or @label");
    }
    if (by_label) return *by_label;
    if (by_index) return *by_index;
    throw Error(ErrorKind::Validation, "unknown class '" + tok + "'");
}

double parse_tau(const std::string& s) {
    if (s == "2pi/3sqrt3" || s == "pi/2" || s == "pi/4" || s.rfind("solved:", 0) == 0) return tau_from_tag(s);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && v > 0.0 && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidParameter, "time must be positive or one of 2pi/3sqrt3, pi/2, pi/4");
}

void print_text(const json& j, const std::string& indent = "") {
    if (!j.is_object()) {
        std::cout << indent << j.dump() << "\n";
        return;
    }
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            std::cout << indent << k << ":\n";
            print_text(v, indent + "  ");
        } else {
            std::cout << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

void emit(const json& j, const RunConfig& cfg) {
    if (cfg.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        print_text(j);
    }
}

// Loaded group, classes, table and connection set for the pst commands.
struct Context {
    std::unique_ptr<GroupTable> group;
    std::unique_ptr<ConjugacyData> conj;
    std::unique_ptr<CharacterTable> table;
    std::optional<ConnectionSet> conn;
};

Context load_context(const GroupSpec& spec, const std::vector<std::string>& classes, const RunConfig& cfg,
                     bool need_table = true) {
    Context ctx;
    ctx.group = std::make_unique<GroupTable>(build_group(spec, cfg));
    ctx.conj = std::make_unique<ConjugacyData>(conjugacy(*ctx.group));
    if (need_table) {
        CharacterOptions co;
        co.tolerance = cfg.tolerance;
        co.seed = cfg.seed;
        ctx.table = std::make_unique<CharacterTable>(character_table(*ctx.group, *ctx.conj, co));
    }
    const auto toks = split_list(classes);
    if (!toks.empty()) {
        std::vector<int> idx;
        for (const auto& t : toks) idx.push_back(select_class(*ctx.group, *ctx.conj, t));
        ctx.conn = require_connection_set(*ctx.conj, idx);
    }
    return ctx;
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions s;
    s.k_bound = cfg.k_bound;
    s.tol = cfg.tolerance;
    return s;
}

json base_verdict(const OrientedCayleyGraph& graph) {
    json j;
    j["group"] = graph.group().name();
    j["connection_classes"] = graph.connection().class_indices;
    j["connected"] = is_connected(graph);
    return j;
}

bool graph_output(const OrientedCayleyGraph& graph, const RunConfig& cfg) {
    if (cfg.format == "dot") {
        std::cout << to_dot(graph);
        return true;
    }
    if (cfg.format == "csv") {
        std::cout << adjacency_csv(adjacency_matrix(graph, cfg.max_order));
        return true;
    }
    return false;
}

int cmd_group(const std::string& sub, const GroupSpec& spec, const RunConfig& cfg) {
    const auto g = build_group(spec, cfg);
    if (sub == "export") {
        std::cout << group_to_json(g).dump(cfg.format == "json" ? 2 : -1) << "\n";
        return kExitOk;
    }
    const auto conj = conjugacy(g);
    json j;
    j["name"] = g.name();
    j["order"] = g.order();
    j["classes"] = conj.class_count();
    j["center_size"] = conj.center.size();
    j["exponent"] = conj.exponent;
    if (sub == "info") {
        std::vector<std::string> center;
        for (Element z : conj.center) center.push_back(g.label(z));
        j["center"] = center;
        j["class_sizes"] = conj.class_sizes();
        const auto series = derived_series_solvable(g);
        j["solvable"] = series.solvable;
        j["derived_series_orders"] = series.orders;
    }
    emit(j, cfg);
    return kExitOk;
}

int cmd_pst_check(const GroupSpec& spec, const std::vector<std::string>& classes, const std::string& target,
                  const std::string& tau_s, const RunConfig& cfg) {
    auto ctx = load_context(spec, classes, cfg);
    if (!ctx.conn) throw Error(ErrorKind::Validation, "--classes is required");
    OrientedCayleyGraph graph(*ctx.group, *ctx.conj, *ctx.conn);
    if (graph_output(graph, cfg)) return kExitOk;
    const Element z = select_element(*ctx.group, target);
    const double tau = parse_tau(tau_s);
    const auto check = check_pst_at(graph, *ctx.table, z, tau, cfg.tolerance);
    json j = base_verdict(graph);
    j["target"] = z;
    j["target_label"] = ctx.group->label(z);
    j["tau"] = tau;
    j["accepted"] = check.accepted;
    j["residual"] = std::isfinite(check.residual) ? json(check.residual) : json(nullptr);
    if (!check.reason.empty()) j["reason"] = check.reason;
    if (ctx.group->order() <= cfg.max_order) {
        const auto o = oracle_check(graph, z, tau);
        j["oracle_fidelity"] = o.fidelity;
        j["phase"] = o.phase;
    }
    j["witnesses"] = json::array();
    emit(j, cfg);
    return check.accepted ? kExitOk : kExitVerification;
}

int cmd_pst_solve(const GroupSpec& spec, const std::vector<std::string>& classes, const std::string& target,
                  const RunConfig& cfg) {
    auto ctx = load_context(spec, classes, cfg);
    if (!ctx.conn) throw Error(ErrorKind::Validation, "--classes is required");
    OrientedCayleyGraph graph(*ctx.group, *ctx.conj, *ctx.conn);
    if (graph_output(graph, cfg)) return kExitOk;
    const Element z = select_element(*ctx.group, target);
    auto opts = solve_options(cfg);
    opts.period_mode = z == ctx.group->identity();
    const auto res = solve_pst_time(graph, *ctx.table, z, opts);
    json j = base_verdict(graph);
    j["target"] = z;
    j["target_label"] = ctx.group->label(z);
    j["k_bound"] = res.k_bound;
    j["candidates"] = res.candidates;
    if (res.certificate) {
        j["tau"] = res.certificate->tau;
        j["k"] = res.certificate->k;
        j["residual"] = res.certificate->residual;
        const auto o = oracle_check(graph, z, res.certificate->tau);
        j["oracle_fidelity"] = o.fidelity;
        j["phase"] = o.phase;
    } else {
        j["tau"] = nullptr;
        j["reason"] = res.reason;
        j["nearest_miss_residual"] = std::isfinite(res.best_residual) ? json(res.best_residual) : json(nullptr);
        if (std::isfinite(res.best_residual)) j["nearest_miss_tau"] = res.best_tau;
    }
    const auto galois = galois_stabilizers(*ctx.table, *ctx.conj);
    json w = json::array();
    if (z != ctx.group->identity() && ctx.conj->is_central_class(ctx.conj->class_of[static_cast<std::size_t>(z)]))
        if (auto wit = nonexistence_witness(*ctx.conj, *ctx.table, galois, z))
            w.push_back({{"z", wit->z}, {"characters", wit->characters}});
    j["witnesses"] = w;
    emit(j, cfg);
    return kExitOk;
}

int cmd_pst_mst(const GroupSpec& spec, const std::vector<std::string>& classes, const RunConfig& cfg) {
    auto ctx = load_context(spec, classes, cfg);
    if (!ctx.conn) throw Error(ErrorKind::Validation, "--classes is required");
    OrientedCayleyGraph graph(*ctx.group, *ctx.conj, *ctx.conn);
    if (graph_output(graph, cfg)) return kExitOk;
    const auto rep = compute_S_e(graph, *ctx.table, solve_options(cfg));
    std::optional<RationalTime> rational;
    std::optional<double> fid;
    if (rep.minimal_time) {
        rational = time_rationality_check(*rep.minimal_time, rep.size);
        fid = oracle_check(graph, rep.generator, *rep.minimal_time).fidelity;
    }
    const auto galois = galois_stabilizers(*ctx.table, *ctx.conj);
    std::vector<NonexistenceWitness> witnesses;
    for (Element z : ctx.conj->center)
        if (z != ctx.group->identity() && !std::binary_search(rep.S_e.begin(), rep.S_e.end(), z))
            if (auto w = nonexistence_witness(*ctx.conj, *ctx.table, galois, z)) witnesses.push_back(*w);
    auto j = verdict_json(graph, rep, rational, fid, witnesses);
    std::vector<std::string> labels;
    for (Element s : rep.S_e) labels.push_back(ctx.group->label(s));
    j["S_e_labels"] = labels;
    if (rep.minimal_time) {
        const auto parts = partition_into_S_classes(*ctx.group, rep);
        j["S_classes"] = parts.size();
    }
    const auto excl = solvable_exclusion_report(*ctx.group);
    j["solvable"] = excl.solvable;
    emit(j, cfg);
    return kExitOk;
}

int cmd_pst_oracle(const GroupSpec& spec, const std::vector<std::string>& classes, const std::string& target,
                   const std::string& tau_s, double t_max, int steps, const RunConfig& cfg) {
    auto ctx = load_context(spec, classes, cfg, false);
    if (!ctx.conn) throw Error(ErrorKind::Validation, "--classes is required");
    OrientedCayleyGraph graph(*ctx.group, *ctx.conj, *ctx.conn);
    if (cfg.format == "dot") {
        std::cout << to_dot(graph);
        return kExitOk;
    }
    const auto op = build_operator(adjacency_matrix(graph, cfg.max_order));
    const Element e = ctx.group->identity();
    if (tau_s.empty()) {
        if (cfg.format == "csv") {
            std::cout << fidelity_csv(op, e, t_max, steps);
            return kExitOk;
        }
        json j = base_verdict(graph);
        json cands = json::array();
        for (const auto& c : scan_pst(op, e, t_max, steps))
            cands.push_back({{"t", c.t}, {"target", c.target}, {"target_label", ctx.group->label(c.target)},
                             {"fidelity", c.fidelity}});
        j["t_max"] = t_max;
        j["steps"] = steps;
        j["candidates"] = cands;
        emit(j, cfg);
        return kExitOk;
    }
    if (target.empty()) throw Error(ErrorKind::Validation, "--target is required with --tau");
    const Element z = select_element(*ctx.group, target);
    const double tau = parse_tau(tau_s);
    const auto f = fidelity(op, tau, e, z);
    json j = base_verdict(graph);
    j["target"] = z;
    j["tau"] = tau;
    j["oracle_fidelity"] = f.value;
    j["phase"] = f.phase.real() > 0 ? 1 : (f.phase.real() < 0 ? -1 : 0);
    const bool pst = f.value > 1.0 - cfg.oracle_tolerance;
    j["pst"] = pst;
    if (auto p = permutation_check(op, tau)) {
        j["permutation_order"] = p->order;
        j["fixed_point_free"] = p->fixed_point_free;
        j["commutes_with_A"] = p->commutes;
    }
    emit(j, cfg);
    return pst ? kExitOk : kExitVerification;
}

int cmd_pst_nonexist(const GroupSpec& spec, const std::string& target, const RunConfig& cfg) {
    auto ctx = load_context(spec, {}, cfg);
    const Element z = select_element(*ctx.group, target);
    const auto galois = galois_stabilizers(*ctx.table, *ctx.conj);
    json j;
    j["group"] = ctx.group->name();
    j["target"] = z;
    j["target_label"] = ctx.group->label(z);
    const auto w = nonexistence_witness(*ctx.conj, *ctx.table, galois, z);
    j["witness"] = w ? json{{"z", w->z}, {"characters", w->characters}} : json(nullptr);
    j["witnesses"] = w ? json::array({j["witness"]}) : json::array();
    emit(j, cfg);
    return kExitOk;
}

int cmd_sweep(const GroupSpec& spec, std::size_t limit, int max_classes, const RunConfig& cfg) {
    auto ctx = load_context(spec, {}, cfg, false);
    if (ctx.group->order() > limit) {
        throw Error(ErrorKind::SizeLimit, "sweep refused: order " + std::to_string(ctx.group->order()) +
                                              " exceeds the sweep limit " + std::to_string(limit) +
                                              "; raise it with --limit");
    }
    CharacterOptions co;
    co.tolerance = cfg.tolerance;
    co.seed = cfg.seed;
    const auto table = character_table(*ctx.group, *ctx.conj, co);
    SweepOptions so;
    so.max_classes = max_classes;
    so.max_order = limit;
    so.threads = cfg.threads;
    so.solve = solve_options(cfg);
    const auto rep = sweep_connection_sets(*ctx.group, *ctx.conj, table, so);
    json j;
    j["group"] = ctx.group->name();
    j["connection_sets"] = rep.sets;
    json hist;
    for (std::size_t s = 1; s < rep.histogram.size(); ++s)
        if (rep.histogram[s]) hist[std::to_string(s)] = rep.histogram[s];
    j["size_histogram"] = hist;
    json certs = json::array();
    for (const auto& c : rep.certified)
        certs.push_back({{"connection_classes", c.classes},
                         {"size", c.report.size},
                         {"S_e", c.report.S_e},
                         {"tau", *c.report.minimal_time}});
    if (cfg.format == "json") j["certificates"] = certs;
    else j["certified"] = certs.size();
    emit(j, cfg);
    return kExitOk;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidParameter, "cannot open '" + path + "'");
    try {
        json doc;
        in >> doc;
        return doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Schema, path + ": " + e.what());
    }
}

json imported_summary(const ImportedTable& imp) {
    json j;
    j["group_order"] = imp.table.group_order;
    j["classes"] = imp.table.size();
    j["exponent"] = imp.exponent;
    j["degrees"] = imp.table.degrees;
    j["exact"] = imp.table.has_exact();
    bool faithful_on_center = false;
    for (std::size_t c = 1; c < imp.table.class_sizes.size(); ++c) {
        if (imp.table.class_sizes[c] != 1) continue;
        for (std::size_t i = 0; i < imp.table.size(); ++i)
            if (std::abs(imp.table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) -
                         static_cast<double>(imp.table.degrees[i])) > imp.table.tolerance)
                faithful_on_center = true;
    }
    j["character_nontrivial_on_center"] = faithful_on_center;
    return j;
}

int cmd_import(const std::string& path, const RunConfig& cfg) {
    const auto imp = import_character_table(read_json_file(path), cfg.tolerance);
    json j = imported_summary(imp);
    j["valid"] = true;
    int code = kExitOk;
    if (imp.claim) {
        const auto v = verify_imported_claim(imp, cfg.tolerance);
        j["claim"] = {{"connection_classes", imp.claim->connection_classes},
                      {"target_class", imp.claim->target_class},
                      {"tau", v.tau},
                      {"oriented", v.oriented},
                      {"accepted", v.oriented && v.check.accepted},
                      {"residual", v.check.residual}};
        if (!v.oriented || !v.check.accepted) code = kExitVerification;
    }
    emit(j, cfg);
    return code;
}

std::string fixture_filename(const FamilyCertificate& c) {
    std::string out;
    for (char ch : c.group->name()) out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
    out += "__" + std::to_string(c.conn.elements.size());
    return out;
}

int cmd_write_fixtures(const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto certs = shipped_certificates();
    certs.push_back(m2_remark_fixture());
    std::size_t index = 0;
    for (const auto& c : certs) {
        char prefix[8];
        std::snprintf(prefix, sizeof prefix, "%02zu_", index++);
        const auto path = std::filesystem::path(dir) / (prefix + fixture_filename(c) + ".json");
        std::ofstream out(path);
        out << certificate_json(c).dump(2) << "\n";
        if (!out) throw Error(ErrorKind::InvalidParameter, "cannot write " + path.string());
        std::cout << path.string() << "\n";
    }
    return kExitOk;
}

int cmd_verify_paper(const std::string& fixtures, const std::string& import_table, std::size_t oracle_limit,
                     const RunConfig& cfg) {
    std::vector<std::pair<std::string, FamilyCertificate>> certs;
    if (fixtures.empty()) {
        for (auto& c : shipped_certificates()) certs.emplace_back(c.group->name(), std::move(c));
    } else {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(fixtures))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) certs.emplace_back(f.filename().string(), certificate_from_json(read_json_file(f)));
    }

    int failures = 0;
    json report = json::array();
    for (const auto& [name, cert] : certs) {
        json r;
        r["certificate"] = name;
        r["group"] = cert.group->name();
        r["tau"] = cert.tau_tag;
        std::string failure;
        try {
            CharacterOptions co;
            co.tolerance = cfg.tolerance;
            co.seed = cfg.seed;
            const auto table = character_table(*cert.group, *cert.conj, co);
            const auto graph = cert.graph();
            const auto check = check_pst_at(graph, table, cert.z, cert.tau, cfg.tolerance);
            r["residual"] = check.residual;
            std::optional<double> fid;
            if (cert.group->order() <= oracle_limit) {
                const auto o = oracle_check(graph, cert.z, cert.tau);
                fid = o.fidelity;
                r["oracle_fidelity"] = o.fidelity;
                r["phase"] = o.phase;
                if (cert.pst_claim && (o.fidelity <= 1.0 - cfg.oracle_tolerance || o.phase != 1))
                    failure = "oracle fidelity";
            }
            const auto rep = compute_S_e(graph, table, solve_options(cfg));
            r["size"] = rep.size;
            if (rep.minimal_time) {
                const auto rt = time_rationality_check(*rep.minimal_time, rep.size);
                if (rt.found)
                    r["tau_rational"] = std::to_string(rt.p) + "/" + std::to_string(rt.q) + " " + rt.multiplier;
            }
            if (cert.pst_claim) {
                if (!check.accepted) failure = "criterion residual";
                else if (rep.size != cert.claimed_size) failure = "|S_e| differs from the claimed size";
                r["status"] = failure.empty() ? "PASS" : "FAIL";
            } else {
                r["status"] = "REPORT";
                r["verdict"] = check.accepted ? "PST at the stated time" : "no PST at the stated time";
            }
        } catch (const Error& e) {
            failure = e.what();
            r["status"] = "FAIL";
        }
        if (!failure.empty()) {
            r["failure"] = failure;
            ++failures;
        }
        report.push_back(r);
        if (cfg.format != "json") {
            std::cout << r.value("status", "FAIL") << "  " << name << "  residual=" << r.value("residual", -1.0);
            if (r.contains("oracle_fidelity")) std::cout << "  fidelity=" << r["oracle_fidelity"].get<double>();
            if (r.contains("tau_rational")) std::cout << "  tau=" << r["tau_rational"].get<std::string>();
            if (r.contains("size")) std::cout << "  |S_e|=" << r["size"].get<int>();
            if (!failure.empty()) std::cout << "  (" << failure << ")";
            std::cout << "\n";
        }
    }
    if (!import_table.empty()) {
        json r;
        r["certificate"] = import_table;
        try {
            const auto imp = import_character_table(read_json_file(import_table), cfg.tolerance);
            if (!imp.claim) throw Error(ErrorKind::Schema, "imported table has no pst_claim");
            const auto v = verify_imported_claim(imp, cfg.tolerance);
            r["residual"] = v.check.residual;
            r["status"] = v.oriented && v.check.accepted ? "PASS" : "FAIL";
            if (!v.oriented) r["failure"] = v.orientation_issue;
        } catch (const Error& e) {
            r["status"] = "FAIL";
            r["failure"] = e.what();
        }
        if (r["status"] == "FAIL") ++failures;
        report.push_back(r);
        if (cfg.format != "json")
            std::cout << r["status"].get<std::string>() << "  " << import_table << "  residual=" << r.value("residual", -1.0)
                      << (r.contains("failure") ? "  (" + r["failure"].get<std::string>() + ")" : "") << "\n";
    }
    if (cfg.format == "json") std::cout << json{{"certificates", report}, {"failures", failures}}.dump(2) << "\n";
    else std::cout << (failures ? "FAILED: " : "all passed: ") << certs.size() + (import_table.empty() ? 0 : 1)
                   << " certificates, " << failures << " failures\n";
    return failures ? kExitVerification : kExitOk;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::SizeLimit: return kExitSizeLimit;
    case ErrorKind::InvariantBreach:
    case ErrorKind::NumericalFailure: return kExitVerification;
    default: return kExitValidation;
    }
}

void add_group_options(CLI::App* cmd, GroupSpec& spec, bool positional) {
    if (positional) {
        cmd->add_option("spec", spec.tokens, "group: z:<r> | z<r>^<n> | extraspecial3 <n> | m2 <n> | sym <n> | "
                                             "wreath | file <path>")
            ->required();
    } else {
        cmd->add_option("--group,-g", spec.tokens, "group spec, e.g. z:8, z4^2, m2:5, \"extraspecial3 1\"")->required();
    }
    cmd->add_option("--exponent", spec.exponent, "extraspecial exponent type (3 or 9)")->check(CLI::IsMember({3, 9}));
    cmd->add_option("--base", spec.base, "wreath base group spec");
    cmd->add_option("--n", spec.n, "wreath degree");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oriented Cayley graph perfect state transfer toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--tolerance", cfg.tolerance, "criterion tolerance")->check(CLI::PositiveNumber);
    app.add_option("--oracle-tolerance", cfg.oracle_tolerance, "oracle fidelity slack")->check(CLI::PositiveNumber);
    app.add_option("--K", cfg.k_bound, "candidate bound for the time solver (default 4|G|)")->check(CLI::PositiveNumber);
    app.add_option("--max-order", cfg.max_order, "largest group order accepted")->check(CLI::PositiveNumber);
    app.add_option("--threads", cfg.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed for numerical character tables");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "dot", "text"}));

    GroupSpec spec;
    std::vector<std::string> classes;
    std::string target;
    std::string tau;
    double t_max = 4.0 * std::numbers::pi;
    int steps = 2000;
    std::size_t limit = 16;
    int max_classes = 64;
    std::string fixtures;
    std::string import_table;
    std::string import_path;
    std::size_t oracle_limit = 200;

    auto* group = app.add_subcommand("group", "build, inspect or export a group");
    group->require_subcommand(1);
    group->fallthrough();
    for (const char* name : {"build", "info", "export"}) {
        auto* s = group->add_subcommand(name, std::string(name) + " a group");
        s->fallthrough();
        add_group_options(s, spec, true);
    }

    auto* pst = app.add_subcommand("pst", "state-transfer queries on Cay(G, C)");
    pst->require_subcommand(1);
    pst->fallthrough();
    auto* check = pst->add_subcommand("check", "criterion check of PST e -> target at a time");
    auto* solve = pst->add_subcommand("solve", "smallest PST time to a target");
    auto* mst = pst->add_subcommand("mst", "full S_e report");
    auto* oracle = pst->add_subcommand("oracle", "matrix-exponential verification or time scan");
    auto* nonexist = pst->add_subcommand("nonexist", "rational-character nonexistence witness");
    for (auto* s : {check, solve, mst, oracle, nonexist}) {
        s->fallthrough();
        add_group_options(s, spec, false);
        if (s != nonexist) s->add_option("--classes,-c", classes, "connection classes: index, #index or @label");
    }
    for (auto* s : {check, solve, oracle, nonexist}) s->add_option("--target,-t", target, "target element");
    check->get_option("--target")->required();
    solve->get_option("--target")->required();
    nonexist->get_option("--target")->required();
    check->add_option("--tau", tau, "time: number, 2pi/3sqrt3, pi/2 or pi/4")->required();
    oracle->add_option("--tau", tau, "time; omit to scan");
    oracle->add_option("--t-max", t_max, "scan horizon")->check(CLI::PositiveNumber);
    oracle->add_option("--steps", steps, "scan grid size")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "S_e over every canonical oriented connection set");
    sweep->fallthrough();
    add_group_options(sweep, spec, false);
    sweep->add_option("--limit", limit, "largest order swept");
    sweep->add_option("--max-classes", max_classes, "largest number of classes in C")->check(CLI::PositiveNumber);

    auto* imp = app.add_subcommand("import", "validate an external character table");
    imp->fallthrough();
    imp->add_option("file", import_path, "character table JSON")->required();

    auto* verify = app.add_subcommand("verify-paper", "dual verification of every shipped certificate");
    verify->fallthrough();
    verify->add_option("--fixtures", fixtures, "directory of certificate JSON files (default: built-in set)");
    verify->add_option("--import-table", import_table, "character table with a pst_claim to check as well");
    verify->add_option("--oracle-limit", oracle_limit, "largest order run through the dense oracle");
    std::string write_fixtures;
    verify->add_option("--write-fixtures", write_fixtures, "write the built-in certificates as JSON into a directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (group->parsed()) {
            for (auto* s : group->get_subcommands()) return cmd_group(s->get_name(), spec, cfg);
        }
        if (check->parsed()) return cmd_pst_check(spec, classes, target, tau, cfg);
        if (solve->parsed()) return cmd_pst_solve(spec, classes, target, cfg);
        if (mst->parsed()) return cmd_pst_mst(spec, classes, cfg);
        if (oracle->parsed()) return cmd_pst_oracle(spec, classes, target, tau, t_max, steps, cfg);
        if (nonexist->parsed()) return cmd_pst_nonexist(spec, target, cfg);
        if (sweep->parsed()) return cmd_sweep(spec, limit, max_classes, cfg);
        if (imp->parsed()) return cmd_import(import_path, cfg);
        if (verify->parsed() && !write_fixtures.empty()) return cmd_write_fixtures(write_fixtures);
        if (verify->parsed()) return cmd_verify_paper(fixtures, import_table, oracle_limit, cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
