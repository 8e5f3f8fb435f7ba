#include "ocpst/walk.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "ocpst/error.hpp"

namespace ocpst {

namespace {

using Complex = std::complex<double>;
const Complex kI{0.0, 1.0};

constexpr double kSkewTol = 1e-12;
constexpr double kUnitaryTol = 1e-9;
constexpr double kGoldenTol = 1e-10;

Eigen::VectorXcd phases(const WalkOperator& op, double t) {
    const auto& mu = op.eigenvalues();
    Eigen::VectorXcd p(mu.size());
    for (Eigen::Index k = 0; k < mu.size(); ++k) p(k) = std::exp(-kI * mu(k) * t);
    return p;
}

// Column a of U(t) in O(n^2).
Eigen::VectorXcd column(const WalkOperator& op, double t, int a) {
    const auto& v = op.eigenvectors();
    Eigen::VectorXcd w = v.row(a).adjoint();
    w.array() *= phases(op, t).array();
    return v * w;
}

struct Peak {
    double value;
    int target;
};

Peak best_target(const WalkOperator& op, double t, int a) {
    const Eigen::VectorXcd col = column(op, t, a);
    Peak p{-1.0, -1};
    for (Eigen::Index b = 0; b < col.size(); ++b) {
        if (b == a) continue;
        const double f = std::abs(col(b));
        if (f > p.value) p = {f, static_cast<int>(b)};
    }
    return p;
}

} // namespace

double WalkOperator::reconstruction_error() const {
    Eigen::MatrixXcd h = hermitian_ ? Eigen::MatrixXcd(a_.cast<Complex>()) : Eigen::MatrixXcd(kI * a_.cast<Complex>());
    const Eigen::MatrixXcd r = v_ * mu_.cast<Complex>().asDiagonal() * v_.adjoint();
    return (h - r).cwiseAbs().maxCoeff();
}

WalkOperator build_operator(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidParameter, "generator must be square");
    if (a.size() > 0 && (a + a.transpose()).cwiseAbs().maxCoeff() > kSkewTol) {
        throw Error(ErrorKind::InvalidParameter, "generator is not skew-symmetric");
    }
    WalkOperator op;
    op.a_ = a;
    const Eigen::MatrixXcd h = kI * a.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolve failed");
    op.mu_ = es.eigenvalues();
    op.v_ = es.eigenvectors();
    return op;
}

WalkOperator build_hermitian_operator(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidParameter, "generator must be square");
    if (a.size() > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > kSkewTol) {
        throw Error(ErrorKind::InvalidParameter, "generator is not symmetric");
    }
    WalkOperator op;
    op.a_ = a;
    op.hermitian_ = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "symmetric eigensolve failed");
    op.mu_ = es.eigenvalues();
    op.v_ = es.eigenvectors().cast<Complex>();
    return op;
}

Eigen::MatrixXcd evolve_complex(const WalkOperator& op, double t) {
    const auto& v = op.eigenvectors();
    return v * phases(op, t).asDiagonal() * v.adjoint();
}

Eigen::MatrixXd evolve(const WalkOperator& op, double t) {
    if (op.hermitian()) throw Error(ErrorKind::InvalidParameter, "undirected walks are complex; use evolve_complex");
    const Eigen::MatrixXcd u = evolve_complex(op, t);
    const auto n = u.rows();
    if (n == 0) return {};
    if (u.imag().cwiseAbs().maxCoeff() > kUnitaryTol) {
        throw Error(ErrorKind::NumericalFailure, "U(t) has non-negligible imaginary part");
    }
    Eigen::MatrixXd r = u.real();
    const double defect = (r.transpose() * r - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > kUnitaryTol) throw Error(ErrorKind::NumericalFailure, "U(t) is not orthogonal");
    return r;
}

Fidelity fidelity(const WalkOperator& op, double t, int a, int b) {
    const auto n = static_cast<int>(op.order());
    if (a < 0 || a >= n || b < 0 || b >= n) throw Error(ErrorKind::InvalidParameter, "vertex out of range");
    const Complex amp = column(op, t, a)(b);
    Fidelity f;
    f.value = std::abs(amp);
    if (f.value > 0.0) f.phase = amp / f.value;
    return f;
}

std::optional<PermutationReport> permutation_check(const WalkOperator& op, double t, double tol) {
    const Eigen::MatrixXcd u = evolve_complex(op, t);
    const auto n = u.rows();
    PermutationReport rep;
    rep.perm.assign(static_cast<std::size_t>(n), -1);
    rep.positive = true;
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (Eigen::Index a = 0; a < n; ++a) {
        Eigen::Index b = 0;
        u.col(a).cwiseAbs().maxCoeff(&b);
        for (Eigen::Index r = 0; r < n; ++r) {
            const Complex want = r == b ? u(b, a) / std::abs(u(b, a)) : Complex{0.0, 0.0};
            if (std::abs(u(r, a) - want) > tol) return std::nullopt;
        }
        if (std::abs(u(b, a) - 1.0) > tol) rep.positive = false;
        if (hit[static_cast<std::size_t>(b)]) return std::nullopt;
        hit[static_cast<std::size_t>(b)] = 1;
        rep.perm[static_cast<std::size_t>(a)] = static_cast<int>(b);
    }
    rep.fixed_point_free = true;
    for (Eigen::Index a = 0; a < n; ++a)
        if (rep.perm[static_cast<std::size_t>(a)] == a) rep.fixed_point_free = false;

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) p(rep.perm[static_cast<std::size_t>(a)], a) = 1.0;
    const auto& a = op.generator();
    rep.commutes = n == 0 || (p * a - a * p).cwiseAbs().maxCoeff() < kUnitaryTol;

    std::vector<int> power(rep.perm);
    rep.order = 1;
    auto is_identity = [&] {
        for (std::size_t i = 0; i < power.size(); ++i)
            if (power[i] != static_cast<int>(i)) return false;
        return true;
    };
    while (!is_identity()) {
        for (auto& x : power) x = rep.perm[static_cast<std::size_t>(x)];
        ++rep.order;
    }
    return rep;
}

std::vector<ScanCandidate> scan_pst(const WalkOperator& op, int a, double t_max, int steps, double threshold) {
    if (steps < 1) throw Error(ErrorKind::InvalidParameter, "scan needs at least one step");
    const auto n = static_cast<int>(op.order());
    if (a < 0 || a >= n) throw Error(ErrorKind::InvalidParameter, "vertex out of range");
    std::vector<ScanCandidate> out;
    if (n < 2) return out;

    const double h = t_max / steps;
    std::vector<Peak> grid(static_cast<std::size_t>(steps) + 2);
    for (int i = 0; i <= steps + 1; ++i) grid[static_cast<std::size_t>(i)] = best_target(op, h * i, a);

    for (int i = 1; i <= steps; ++i) {
        const auto& here = grid[static_cast<std::size_t>(i)];
        if (here.value < grid[static_cast<std::size_t>(i - 1)].value ||
            here.value < grid[static_cast<std::size_t>(i + 1)].value)
            continue;
        // Refine |U(t)[b][a]| for the grid argmax b on [t_{i-1}, t_{i+1}].
        const int b = here.target;
        auto f = [&](double t) { return std::abs(column(op, t, a)(b)); };
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = h * (i - 1);
        double hi = h * (i + 1);
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = f(x1);
        double f2 = f(x2);
        while (hi - lo > kGoldenTol) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = f(x1);
            }
        }
        const double t = 0.5 * (lo + hi);
        const double value = f(t);
        if (value <= threshold) continue;
        if (!out.empty() && std::abs(out.back().t - t) < 1e-8 && out.back().target == b) continue;
        out.push_back({t, b, value});
    }
    return out;
}

std::string fidelity_csv(const WalkOperator& op, int a, double t_max, int steps) {
    if (steps < 1) throw Error(ErrorKind::InvalidParameter, "scan needs at least one step");
    std::ostringstream os;
    os.precision(12);
    os << "t,fidelity,argmax\n";
    for (int i = 0; i <= steps; ++i) {
        const double t = t_max * i / steps;
        const auto p = best_target(op, t, a);
        os << t << "," << p.value << "," << p.target << "\n";
    }
    return os.str();
}

} // namespace ocpst
