#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ocpst {

/// U(t) = e^{tA} through one Hermitian eigensolve: iA = V diag(mu) V*.
class WalkOperator {
public:
    std::size_t order() const noexcept { return static_cast<std::size_t>(mu_.size()); }
    const Eigen::VectorXd& eigenvalues() const noexcept { return mu_; }
    const Eigen::MatrixXcd& eigenvectors() const noexcept { return v_; }
    const Eigen::MatrixXd& generator() const noexcept { return a_; }
    /// True for a symmetric generator, where U(t) = e^{-itA} is complex.
    bool hermitian() const noexcept { return hermitian_; }

    /// max |H - V diag(mu) V*| with H = iA (or A when hermitian).
    double reconstruction_error() const;

private:
    friend WalkOperator build_operator(const Eigen::MatrixXd& a);
    friend WalkOperator build_hermitian_operator(const Eigen::MatrixXd& a);

    Eigen::MatrixXd a_;
    Eigen::VectorXd mu_;
    Eigen::MatrixXcd v_;
    bool hermitian_ = false;
};

/// A must be skew-symmetric within 1e-12.
WalkOperator build_operator(const Eigen::MatrixXd& a);
/// Undirected walk U(t) = e^{-itA} for a symmetric A.
WalkOperator build_hermitian_operator(const Eigen::MatrixXd& a);

Eigen::MatrixXcd evolve_complex(const WalkOperator& op, double t);
/// Real orthogonal U(t); throws NumericalFailure if imaginary parts or the
/// orthogonality defect exceed 1e-9.  Only for skew-symmetric generators.
Eigen::MatrixXd evolve(const WalkOperator& op, double t);

struct Fidelity {
    double value = 0.0;
    /// U(t)[b][a] / |U(t)[b][a]|, or 0 when the entry vanishes.
    std::complex<double> phase{0.0, 0.0};
};

/// |U(t)[b][a]|: amplitude carried from vertex a to vertex b.
Fidelity fidelity(const WalkOperator& op, double t, int a, int b);

struct PermutationReport {
    std::vector<int> perm; // perm[a] = b with U(t) e_a = e_b
    bool fixed_point_free = false;
    bool commutes = false;
    bool positive = false; // every nonzero entry equals +1
    int order = 0;
};

/// Reads U(t) as a permutation matrix if every column is a canonical vector
/// within tol; nullopt otherwise.
std::optional<PermutationReport> permutation_check(const WalkOperator& op, double t, double tol = 1e-7);

struct ScanCandidate {
    double t = 0.0;
    int target = -1;
    double fidelity = 0.0;
};

/// Grid scan of max_{b != a} fidelity over (0, t_max], golden-section refined
/// around local maxima above threshold.
std::vector<ScanCandidate> scan_pst(const WalkOperator& op, int a, double t_max = 4.0 * 3.14159265358979323846,
                                    int steps = 2000, double threshold = 0.999);

/// CSV rows "t,fidelity,argmax" of max_{b != a} fidelity on the grid.
std::string fidelity_csv(const WalkOperator& op, int a, double t_max, int steps);

} // namespace ocpst
