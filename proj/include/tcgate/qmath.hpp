#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace tcg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex I{0.0, 1.0};

// Per-mode truncation levels, ordered Q1, Q2, C.
class ModeDims {
public:
    ModeDims();
    explicit ModeDims(std::vector<int> levels);

    static ModeDims two_qutrits() { return ModeDims({3, 3}); }

    std::size_t modes() const { return levels_.size(); }
    int operator[](std::size_t mode) const { return levels_.at(mode); }
    int total() const;
    // flat index of a product state, first mode most significant
    int index(const std::vector<int>& occupation) const;
    const std::vector<int>& levels() const { return levels_; }

private:
    std::vector<int> levels_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix rho);
    static DensityMatrix pure(const StateVector& psi);

    const ComplexMatrix& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }

    double hermiticity_defect() const;
    double trace_defect() const;
    double min_eigenvalue() const;
    // throws NumericalError when any invariant is off by more than the given tolerances
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8, double eig_tol = 1e-8) const;

private:
    ComplexMatrix rho_;
};

ComplexMatrix ladder(int dim);
ComplexMatrix number_operator(int dim);
ComplexMatrix identity(int dim);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix embed(const ComplexMatrix& op, std::size_t mode, const ModeDims& dims);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
Complex expectation(const StateVector& psi, const ComplexMatrix& op);

StateVector basis_state(int dim, int index);
double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);
double unitarity_defect(const ComplexMatrix& u);

// rows/cols picked out by index list, in list order
ComplexMatrix restrict_to(const ComplexMatrix& m, const std::vector<int>& indices);

}  // namespace tcg
