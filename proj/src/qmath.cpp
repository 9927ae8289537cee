#include "tcgate/qmath.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <fmt/core.h>

#include "tcgate/errors.hpp"

namespace tcg {

ModeDims::ModeDims() : levels_{3, 3, 3} {}

ModeDims::ModeDims(std::vector<int> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw DimensionError("ModeDims needs at least one mode");
    for (int d : levels_) {
        if (d < 3) throw DimensionError(fmt::format("mode truncation {} below 3 levels", d));
    }
}

int ModeDims::total() const {
    return std::accumulate(levels_.begin(), levels_.end(), 1, std::multiplies<>());
}

int ModeDims::index(const std::vector<int>& occupation) const {
    if (occupation.size() != levels_.size())
        throw ShapeError("occupation list does not match mode count");
    int idx = 0;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        if (occupation[k] < 0 || occupation[k] >= levels_[k])
            throw IndexError(fmt::format("occupation {} outside mode {}", occupation[k], k));
        idx = idx * levels_[k] + occupation[k];
    }
    return idx;
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) throw ShapeError("density matrix must be square");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi * psi.adjoint());
}

double DensityMatrix::hermiticity_defect() const { return tcg::hermiticity_defect(rho_); }

double DensityMatrix::trace_defect() const { return std::abs(rho_.trace() - 1.0); }

double DensityMatrix::min_eigenvalue() const {
    ComplexMatrix h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
    if (hermiticity_defect() > herm_tol)
        throw NumericalError(fmt::format("density matrix not Hermitian ({:.3e})", hermiticity_defect()));
    if (trace_defect() > trace_tol)
        throw NumericalError(fmt::format("density matrix trace off by {:.3e}", trace_defect()));
    if (min_eigenvalue() < -eig_tol)
        throw NumericalError(fmt::format("density matrix eigenvalue {:.3e}", min_eigenvalue()));
}

ComplexMatrix ladder(int dim) {
    if (dim < 2) throw DimensionError(fmt::format("ladder needs dim >= 2, got {}", dim));
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix number_operator(int dim) {
    ComplexMatrix a = ladder(dim);
    return a.adjoint() * a;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t mode, const ModeDims& dims) {
    if (mode >= dims.modes())
        throw IndexError(fmt::format("mode {} out of range for {} modes", mode, dims.modes()));
    if (op.rows() != op.cols() || op.rows() != dims[mode])
        throw ShapeError(fmt::format("operator of size {} does not fit mode {} ({} levels)",
                                     op.rows(), mode, dims[mode]));
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (std::size_t k = 0; k < dims.modes(); ++k)
        out = kron(out, k == mode ? op : identity(dims[k]));
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("commutator shape mismatch");
    return a * b - b * a;
}

Complex expectation(const StateVector& psi, const ComplexMatrix& op) {
    if (op.rows() != op.cols() || op.cols() != psi.size())
        throw ShapeError(fmt::format("expectation: state dim {} vs operator {}x{}",
                                     psi.size(), op.rows(), op.cols()));
    return psi.dot(op * psi);
}

StateVector basis_state(int dim, int index) {
    if (index < 0 || index >= dim) throw IndexError(fmt::format("basis index {} outside dim {}", index, dim));
    StateVector v = StateVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

double unitarity_defect(const ComplexMatrix& u) {
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

ComplexMatrix restrict_to(const ComplexMatrix& m, const std::vector<int>& indices) {
    const auto n = static_cast<Eigen::Index>(indices.size());
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const int r = indices[i], c = indices[j];
            if (r < 0 || r >= m.rows() || c < 0 || c >= m.cols()) throw IndexError("restrict_to index out of range");
            out(i, j) = m(r, c);
        }
    }
    return out;
}

}  // namespace tcg
