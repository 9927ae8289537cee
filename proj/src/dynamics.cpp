#include "tcgate/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "tcgate/errors.hpp"

namespace tcg {

TimeGrid::TimeGrid(double t0_, double t1_, long steps_) : t0(t0_), t1(t1_), steps(steps_) {
    if (steps < 1) throw DomainError("time grid needs at least one step");
    if (!(t1 >= t0) || !std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("time grid must run forward");
}

TimeGrid TimeGrid::resolving(double t0, double t1, double f_max) {
    const double span = t1 - t0;
    double h = span / 2000.0;
    if (f_max > 0.0) h = std::min(h, 1.0 / (50.0 * f_max));
    const long n = span > 0.0 ? static_cast<long>(std::ceil(span / h - 1e-9)) : 1;
    return TimeGrid(t0, t1, std::max(n, 1L));
}

ComplexMatrix evolve_states(const Generator& gen, const TimeGrid& grid, ComplexMatrix psi) {
    const Eigen::Index n = psi.rows();
    const Eigen::Index m = psi.cols();
    const double h = grid.step();
    ComplexMatrix hs(n, n), hm(n, n), he(n, n);
    ComplexMatrix k1(n, m), k2(n, m), k3(n, m), k4(n, m), tmp(n, m);
    const Complex mi = -I;

    gen(grid.t0, hs);
    for (long i = 0; i < grid.steps; ++i) {
        const double t = grid.t0 + static_cast<double>(i) * h;
        gen(t + 0.5 * h, hm);
        gen(t + h, he);
        k1.noalias() = mi * (hs * psi);
        tmp = psi + (0.5 * h) * k1;
        k2.noalias() = mi * (hm * tmp);
        tmp = psi + (0.5 * h) * k2;
        k3.noalias() = mi * (hm * tmp);
        tmp = psi + h * k3;
        k4.noalias() = mi * (he * tmp);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        hs.swap(he);
    }
    return psi;
}

ComplexMatrix propagate_unitary(const Generator& gen, Eigen::Index dim, const TimeGrid& grid) {
    ComplexMatrix u = evolve_states(gen, grid, ComplexMatrix::Identity(dim, dim));
    const double defect = unitarity_defect(u);
    if (defect > kUnitarityTolerance)
        throw StepSizeError(fmt::format("unitarity defect {:.3e} after {} steps; refine the time grid", defect,
                                        grid.steps));
    return u;
}

ComplexMatrix propagate_unitary(const std::function<ComplexMatrix(double)>& h, const TimeGrid& grid) {
    const ComplexMatrix h0 = h(grid.t0);
    if (h0.rows() != h0.cols()) throw ShapeError("generator must be square");
    return propagate_unitary([&](double t, ComplexMatrix& out) { out = h(t); }, h0.rows(), grid);
}

void LindbladConfig::validate() const {
    if (!(kappa_minus >= 0.0) || !(kappa_z >= 0.0)) throw DomainError("decoherence rates must be non-negative");
}

std::pair<ComplexMatrix, ComplexMatrix> collapse_operators(const ModeDims& dims, std::size_t mode) {
    if (mode >= dims.modes()) throw IndexError(fmt::format("mode {} out of range", mode));
    if (dims[mode] != 3) throw DimensionError(fmt::format("collapse operators need a 3-level mode, got {}", dims[mode]));
    ComplexMatrix lower = ComplexMatrix::Zero(3, 3);
    lower(0, 1) = 1.0;
    lower(1, 2) = std::sqrt(2.0);
    ComplexMatrix deph = ComplexMatrix::Zero(3, 3);
    deph(1, 1) = 1.0;
    deph(2, 2) = 2.0;
    return {embed(lower, mode, dims), embed(deph, mode, dims)};
}

std::vector<Dissipator> dissipators(const LindbladConfig& cfg, const ModeDims& dims, const std::vector<int>& subspace) {
    cfg.validate();
    std::vector<Dissipator> out;
    for (std::size_t mode : cfg.modes) {
        auto [dm, dz] = collapse_operators(dims, mode);
        if (!subspace.empty()) {
            // the subspace must be closed under the operator, otherwise restriction loses weight
            std::vector<bool> inside(static_cast<std::size_t>(dims.total()), false);
            for (int i : subspace) inside.at(static_cast<std::size_t>(i)) = true;
            for (const ComplexMatrix* d : {&dm, &dz})
                for (int c : subspace)
                    for (Eigen::Index r = 0; r < d->rows(); ++r)
                        if (std::abs((*d)(r, c)) > 0.0 && !inside[static_cast<std::size_t>(r)])
                            throw DomainError("subspace not closed under the collapse operators");
            dm = restrict_to(dm, subspace);
            dz = restrict_to(dz, subspace);
        }
        if (cfg.kappa_minus > 0.0) out.push_back({dm, cfg.kappa_minus});
        if (cfg.kappa_z > 0.0) out.push_back({dz, cfg.kappa_z});
    }
    return out;
}

std::vector<DensitySample> propagate_lindblad(const Generator& gen, const ComplexMatrix& rho0,
                                              const std::vector<Dissipator>& diss, const TimeGrid& grid,
                                              long stride) {
    const Eigen::Index n = rho0.rows();
    if (rho0.cols() != n) throw ShapeError("density matrix must be square");
    for (const auto& d : diss)
        if (d.op.rows() != n || d.op.cols() != n) throw ShapeError("collapse operator does not match density matrix");

    // anti-Hermitian part of the non-Hermitian effective generator
    ComplexMatrix damp = ComplexMatrix::Zero(n, n);
    for (const auto& d : diss) damp += 0.5 * d.rate * (d.op.adjoint() * d.op);

    ComplexMatrix hs(n, n), hm(n, n), he(n, n), k(n, n), x(n, n);
    ComplexMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    auto rhs = [&](const ComplexMatrix& hmat, const ComplexMatrix& rho, ComplexMatrix& out) {
        k = hmat - I * damp;
        x.noalias() = (-I) * (k * rho);
        out = x + x.adjoint();
        for (const auto& d : diss) out.noalias() += d.rate * (d.op * rho * d.op.adjoint());
    };

    const double h = grid.step();
    const Complex tr0 = rho0.trace();
    ComplexMatrix rho = rho0;
    std::vector<DensitySample> out;
    out.push_back({grid.t0, rho});
    auto check_trace = [&](double t) {
        const double drift = std::abs(rho.trace() - tr0);
        if (drift > kTraceTolerance)
            throw IntegrationError(fmt::format("trace drift {:.3e} at t = {:.6g} us", drift, t));
    };

    gen(grid.t0, hs);
    for (long i = 0; i < grid.steps; ++i) {
        const double t = grid.t0 + static_cast<double>(i) * h;
        gen(t + 0.5 * h, hm);
        gen(t + h, he);
        rhs(hs, rho, k1);
        tmp = rho + (0.5 * h) * k1;
        rhs(hm, tmp, k2);
        tmp = rho + (0.5 * h) * k2;
        rhs(hm, tmp, k3);
        tmp = rho + h * k3;
        rhs(he, tmp, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        hs.swap(he);
        const bool last = i + 1 == grid.steps;
        if (last || (stride > 0 && (i + 1) % stride == 0)) {
            const double ts = last ? grid.t1 : t + h;
            check_trace(ts);
            out.push_back({ts, rho});
        }
    }
    return out;
}

std::vector<DensitySample> propagate_lindblad(const Generator& gen, const DensityMatrix& rho0,
                                              const LindbladConfig& cfg, const ModeDims& dims, const TimeGrid& grid,
                                              long stride) {
    return propagate_lindblad(gen, rho0.matrix(), dissipators(cfg, dims), grid, stride);
}

}  // namespace tcg
