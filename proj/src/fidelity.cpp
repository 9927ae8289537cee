#include "tcgate/fidelity.hpp"

#include <cmath>

#include <fmt/core.h>

#include "tcgate/errors.hpp"
#include "tcgate/parallel.hpp"
#include "tcgate/units.hpp"

namespace tcg {

namespace {

const std::vector<int>& computational_indices(Layout layout) {
    static const std::vector<int> cz5{0, 1, 2, 3};
    static const std::vector<int> q9{0, 1, 3, 4};
    return layout == Layout::Cz5 ? cz5 : q9;
}

int layout_dim(Layout layout) { return layout == Layout::Cz5 ? kCzDim : 9; }

}  // namespace

ComplexMatrix computational_block(const ComplexMatrix& u, Layout layout) {
    if (u.rows() != layout_dim(layout) || u.cols() != layout_dim(layout))
        throw ShapeError(fmt::format("propagator {}x{} does not match layout", u.rows(), u.cols()));
    return restrict_to(u, computational_indices(layout));
}

double gate_fidelity(const ComplexMatrix& u, const ComplexMatrix& u_ideal) {
    if (u.rows() != u_ideal.rows() || u.cols() != u_ideal.cols() || u.rows() != u.cols())
        throw ShapeError("gate_fidelity needs square matrices of equal size");
    const Complex num = (u_ideal.adjoint() * u).trace();
    const double den = (u_ideal.adjoint() * u_ideal).trace().real();
    return std::abs(num) / den;
}

ComplexMatrix error_diagonal5(const StaticErrors& e) {
    ComplexMatrix d = ComplexMatrix::Zero(kCzDim, kCzDim);
    // |00>, |01>, |10>, |11>, |02>
    const double zz[5] = {1.0, -1.0, -1.0, 1.0, 0.0};
    const int n1[5] = {0, 0, 1, 1, 0};
    const int n2[5] = {0, 1, 0, 1, 2};
    for (int k = 0; k < kCzDim; ++k) d(k, k) = e.zz * zz[k] + e.drift1 * n1[k] + e.drift2 * n2[k];
    d(3, 3) += e.zz11;
    return d;
}

void effective_generator5(const PulseSegment& seg, const StaticErrors& e, double t_local, ComplexMatrix& h) {
    h = error_diagonal5(e);
    h.block(3, 3, 2, 2) += effective_generator(seg, t_local);
}

ComplexMatrix propagate_effective(const PulseSchedule& schedule, const StaticErrors& e, long steps_per_segment) {
    ComplexMatrix u = ComplexMatrix::Identity(kCzDim, kCzDim);
    for (const auto& seg : schedule.segments) {
        if (seg.duration <= 0.0) continue;
        const TimeGrid grid(0.0, seg.duration, steps_per_segment);
        u = propagate_unitary([&](double t, ComplexMatrix& h) { effective_generator5(seg, e, t, h); }, kCzDim, grid) *
            u;
    }
    return u;
}

HppModel make_hpp_model(const PulseSchedule& schedule, const ModulationCoefficients& coeffs,
                        const StaticErrors& errors) {
    return {coeffs, drive_schedule(schedule, coeffs), errors};
}

Complex hpp_coupling(const ModulationCoefficients& m, const DriveSegment& d, double t) {
    const double arg = d.omega_phi * t + d.phase;
    const double c1 = std::cos(arg);
    const double gt = m.g_static + m.g_linear * c1 + m.g_quadratic * (2.0 * c1 * c1 - 1.0);
    const double w = (m.detuning12 - m.alpha2) * t;
    return std::sqrt(2.0) * gt * Complex(std::cos(w), std::sin(w));
}

void hpp_generator5(const HppModel& model, std::size_t segment, double t, ComplexMatrix& h) {
    h = error_diagonal5(model.errors);
    const Complex c = hpp_coupling(model.coeffs, model.drive.at(segment), t);
    h(3, 4) += c;
    h(4, 3) += std::conj(c);
}

TimeGrid hpp_grid(const DriveSegment& d, double step_scale) {
    const double f_max = 3.0 * std::abs(d.omega_phi) / units::two_pi;
    TimeGrid g = TimeGrid::resolving(d.start, d.start + d.duration, f_max);
    if (step_scale != 1.0) g.steps = std::max(1L, static_cast<long>(std::ceil(g.steps * step_scale)));
    return g;
}

ComplexMatrix frame_correction5(double theta) {
    ComplexMatrix z = ComplexMatrix::Identity(kCzDim, kCzDim);
    z(3, 3) = std::exp(I * (0.5 * theta));
    z(4, 4) = std::exp(-I * (0.5 * theta));
    return z;
}

ComplexMatrix propagate_hpp(const HppModel& model, double step_scale) {
    // the generator is block diagonal: three fixed phases and the (|11>,|02>) pair
    const ComplexMatrix diag = error_diagonal5(model.errors);
    ComplexMatrix block = ComplexMatrix::Identity(2, 2);
    double total = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < model.drive.size(); ++k) {
        const DriveSegment& d = model.drive[k];
        if (d.duration <= 0.0) continue;
        auto gen = [&](double t, ComplexMatrix& h) {
            h.resize(2, 2);
            const Complex c = hpp_coupling(model.coeffs, d, t);
            h(0, 0) = diag(3, 3);
            h(1, 1) = diag(4, 4);
            h(0, 1) = c;
            h(1, 0) = std::conj(c);
        };
        block = propagate_unitary(gen, 2, hpp_grid(d, step_scale)) * block;
        total += d.duration;
        theta += d.delta_e * d.duration;
    }
    ComplexMatrix u = ComplexMatrix::Zero(kCzDim, kCzDim);
    for (int j = 0; j < 3; ++j) u(j, j) = std::exp(-I * (diag(j, j).real() * total));
    u.block(3, 3, 2, 2) = block;
    return frame_correction5(theta) * u;
}

ComplexMatrix propagate_hpp_dense(const HppModel& model, double step_scale) {
    ComplexMatrix u = ComplexMatrix::Identity(kCzDim, kCzDim);
    double theta = 0.0;
    for (std::size_t k = 0; k < model.drive.size(); ++k) {
        const DriveSegment& d = model.drive[k];
        if (d.duration <= 0.0) continue;
        u = propagate_unitary([&](double t, ComplexMatrix& h) { hpp_generator5(model, k, t, h); }, kCzDim,
                              hpp_grid(d, step_scale)) *
            u;
        theta += d.delta_e * d.duration;
    }
    return frame_correction5(theta) * u;
}

std::vector<FidelityPoint> average_state_fidelity(const LindbladRunner& run, const ComplexMatrix& u_ideal, int n,
                                                  Layout layout, int threads) {
    if (n < 8) throw QuadratureError(fmt::format("quadrature needs N >= 8, got {}", n));
    if (u_ideal.rows() != 4 || u_ideal.cols() != 4) throw ShapeError("ideal gate must be 4x4");
    const auto& comp = computational_indices(layout);
    const int dim = layout_dim(layout);
    // the map is linear in rho0: evolve a Hermitian operator basis of the 4x4 block once
    std::vector<ComplexMatrix> basis;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
            const int a = comp[static_cast<std::size_t>(i)], b = comp[static_cast<std::size_t>(j)];
            if (i == j) {
                e(a, a) = 1.0;
                basis.push_back(e);
                continue;
            }
            e(a, b) = e(b, a) = 1.0;
            basis.push_back(e);
            e(a, b) = I;
            e(b, a) = -I;
            basis.push_back(e);
        }
    std::vector<std::vector<DensitySample>> evolved(basis.size());
    parallel_for(basis.size(), threads, [&](std::size_t k) { evolved[k] = run(basis[k]); });
    const std::size_t samples = evolved.front().size();
    for (const auto& e : evolved)
        if (e.size() != samples) throw NumericalError("trajectories sampled on different grids");

    std::vector<FidelityPoint> avg(samples);
    for (std::size_t s = 0; s < samples; ++s) avg[s] = {evolved.front()[s].t, 0.0};
    const std::size_t nodes = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    for (std::size_t idx = 0; idx < nodes; ++idx) {
        const double th1 = units::two_pi * static_cast<double>(idx / static_cast<std::size_t>(n)) / n;
        const double th2 = units::two_pi * static_cast<double>(idx % static_cast<std::size_t>(n)) / n;
        StateVector q(4);
        q << std::cos(th1) * std::cos(th2), std::cos(th1) * std::sin(th2), std::sin(th1) * std::cos(th2),
            std::sin(th1) * std::sin(th2);
        const StateVector qt = u_ideal * q;
        StateVector psit = StateVector::Zero(dim);
        for (int k = 0; k < 4; ++k) psit(comp[static_cast<std::size_t>(k)]) = qt(k);
        // coordinates of q q^dag in the basis above
        std::vector<double> w;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                const Complex c = q(i) * std::conj(q(j));
                if (i == j) {
                    w.push_back(c.real());
                    continue;
                }
                w.push_back(c.real());
                w.push_back(c.imag());
            }
        for (std::size_t s = 0; s < samples; ++s) {
            double f = 0.0;
            for (std::size_t k = 0; k < basis.size(); ++k)
                if (w[k] != 0.0) f += w[k] * expectation(psit, evolved[k][s].rho).real();
            avg[s].fidelity += f;
        }
    }
    for (auto& p : avg) p.fidelity /= static_cast<double>(nodes);
    return avg;
}

std::vector<DensitySample> lindblad_schedule(const PulseSchedule& schedule, const HppModel* hpp,
                                             const ComplexMatrix& rho0, const DecoherenceRun& run) {
    if (run.model == Model::Hpp && hpp == nullptr) throw MissingParameterError("Hpp run without a drive model");
    LindbladConfig cfg;
    cfg.kappa_minus = run.kappa;
    cfg.kappa_z = run.kappa;
    cfg.modes = {0, 1};
    const auto diss = dissipators(cfg, ModeDims::two_qutrits(), kCzSubspace);

    std::vector<DensitySample> out;
    ComplexMatrix rho = rho0;
    std::vector<double> theta_at;  // frame angle per kept sample
    double t0 = 0.0, theta0 = 0.0;
    for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
        const PulseSegment& seg = schedule.segments[k];
        if (seg.duration <= 0.0) continue;
        std::vector<DensitySample> part;
        if (run.model == Model::Effective) {
            const TimeGrid grid(t0, t0 + seg.duration, run.steps_per_segment);
            part = propagate_lindblad(
                [&](double t, ComplexMatrix& h) { effective_generator5(seg, run.errors, t - t0, h); }, rho, diss, grid,
                run.stride);
        } else {
            part = propagate_lindblad([&](double t, ComplexMatrix& h) { hpp_generator5(*hpp, k, t, h); }, rho, diss,
                                      hpp_grid(hpp->drive.at(k), run.step_scale), run.stride);
        }
        rho = part.back().rho;
        for (std::size_t i = out.empty() ? 0 : 1; i < part.size(); ++i) {
            theta_at.push_back(theta0 + seg.delta_e * (part[i].t - t0));
            out.push_back(std::move(part[i]));
        }
        t0 += seg.duration;
        theta0 += seg.delta_e * seg.duration;
    }
    if (run.model == Model::Hpp) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const ComplexMatrix z = frame_correction5(theta_at[i]);
            out[i].rho = z * out[i].rho * z.adjoint();
        }
    }
    return out;
}

}  // namespace tcg
