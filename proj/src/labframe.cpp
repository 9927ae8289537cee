#include "tcgate/labframe.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <tuple>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tcgate/dynamics.hpp"
#include "tcgate/errors.hpp"
#include "tcgate/units.hpp"
#include "tcgate/zzcalc.hpp"

namespace tcg {

namespace {

const BasisLabel kS02{0, 2, 0};

struct Manifold {
    std::vector<BasisLabel> labels;
    ComplexMatrix fixed;  // everything except omega_c * n_c
    Eigen::VectorXd n_c;
    int excitations;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(labels.size()); }
    ComplexMatrix at(double omega_c) const {
        ComplexMatrix h = fixed;
        for (Eigen::Index i = 0; i < n_c.size(); ++i) h(i, i) += omega_c * n_c(i);
        return h;
    }
    Eigen::Index position(const BasisLabel& l) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return static_cast<Eigen::Index>(i);
        throw IndexError(fmt::format("{} not in manifold", l.str()));
    }
};

Manifold make_manifold(const DeviceParams& p, std::vector<BasisLabel> labels, int excitations) {
    std::vector<int> flat;
    for (const auto& l : labels) flat.push_back(l.flat_index());
    Manifold m;
    m.fixed = restrict_to(full_system_hamiltonian(p, 0.0), flat);
    m.n_c.resize(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) m.n_c(static_cast<Eigen::Index>(i)) = labels[i].c;
    m.labels = std::move(labels);
    m.excitations = excitations;
    return m;
}

struct Dressed {
    Eigen::VectorXd energy;  // per label
    ComplexMatrix basis;     // column k follows label k, phased so its label weight is real positive
};

Dressed dressed(const Manifold& m, double omega_c) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.at(omega_c));
    const Eigen::Index n = m.dim();
    Dressed d{Eigen::VectorXd(n), ComplexMatrix(n, n)};
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (Eigen::Index row = 0; row < n; ++row) {
        Eigen::Index best = -1;
        double w = -1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double wk = std::norm(es.eigenvectors()(row, k));
            if (!taken[static_cast<std::size_t>(k)] && wk > w) {
                w = wk;
                best = k;
            }
        }
        taken[static_cast<std::size_t>(best)] = true;
        const Complex ov = es.eigenvectors()(row, best);
        d.basis.col(row) = es.eigenvectors().col(best) * (std::conj(ov) / std::abs(ov));
        d.energy(row) = es.eigenvalues()(best);
    }
    return d;
}

struct LabDrive {
    double phi_dc;
    double phi_ac;
    double carrier;
};

class LabModel {
public:
    LabModel(const DeviceParams& p, double phi_ac)
        : p_(p),
          one_(make_manifold(p, {kS10, kS01, {0, 0, 1}}, 1)),
          two_(make_manifold(p, {kS11, kS02, {2, 0, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}}, 2)),
          phi_ac_(phi_ac) {}

    const Manifold& one() const { return one_; }
    const Manifold& two() const { return two_; }
    const DeviceParams& device() const { return p_; }

    // Subtracting excitations * omega_ref keeps the integrated phases small.
    void set_reference(double omega_ref) { omega_ref_ = omega_ref; }
    double reference() const { return omega_ref_; }

    ComplexMatrix propagate(const Manifold& m, const std::function<double(double)>& flux, double phi_dc, double t0,
                            double t1, double step_scale, long min_steps, long& steps) const {
        const double wc_max = coupler_frequency(p_, std::max(phi_dc - phi_ac_, 0.0));
        double w_max = 0.0;
        for (Eigen::Index i = 0; i < m.dim(); ++i)
            w_max = std::max(w_max, std::abs(m.fixed(i, i).real() - m.excitations * omega_ref_ + wc_max * m.n_c(i)));
        const long n = static_cast<long>(std::ceil((t1 - t0) * w_max / 0.01 * step_scale));
        const TimeGrid grid(t0, t1, std::max(n, min_steps));
        steps += grid.steps;
        const double shift = m.excitations * omega_ref_;
        return propagate_unitary(
            [&](double t, ComplexMatrix& h) {
                h = m.fixed;
                const double wc = coupler_frequency(p_, flux(t));
                for (Eigen::Index i = 0; i < m.dim(); ++i) h(i, i) += wc * m.n_c(i) - shift;
            },
            m.dim(), grid);
    }

    struct Floquet {
        Eigen::VectorXd eps;  // quasi-energies on the branch of the averaged dressed energies
        ComplexMatrix modes;  // Floquet modes at the period start, dressed basis
    };

    // One-period propagator at drive frequency omega. Branches follow the modulation-averaged
    // dressed energies, with |02> raised by one drive quantum.
    Floquet floquet(const Manifold& m, const LabDrive& L, double omega, double phase, long& steps) const {
        const double period = units::two_pi / omega;
        auto flux = [&](double t) { return L.phi_dc + L.phi_ac * std::cos(omega * t + phase); };
        const ComplexMatrix u = propagate(m, flux, L.phi_dc, 0.0, period, 1.0, 200, steps);
        const ComplexMatrix b = dressed(m, coupler_frequency(p_, flux(0.0))).basis;

        Eigen::VectorXd ref = Eigen::VectorXd::Zero(m.dim());
        constexpr int kPhases = 64;
        for (int k = 0; k < kPhases; ++k) {
            const double phi = L.phi_dc + L.phi_ac * std::cos(units::two_pi * k / kPhases);
            ref += dressed(m, coupler_frequency(p_, phi)).energy / kPhases;
        }
        if (m.excitations == 2) ref(m.position(kS02)) += omega;

        Eigen::ComplexEigenSolver<ComplexMatrix> ces(b.adjoint() * u * b);
        Floquet f{Eigen::VectorXd(m.dim()), ces.eigenvectors()};
        for (Eigen::Index k = 0; k < m.dim(); ++k) {
            f.modes.col(k).normalize();
            double e = -std::arg(ces.eigenvalues()(k)) / period + m.excitations * omega_ref_;
            const double target = f.modes.col(k).cwiseAbs2().dot(ref);
            e += std::round((target - e) / omega) * omega;
            f.eps(k) = e;
        }
        return f;
    }

    // quasi-energy of the mode carrying most of `row`
    static double quasi_energy(const Floquet& f, Eigen::Index row) {
        Eigen::Index best = 0;
        f.modes.row(row).cwiseAbs2().maxCoeff(&best);
        return f.eps(best);
    }

    std::pair<double, double> single_quasi_energies(const LabDrive& L, double omega, long& steps) const {
        const Floquet f = floquet(one_, L, omega, 0.0, steps);
        return {quasi_energy(f, 0), quasi_energy(f, 1)};
    }

    ExchangeBlock exchange_block(const LabDrive& L, double omega, long& steps) const {
        ExchangeBlock b{};
        std::tie(b.eps10, b.eps01) = single_quasi_energies(L, omega, steps);
        const Floquet f = floquet(two_, L, omega, 0.0, steps);
        // the two modes living on (|11>, |02>); their overlap block, made unitary, fixes the basis
        std::vector<Eigen::Index> order(static_cast<std::size_t>(two_.dim()));
        std::iota(order.begin(), order.end(), 0);
        auto weight = [&](Eigen::Index k) { return std::norm(f.modes(0, k)) + std::norm(f.modes(1, k)); };
        std::partial_sort(order.begin(), order.begin() + 2, order.end(),
                          [&](Eigen::Index a, Eigen::Index c) { return weight(a) > weight(c); });
        ComplexMatrix w(2, 2);
        for (int j = 0; j < 2; ++j) w.col(j) = f.modes.block(0, order[static_cast<std::size_t>(j)], 2, 1);
        Eigen::JacobiSVD<ComplexMatrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const ComplexMatrix wu = svd.matrixU() * svd.matrixV().adjoint();
        Eigen::Vector2cd lambda(f.eps(order[0]), f.eps(order[1]));
        const ComplexMatrix h = wu * lambda.asDiagonal() * wu.adjoint();
        const double frame = b.eps10 + b.eps01;
        b.e11 = h(0, 0).real() - frame;
        b.e02 = h(1, 1).real() - frame;
        b.coupling = h(0, 1);
        return b;
    }

    // Floquet modes at drive phase `phase`, columns following the labels. The resonant
    // (|11>, |02>) pair is replaced by the closest orthonormal pair in its span.
    ComplexMatrix floquet_frame(const Manifold& m, const LabDrive& L, double omega, double phase, long& steps) const {
        const Floquet f = floquet(m, L, omega, phase, steps);
        const ComplexMatrix b = dressed(m, coupler_frequency(p_, L.phi_dc + L.phi_ac * std::cos(phase))).basis;
        const Eigen::Index n = m.dim();
        ComplexMatrix frame(n, n);
        std::vector<bool> taken(static_cast<std::size_t>(n), false);
        std::vector<Eigen::Index> owner(static_cast<std::size_t>(n));
        for (Eigen::Index row = 0; row < n; ++row) {
            Eigen::Index best = -1;
            double w = -1.0;
            for (Eigen::Index k = 0; k < n; ++k)
                if (!taken[static_cast<std::size_t>(k)] && std::norm(f.modes(row, k)) > w) {
                    w = std::norm(f.modes(row, k));
                    best = k;
                }
            taken[static_cast<std::size_t>(best)] = true;
            owner[static_cast<std::size_t>(row)] = best;
            frame.col(row) = f.modes.col(best);
        }
        if (m.excitations == 2) {
            ComplexMatrix span(n, 2);
            span << frame.col(0), frame.col(1);
            Eigen::JacobiSVD<ComplexMatrix> svd(span.topRows(2), Eigen::ComputeFullU | Eigen::ComputeFullV);
            frame.leftCols(2) = span * (svd.matrixV() * svd.matrixU().adjoint());
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const Complex ov = frame(k, k);
            frame.col(k) *= std::conj(ov) / std::abs(ov);
        }
        return b * frame;
    }

private:
    DeviceParams p_;
    Manifold one_;
    Manifold two_;
    double phi_ac_;
    double omega_ref_ = 0.0;
};

// H'' counterpart, in the frame where |02> follows the drive at detuning delta
ExchangeBlock hpp_exchange_block(const ModulationCoefficients& c, double zz11, double delta = 0.0) {
    DriveSegment d;
    d.omega_phi = c.omega_phi(delta);
    const double period = units::two_pi / d.omega_phi;
    const TimeGrid grid = TimeGrid::resolving(0.0, period, 3.0 * d.omega_phi / units::two_pi).refined(4);
    const ComplexMatrix u = propagate_unitary(
        [&](double t, ComplexMatrix& h) {
            h.resize(2, 2);
            const Complex g = hpp_coupling(c, d, t) * std::exp(I * (delta * t));
            h << zz11, g, std::conj(g), delta;
        },
        2, grid);
    Eigen::ComplexEigenSolver<ComplexMatrix> ces(u);
    Eigen::VectorXcd eps(2);
    for (Eigen::Index k = 0; k < 2; ++k) eps(k) = -std::arg(ces.eigenvalues()(k)) / period;
    const ComplexMatrix h = ces.eigenvectors() * eps.asDiagonal() * ces.eigenvectors().inverse();
    return {h(0, 0).real(), h(1, 1).real(), h(0, 1), 0.0, 0.0};
}

struct GateRun {
    ComplexMatrix m5;
    long steps = 0;
};

GateRun run_gate(const LabModel& model, const LabDrive& L, const std::vector<DriveSegment>& drive,
                 double frame_angle, double step_scale) {
    GateRun run;
    auto flux_at = [&](const DriveSegment& d, double t) {
        return L.phi_dc + L.phi_ac * std::cos((L.carrier + d.delta) * t + d.phase);
    };

    ComplexMatrix u1 = ComplexMatrix::Identity(3, 3), u2 = ComplexMatrix::Identity(6, 6);
    double frame10 = 0.0, frame01 = 0.0, t_end = 0.0;
    for (const auto& d : drive) {
        if (d.duration <= 0.0) continue;
        auto flux = [&](double t) { return flux_at(d, t); };
        u1 = model.propagate(model.one(), flux, L.phi_dc, d.start, d.start + d.duration, step_scale, 2000, run.steps) *
             u1;
        u2 = model.propagate(model.two(), flux, L.phi_dc, d.start, d.start + d.duration, step_scale, 2000, run.steps) *
             u2;
        const auto [eps10, eps01] = model.single_quasi_energies(L, L.carrier + d.delta, run.steps);
        frame10 += eps10 * d.duration;
        frame01 += eps01 * d.duration;
        t_end = d.start + d.duration;
    }
    const DriveSegment& first = drive.front();
    const DriveSegment& last = drive.back();
    const double w0 = L.carrier + first.delta, w1 = L.carrier + last.delta;
    const double phase0 = first.phase, phase1 = w1 * t_end + last.phase;
    const ComplexMatrix in1 = model.floquet_frame(model.one(), L, w0, phase0, run.steps);
    const ComplexMatrix out1 = model.floquet_frame(model.one(), L, w1, phase1, run.steps);
    const ComplexMatrix in2 = model.floquet_frame(model.two(), L, w0, phase0, run.steps);
    const ComplexMatrix out2 = model.floquet_frame(model.two(), L, w1, phase1, run.steps);
    const ComplexMatrix m1 = out1.adjoint() * u1 * in1;
    const ComplexMatrix m2 = out2.adjoint() * u2 * in2;

    // |02> turns one carrier quantum below |11>; its phase never enters the computational block
    const double ref = model.reference();
    const std::array<double, 5> frame{0.0, frame01 - ref * t_end, frame10 - ref * t_end,
                                      frame10 + frame01 - 2.0 * ref * t_end,
                                      frame10 + frame01 - (2.0 * ref + L.carrier) * t_end};
    ComplexMatrix m5 = ComplexMatrix::Zero(kCzDim, kCzDim);
    m5(0, 0) = 1.0;
    // manifold positions of |01>, |10> and of |11>, |02>
    const int one_pos[2] = {1, 0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m5(1 + i, 1 + j) = m1(one_pos[i], one_pos[j]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m5(3 + i, 3 + j) = m2(i, j);
    for (int i = 1; i < kCzDim; ++i) m5.row(i) *= std::exp(I * frame[static_cast<std::size_t>(i)]);
    run.m5 = frame_correction5(frame_angle) * m5;
    return run;
}

}  // namespace

LabFrameResult lab_frame_comparison(const LabFrameRequest& req) {
    const DeviceParams& p = req.device;
    const WorkingPoint wp = working_point(p, req.phi_ac, req.g_e);
    const PulseSchedule sched = schedule_for(req.scheme, req.gate, req.g_e);
    const std::vector<DriveSegment> drive = drive_schedule(sched, wp.coeffs);
    const ComplexMatrix target = ideal_gate(req.gate.gamma);

    LabModel model(p, req.phi_ac);
    const SwParams sw = sw_at_flux(p, wp.phi_dc);
    model.set_reference(0.5 * (sw.omega1 + sw.omega2));

    LabFrameResult res{};
    const LabDrive nominal{wp.phi_dc, req.phi_ac, wp.coeffs.omega_phi(0.0)};
    LabDrive cal = nominal;
    long steps = 0;

    // Match the lab exchange block to the H'' one: carrier and phi_DC for detuning and coupling
    // (Newton with a difference Jacobian), then the |11> shift handed to H'' for the diagonal.
    double zz11 = 0.0;
    ExchangeBlock lab{}, hpp = hpp_exchange_block(wp.coeffs, 0.0);
    auto residual = [&](const LabDrive& L) {
        const ExchangeBlock b = model.exchange_block(L, L.carrier, steps);
        return Eigen::Vector2d((b.e11 - b.e02) - (hpp.e11 - hpp.e02), std::abs(b.coupling) - std::abs(hpp.coupling));
    };
    const double dw = 0.5, dphi = 1e-5;
    for (int round = 0; round < req.calibration_rounds; ++round) {
        lab = model.exchange_block(cal, cal.carrier, steps);
        zz11 += lab.e11 - hpp.e11;
        hpp = hpp_exchange_block(wp.coeffs, zz11);
        const Eigen::Vector2d r = residual(cal);
        spdlog::debug("calibration round {}: detuning gap {:.3e}, coupling gap {:.3e} rad/us", round, r(0), r(1));
        if (r.norm() < 1e-9) break;
        Eigen::Matrix2d jac;
        jac.col(0) = (residual({cal.phi_dc, cal.phi_ac, cal.carrier + dw}) - r) / dw;
        jac.col(1) = (residual({cal.phi_dc + dphi, cal.phi_ac, cal.carrier}) - r) / dphi;
        const Eigen::Vector2d step = jac.fullPivLu().solve(-r);
        cal.carrier += step(0);
        cal.phi_dc += step(1);
    }
    lab = model.exchange_block(cal, cal.carrier, steps);
    res.lab_block = lab;
    res.hpp_block = hpp;
    res.zz11 = zz11;
    res.carrier_offset = cal.carrier - nominal.carrier;
    res.flux_offset = cal.phi_dc - nominal.phi_dc;

    // Detuned segments: shift the lab drive frequency until its exchange detuning matches H'' at
    // the same delta, re-referencing the phase so the coupling phase at the segment start is kept.
    std::vector<DriveSegment> lab_drive = drive;
    for (auto& d : lab_drive) {
        if (d.delta == 0.0 || d.duration <= 0.0) continue;
        const ExchangeBlock target_block = hpp_exchange_block(wp.coeffs, zz11, d.delta);
        const double want = target_block.e11 - target_block.e02;
        auto gap = [&](double x) {
            const ExchangeBlock b = model.exchange_block(cal, cal.carrier + d.delta + x, steps);
            return (b.e11 - b.e02) - want;
        };
        double x = 0.0, g = gap(x);
        for (int round = 0; round < req.calibration_rounds && std::abs(g) > 1e-9; ++round) {
            const double slope = (gap(x + 0.5) - g) / 0.5;
            x -= g / slope;
            g = gap(x);
        }
        spdlog::debug("segment at t = {:.4f}: drive shift {:.4e} rad/us, residual {:.2e}", d.start, x, g);
        d.delta += x;
        d.phase -= x * d.start;
    }

    const GateRun calibrated = run_gate(model, cal, lab_drive, sched.frame_angle(), req.step_scale);
    const ComplexMatrix block = computational_block(calibrated.m5, Layout::Cz5);
    res.fidelity_lab = gate_fidelity(block, target);
    res.leakage_lab = 1.0 - block.squaredNorm() / 4.0;
    const GateRun raw = run_gate(model, nominal, drive, sched.frame_angle(), req.step_scale);
    res.fidelity_lab_nominal = gate_fidelity(computational_block(raw.m5, Layout::Cz5), target);
    res.steps = steps + calibrated.steps + raw.steps;

    StaticErrors err;
    err.zz11 = zz11;
    const HppModel h = make_hpp_model(sched, wp.coeffs, err);
    res.fidelity_hpp = gate_fidelity(computational_block(propagate_hpp(h, req.step_scale), Layout::Cz5), target);
    return res;
}

}  // namespace tcg
