#include "tcgate/zzcalc.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "tcgate/errors.hpp"

namespace tcg {

namespace {

constexpr double kDegenerate = 1e-6;

void check_denominator(double d, const std::string& what) {
    if (std::abs(d) < kDegenerate) throw DegenerateLevelError(fmt::format("vanishing denominator {}", what));
}

}  // namespace

std::string BasisLabel::str() const { return fmt::format("|{}{},{}>", q1, q2, c); }

PerturbationBasis::PerturbationBasis(std::vector<BasisLabel> labels) : labels_(std::move(labels)) {
    for (const auto& l : labels_) {
        if (l.q1 < 0 || l.q1 > 2 || l.q2 < 0 || l.q2 > 2 || l.c < 0 || l.c > 2)
            throw IndexError(fmt::format("label {} outside three-level truncation", l.str()));
    }
}

PerturbationBasis PerturbationBasis::nine_state() {
    return PerturbationBasis({{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 1},
                              {1, 0, 1}, {0, 2, 0}, {2, 0, 0}, {0, 0, 2}});
}

PerturbationBasis PerturbationBasis::standard() {
    auto labels = nine_state().labels();
    labels.push_back({0, 0, 1});
    return PerturbationBasis(std::move(labels));
}

bool PerturbationBasis::is_s_state(const BasisLabel& s) {
    return s == kS00 || s == kS01 || s == kS10 || s == kS11;
}

std::array<double, 5> perturbation_energies(const DeviceParams& p, double omega_c, const BasisLabel& s,
                                            const PerturbationBasis& basis) {
    if (!PerturbationBasis::is_s_state(s)) throw DomainError(fmt::format("{} is not a computational state", s.str()));
    const ComplexMatrix h0 = bare_hamiltonian(p, omega_c);
    const ComplexMatrix v = coupling_hamiltonian(p);
    const int si = s.flat_index();

    std::vector<int> others;
    std::vector<double> den;  // E_s - E_j
    for (const auto& l : basis.labels()) {
        if (l == s) continue;
        const int j = l.flat_index();
        const double d = h0(si, si).real() - h0(j, j).real();
        check_denominator(d, fmt::format("between {} and {}", s.str(), l.str()));
        others.push_back(j);
        den.push_back(d);
    }
    const std::size_t n = others.size();
    auto V = [&](int a, int b) { return v(a, b).real(); };

    double e2 = 0.0, e3 = 0.0, e4a = 0.0, norm = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double vsa = V(si, others[a]);
        e2 += vsa * vsa / den[a];
        norm += vsa * vsa / (den[a] * den[a]);
        if (vsa == 0.0) continue;
        for (std::size_t b = 0; b < n; ++b) {
            const double vab = V(others[a], others[b]);
            if (vab == 0.0) continue;
            e3 += vsa * vab * V(others[b], si) / (den[a] * den[b]);
            for (std::size_t c = 0; c < n; ++c) {
                const double vbc = V(others[b], others[c]);
                if (vbc == 0.0) continue;
                e4a += vsa * vab * vbc * V(others[c], si) / (den[a] * den[b] * den[c]);
            }
        }
    }
    return {h0(si, si).real(), v(si, si).real(), e2, e3, e4a - e2 * norm};
}

double perturbation_energy(const DeviceParams& p, double omega_c, const BasisLabel& s, int order,
                           const PerturbationBasis& basis) {
    if (order < 0 || order > 4) throw DomainError(fmt::format("perturbation order {} outside 0..4", order));
    return perturbation_energies(p, omega_c, s, basis)[static_cast<std::size_t>(order)];
}

ZZDecomposition zz_perturbative(const DeviceParams& p, double omega_c, const PerturbationBasis& basis) {
    const auto e11 = perturbation_energies(p, omega_c, kS11, basis);
    const auto e10 = perturbation_energies(p, omega_c, kS10, basis);
    const auto e01 = perturbation_energies(p, omega_c, kS01, basis);
    const auto e00 = perturbation_energies(p, omega_c, kS00, basis);
    ZZDecomposition z;
    for (std::size_t k = 0; k < 5; ++k) z.orders[k] = e11[k] - e10[k] - e01[k] + e00[k];
    // the bare energies cancel identically; keep exact zeros rather than rounding residue
    z.orders[0] = 0.0;
    z.orders[1] = 0.0;
    return z;
}

ZZDecomposition zz_closed_form(const DeviceParams& p, double omega_c) {
    const double d1 = p.omega1 - omega_c;
    const double d2 = p.omega2 - omega_c;
    const double d12 = p.omega1 - p.omega2;
    const double a1 = p.alpha1, a2 = p.alpha2, ac = p.alpha_c;
    check_denominator(d1, "Delta1");
    check_denominator(d2, "Delta2");
    check_denominator(d12, "Delta12");
    check_denominator(d12 + a1, "Delta12 + alpha1");
    check_denominator(d12 - a2, "Delta12 - alpha2");
    check_denominator(d1 + d2 - ac, "Delta1 + Delta2 - alpha_c");
    const double g1 = p.g1, g2 = p.g2, g12 = p.g12;
    const double gg = g1 * g1 * g2 * g2;

    ZZDecomposition z;
    z.orders[2] = 2.0 * g12 * g12 * (a1 + a2) / ((d12 + a1) * (d12 - a2));
    z.orders[3] = 2.0 * g12 * g1 * g2 *
                  ((2.0 / (d12 - a2) - 1.0 / d12) / d1 - (2.0 / (d12 + a1) - 1.0 / d12) / d2);
    const double s = 1.0 / d1 + 1.0 / d2;
    z.orders[4] = 2.0 * gg / (d1 + d2 - ac) * s * s +
                  gg / (d1 * d1) * (2.0 / (d12 - a2) - 1.0 / d12 - 1.0 / d2) +
                  gg / (d2 * d2) * (-2.0 / (d12 + a1) + 1.0 / d12 - 1.0 / d1);
    return z;
}

double zz_exact(const DeviceParams& p, double omega_c) { return zz_exact(full_system_hamiltonian(p, omega_c)); }

double zz_exact(const ComplexMatrix& h) {
    if (h.rows() != 27 || h.cols() != 27) throw ShapeError("zz_exact expects a 27x27 Hamiltonian");
    // the combination is shift invariant; centring keeps eigenvalue round-off small
    const Complex mean = h.trace() / 27.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h - mean * ComplexMatrix::Identity(27, 27));
    const auto& vecs = es.eigenvectors();
    const auto& vals = es.eigenvalues();

    auto dressed = [&](const BasisLabel& s) {
        const Eigen::VectorXd overlap = vecs.row(s.flat_index()).cwiseAbs2().transpose();
        Eigen::Index best = 0;
        overlap.maxCoeff(&best);
        double runner_up = 0.0;
        for (Eigen::Index k = 0; k < overlap.size(); ++k)
            if (k != best) runner_up = std::max(runner_up, overlap(k));
        if (overlap(best) - runner_up < 1e-3)
            throw HybridizationError(fmt::format("{} is shared between two eigenstates", s.str()));
        return vals(best);
    };
    return dressed(kS11) - dressed(kS10) - dressed(kS01) + dressed(kS00);
}

}  // namespace tcg
