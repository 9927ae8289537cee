#pragma once

#include <array>
#include <string>
#include <vector>

#include "tcgate/device.hpp"

namespace tcg {

// |Q1 Q2, C>
struct BasisLabel {
    int q1;
    int q2;
    int c;

    int flat_index() const { return 9 * q1 + 3 * q2 + c; }
    std::string str() const;
    bool operator==(const BasisLabel&) const = default;
};

class PerturbationBasis {
public:
    // The nine labelled states plus |00,1>, which |10,0> and |01,0> reach in one step
    // and whose omission leaves uncancelled single-excitation shifts.
    static PerturbationBasis standard();
    // exactly the nine labels, kept for comparison runs
    static PerturbationBasis nine_state();

    explicit PerturbationBasis(std::vector<BasisLabel> labels);

    const std::vector<BasisLabel>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    static bool is_s_state(const BasisLabel& s);

private:
    std::vector<BasisLabel> labels_;
};

inline constexpr BasisLabel kS00{0, 0, 0};
inline constexpr BasisLabel kS01{0, 1, 0};
inline constexpr BasisLabel kS10{1, 0, 0};
inline constexpr BasisLabel kS11{1, 1, 0};

struct ZZDecomposition {
    std::array<double, 5> orders{};

    double total() const { return orders[0] + orders[1] + orders[2] + orders[3] + orders[4]; }
    // coefficient of sigma_z x sigma_z carrying the same energy combination
    double pauli_coefficient() const { return 0.25 * total(); }
};

double perturbation_energy(const DeviceParams& p, double omega_c, const BasisLabel& s, int order,
                           const PerturbationBasis& basis = PerturbationBasis::standard());
// all five orders at once
std::array<double, 5> perturbation_energies(const DeviceParams& p, double omega_c, const BasisLabel& s,
                                            const PerturbationBasis& basis = PerturbationBasis::standard());

ZZDecomposition zz_perturbative(const DeviceParams& p, double omega_c,
                                const PerturbationBasis& basis = PerturbationBasis::standard());
ZZDecomposition zz_closed_form(const DeviceParams& p, double omega_c);
double zz_exact(const DeviceParams& p, double omega_c);
// dressed-energy combination of any 27-dim Hamiltonian in the Q1,Q2,C product basis
double zz_exact(const ComplexMatrix& h);

}  // namespace tcg
