#pragma once

#include <functional>
#include <vector>

#include "tcgate/device.hpp"
#include "tcgate/dynamics.hpp"
#include "tcgate/geopath.hpp"

namespace tcg {

// Reduced two-qubit space used for gate runs: |00>, |01>, |10>, |11>, |02>.
inline constexpr int kCzDim = 5;
// their flat indices in the 3x3 two-transmon space
inline const std::vector<int> kCzSubspace{0, 1, 3, 4, 2};

enum class Layout { Cz5, TwoQutrit9 };

// 4x4 block on |00>, |01>, |10>, |11>
ComplexMatrix computational_block(const ComplexMatrix& u, Layout layout);

// |Tr(U_ideal^dag U)| / Tr(U_ideal^dag U_ideal)
double gate_fidelity(const ComplexMatrix& u, const ComplexMatrix& u_ideal);

// Static error terms added to the 5-dim generator, rad/us.
struct StaticErrors {
    double zz = 0.0;      // coefficient of diag(1,-1,-1,1,0)
    double drift1 = 0.0;  // omega_1 shift, enters as n_1
    double drift2 = 0.0;  // omega_2 shift, enters as n_2
    double zz11 = 0.0;    // energy-combination shift placed on |11> alone
};

ComplexMatrix error_diagonal5(const StaticErrors& e);

// H_e on the (|11>,|02>) block plus the static errors, t local to the segment
void effective_generator5(const PulseSegment& seg, const StaticErrors& e, double t_local, ComplexMatrix& h);
ComplexMatrix propagate_effective(const PulseSchedule& schedule, const StaticErrors& e = {},
                                  long steps_per_segment = 2000);

// Physical model with every oscillating term of the |11> <-> |02> exchange kept.
struct HppModel {
    ModulationCoefficients coeffs;
    std::vector<DriveSegment> drive;
    StaticErrors errors;
};

HppModel make_hpp_model(const PulseSchedule& schedule, const ModulationCoefficients& coeffs,
                        const StaticErrors& errors = {});
// |11><02| coefficient at global time t
Complex hpp_coupling(const ModulationCoefficients& m, const DriveSegment& d, double t);
void hpp_generator5(const HppModel& model, std::size_t segment, double t, ComplexMatrix& h);
// 5x5 propagator in the effective frame (sigma~_z rotation removed at the end)
ComplexMatrix propagate_hpp(const HppModel& model, double step_scale = 1.0);
// same evolution, integrating the full 5-dim generator instead of the 2x2 block
ComplexMatrix propagate_hpp_dense(const HppModel& model, double step_scale = 1.0);
TimeGrid hpp_grid(const DriveSegment& d, double step_scale = 1.0);
// diag(1,1,1,e^{i theta/2},e^{-i theta/2}) taking the drive frame to the effective frame
ComplexMatrix frame_correction5(double theta);

// F_dec(t) averaged over product states of the two qubits
struct FidelityPoint {
    double t;
    double fidelity;
};
using LindbladRunner = std::function<std::vector<DensitySample>(const ComplexMatrix& rho0)>;
std::vector<FidelityPoint> average_state_fidelity(const LindbladRunner& run, const ComplexMatrix& u_ideal, int n,
                                                  Layout layout = Layout::Cz5, int threads = 1);

enum class Model { Effective, Hpp };

struct DecoherenceRun {
    Model model = Model::Effective;
    double kappa = 0.0;             // kappa_minus = kappa_z, 1/us
    long steps_per_segment = 2000;  // effective model
    double step_scale = 1.0;        // Hpp model
    long stride = 0;                // sampling stride in steps, 0 keeps segment ends only
    StaticErrors errors;            // effective model only; the Hpp model carries its own
};

// Piecewise Lindblad evolution of one initial state over a schedule.
std::vector<DensitySample> lindblad_schedule(const PulseSchedule& schedule, const HppModel* hpp,
                                             const ComplexMatrix& rho0, const DecoherenceRun& run);

}  // namespace tcg
