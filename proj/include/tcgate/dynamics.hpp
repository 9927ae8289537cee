#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tcgate/qmath.hpp"

namespace tcg {

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    long steps = 1;

    TimeGrid() = default;
    TimeGrid(double t0, double t1, long steps);

    double step() const { return (t1 - t0) / static_cast<double>(steps); }
    // h = min(duration / 2000, 1 / (50 f_max)); f_max in cycles per us, 0 when static
    static TimeGrid resolving(double t0, double t1, double f_max);
    TimeGrid refined(long factor = 2) const { return TimeGrid(t0, t1, steps * factor); }
};

// Fills h with the generator at time t; h arrives sized from the previous call.
using Generator = std::function<void(double t, ComplexMatrix& h)>;

// Evolves the columns of `state` under i d/dt psi = H psi.
ComplexMatrix evolve_states(const Generator& h, const TimeGrid& grid, ComplexMatrix state);
ComplexMatrix propagate_unitary(const Generator& h, Eigen::Index dim, const TimeGrid& grid);
ComplexMatrix propagate_unitary(const std::function<ComplexMatrix(double)>& h, const TimeGrid& grid);

inline constexpr double kUnitarityTolerance = 1e-8;
inline constexpr double kTraceTolerance = 1e-6;

struct LindbladConfig {
    double kappa_minus = 0.0;
    double kappa_z = 0.0;
    std::vector<std::size_t> modes;

    void validate() const;
};

// D- = |0><1| + sqrt2 |1><2|, Dz = |1><1| + 2|2><2|, embedded on `mode`
std::pair<ComplexMatrix, ComplexMatrix> collapse_operators(const ModeDims& dims, std::size_t mode);

struct Dissipator {
    ComplexMatrix op;
    double rate;
};

// Operators for every target mode, optionally restricted to a subspace closed under them.
std::vector<Dissipator> dissipators(const LindbladConfig& cfg, const ModeDims& dims,
                                    const std::vector<int>& subspace = {});

struct DensitySample {
    double t;
    ComplexMatrix rho;
};

// d rho/dt = -i[H, rho] + sum (k/2)(2 D rho D^dag - D^dag D rho - rho D^dag D).
// Samples every `stride` steps (0: first and last only); the final time is always included.
std::vector<DensitySample> propagate_lindblad(const Generator& h, const ComplexMatrix& rho0,
                                              const std::vector<Dissipator>& diss, const TimeGrid& grid,
                                              long stride = 0);
std::vector<DensitySample> propagate_lindblad(const Generator& h, const DensityMatrix& rho0,
                                              const LindbladConfig& cfg, const ModeDims& dims, const TimeGrid& grid,
                                              long stride = 0);

}  // namespace tcg
