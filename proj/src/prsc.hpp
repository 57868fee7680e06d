#pragma once

#include <vector>

namespace ioncool {

// Fock populations for pulsed sideband cooling; nonnegative, sum conserved
// by the pulse recursion (top of cutoff reflects, no loss).
struct FockPopulations {
  std::vector<double> p;

  double nbar() const;
  double total() const;
};

FockPopulations thermal_populations(double nbar0, int n_cut);

// One RSB pulse of length t: population transfer between adjacent Fock
// states at the first-sideband Rabi rates Omega_{n,n+1}.
FockPopulations pulse_update(const FockPopulations& pop, double t, double eta, double omega0);

// nbar after each of n_pulses equal pulses; result[0] = nbar0.
std::vector<double> prsc_trajectory(double nbar0, double eta, double omega0,
                                    double t_pulse, int n_pulses);

// Grid argmin of the final nbar over t in [t_min, t_max] with grid+1 points;
// ties break toward smaller t.
double optimize_pulse_length(double nbar0, double eta, double omega0, int n_pulses,
                             double t_min, double t_max, int grid);

}  // namespace ioncool
