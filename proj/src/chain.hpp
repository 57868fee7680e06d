#pragma once

#include <vector>

#include "constants.hpp"

namespace ioncool {

struct IonSpecies {
  double mass = 0.0;              // kg
  double natural_linewidth = 0.0; // rad/s, excited-state Gamma
  double raman_wavelength = 0.0;  // m

  void validate() const;  // all fields strictly positive
};

// 9Be+ with the P_3/2 linewidth and 313 nm Raman light.
IonSpecies be9();

struct TrapConfig {
  IonSpecies species;
  int n_ions = 1;
  double omega_z = 0.0;  // rad/s, axial COM
  double omega_x = 0.0;  // rad/s, radial
  double delta_k = 0.0;  // rad/m, wave-vector difference along z

  void validate() const;

  // length scale l with l^3 = e^2/(4 pi eps0 m omega_z^2)
  double length_scale() const;
};

// Two beams at 45 degrees to the axis, mutually perpendicular:
// |delta_k| = sqrt(2) * 2 pi / lambda. The default used when a config gives
// only the wavelength.
double default_delta_k(double raman_wavelength);

enum class Axis { axial, radial };

struct ModeStructure {
  Axis axis = Axis::axial;
  int n_ions = 0;
  std::vector<double> frequencies;            // rad/s, ascending
  std::vector<std::vector<double>> eigenvectors;  // [mode][ion], orthonormal
  std::vector<double> lamb_dicke;             // row-major [ion][mode]

  double eta(int ion, int mode) const { return lamb_dicke[ion * frequencies.size() + mode]; }
  // single-photon LD parameter eta/sqrt(2)
  double eta_single_photon(int ion, int mode) const;
};

// Dimensionless equilibrium positions u_i of n ions (harmonic + Coulomb),
// Newton iteration with analytic Jacobian. Sorted ascending, antisymmetric
// about 0, force-balance residual < 1e-10 per ion.
std::vector<double> equilibrium_positions(int n_ions);

// max |force residual| at given positions (test hook)
double force_balance_residual(const std::vector<double>& u);

ModeStructure axial_modes(const TrapConfig& cfg);

// Throws InstabilityError ("zigzag instability") when any transverse
// frequency^2 <= 0.
ModeStructure radial_modes(const TrapConfig& cfg);

// eta_{i,m} = delta_k sqrt(hbar/(2 m omega_m)) b_{i,m}; also stored inside
// the ModeStructure returned by the mode solvers.
std::vector<double> lamb_dicke_matrix(const ModeStructure& modes, const TrapConfig& cfg);

}  // namespace ioncool
