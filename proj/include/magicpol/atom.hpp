#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magicpol/angular.hpp"

namespace magicpol {

struct FineLevel {
  std::string label;
  HalfInt L, S, J;
  double energy_MHz = 0.0;  // relative to the ground level
  double gJ = 0.0;
  double hyperfine_A_MHz = 0.0;
  double hyperfine_B_MHz = 0.0;  // electric quadrupole
  std::string note;
};

/// Reduced E1 matrix element <upper J||d||lower J>, magnitude in atomic units.
struct TransitionDipole {
  std::string upper;
  std::string lower;
  double reduced_me_au = 0.0;
  std::string source;
};

struct AtomSpec {
  std::string name;
  HalfInt nuclear_I;
  double gI = 0.0;  // H_Z = mu_B B (gJ J_z + gI I_z)
  std::vector<FineLevel> levels;
  std::vector<TransitionDipole> dipoles;
  std::string note;

  /// Throws UnknownLabelError.
  const FineLevel& level(std::string_view label) const;
  const FineLevel* find_level(std::string_view label) const;
  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

struct HyperfineState {
  std::string level;
  HalfInt F;
  HalfInt mF;

  bool operator==(const HyperfineState&) const = default;
  std::string str() const;
};

/// Eigenstate of H_hf + H_Z on one fine level.
struct DressedState {
  std::string level;
  double B_G = 0.0;
  double energy_MHz = 0.0;
  Eigen::VectorXcd amplitudes;  // over hyperfine_basis(level)
  HyperfineState adiabatic_label;
};

AtomSpec load_atom(const std::filesystem::path& path);
AtomSpec parse_atom(std::istream& in, const std::string& source_name = "<stream>");

/// Resolves an atom file argument: an existing path, otherwise a name looked up
/// in $MAGICPOL_DATA_PATH (colon separated) and then the bundled data directory.
std::filesystem::path find_atom_file(const std::string& name_or_path);

/// (F, mF) basis of a level, F ascending and mF ascending within F.
std::vector<HyperfineState> hyperfine_basis(const AtomSpec& atom, std::string_view level);
std::size_t basis_index(const std::vector<HyperfineState>& basis, HalfInt F, HalfInt mF);

/// Allowed F values |J-I|..J+I.
std::vector<HalfInt> allowed_F(const AtomSpec& atom, std::string_view level);

/// E_hf = A K/2 + B [3K(K+1)/2 - 2I(I+1)J(J+1)] / [4I(2I-1)J(2J-1)].
double hyperfine_energy(const AtomSpec& atom, std::string_view level, HalfInt F);

/// Diagonal hyperfine Hamiltonian in the hyperfine basis (MHz).
Eigen::MatrixXd hyperfine_hamiltonian(const AtomSpec& atom, std::string_view level);

/// mu_B (gJ J_z + gI I_z) for a 1 G field along z, in the hyperfine basis (MHz/G).
Eigen::MatrixXd zeeman_operator(const AtomSpec& atom, std::string_view level);

/// Matrix of J_z in the hyperfine basis.
Eigen::MatrixXd jz_operator(const AtomSpec& atom, std::string_view level);

/// Diagonalizes H_hf + H_Z at field B (gauss, along z). Result follows the
/// hyperfine_basis order of the adiabatic labels.
std::vector<DressedState> dressed_states(const AtomSpec& atom, std::string_view level, double B_G);

/// The dressed state adiabatically connected to `label`.
DressedState dressed_state(const AtomSpec& atom, const HyperfineState& label, double B_G);

/// <F_u m_u| d_q |F_l m_l> in atomic units via J -> F reduction.
double dipole_element(const AtomSpec& atom, const HyperfineState& upper,
                      const HyperfineState& lower, int q);

/// Reduced element <J_u F_u||d||J_l F_l> (Edmonds convention).
double reduced_dipole_F(const AtomSpec& atom, std::string_view upper, HalfInt F_upper,
                        std::string_view lower, HalfInt F_lower);

/// Reduced <J_u||d||J_l> for a stored transition between the two levels in
/// either order, or nullopt.
std::optional<double> reduced_dipole(const AtomSpec& atom, std::string_view a, std::string_view b);

/// Cartesian dipole matrices <bra|d_i|ket>, i = x,y,z, between the hyperfine
/// bases of two levels joined by a stored transition (either direction).
std::array<Eigen::MatrixXcd, 3> dipole_matrices(const AtomSpec& atom, std::string_view bra,
                                                std::string_view ket);

/// Levels connected to `level` by a stored dipole.
std::vector<std::string> dipole_partners(const AtomSpec& atom, std::string_view level);

}  // namespace magicpol
