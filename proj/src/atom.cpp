#include "magicpol/atom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"

namespace magicpol {

const FineLevel* AtomSpec::find_level(std::string_view label) const {
  for (const auto& l : levels)
    if (l.label == label) return &l;
  return nullptr;
}

const FineLevel& AtomSpec::level(std::string_view label) const {
  if (const auto* l = find_level(label)) return *l;
  throw UnknownLabelError("unknown level '" + std::string(label) + "' in atom " + name);
}

void AtomSpec::validate() const {
  if (name.empty()) throw ValidationError("atom: name is empty");
  if (nuclear_I.twice() < 0) throw ValidationError("atom: nuclear spin I must be >= 0");
  if (levels.empty()) throw ValidationError("atom: no levels defined");

  std::set<std::string> labels;
  double lowest = levels.front().energy_MHz;
  for (const auto& l : levels) {
    if (l.label.empty()) throw ValidationError("level: empty label");
    if (!labels.insert(l.label).second)
      throw ValidationError("level '" + l.label + "': duplicate label");
    if (!triangle(l.L, l.S, l.J))
      throw ValidationError("level '" + l.label + "': J must satisfy |L-S| <= J <= L+S");
    if (l.hyperfine_B_MHz != 0.0 && (l.J.twice() <= 1 || nuclear_I.twice() <= 1))
      throw ValidationError("level '" + l.label +
                            "': quadrupole constant B must be 0 when J = 1/2 or I = 1/2");
    lowest = std::min(lowest, l.energy_MHz);
  }
  if (lowest != 0.0) throw ValidationError("atom: the ground level must have energy 0");

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& d : dipoles) {
    const auto* up = find_level(d.upper);
    const auto* lo = find_level(d.lower);
    if (!up) throw UnknownLabelError("dipole: unknown upper level '" + d.upper + "'");
    if (!lo) throw UnknownLabelError("dipole: unknown lower level '" + d.lower + "'");
    if (!(up->energy_MHz > lo->energy_MHz))
      throw ValidationError("dipole " + d.upper + " -> " + d.lower +
                            ": upper level must lie above lower level");
    const int dj = std::abs(up->J.twice() - lo->J.twice());
    if (dj > 2 || (up->J.twice() == 0 && lo->J.twice() == 0))
      throw ValidationError("dipole " + d.upper + " -> " + d.lower +
                            ": E1 requires |dJ| <= 1 and not J=0 -> 0");
    if (!(d.reduced_me_au > 0.0))
      throw ValidationError("dipole " + d.upper + " -> " + d.lower + ": reduced_me_au must be > 0");
    auto key = std::minmax(d.upper, d.lower);
    if (!pairs.insert({key.first, key.second}).second)
      throw ValidationError("dipole " + d.upper + " -> " + d.lower + ": duplicate transition");
  }
}

std::string HyperfineState::str() const {
  return level + " F=" + F.str() + " mF=" + mF.str();
}

std::vector<HalfInt> allowed_F(const AtomSpec& atom, std::string_view level) {
  const auto& l = atom.level(level);
  std::vector<HalfInt> out;
  const int lo = std::abs(l.J.twice() - atom.nuclear_I.twice());
  for (int f2 = lo; f2 <= l.J.twice() + atom.nuclear_I.twice(); f2 += 2)
    out.push_back(HalfInt::from_twice(f2));
  return out;
}

std::vector<HyperfineState> hyperfine_basis(const AtomSpec& atom, std::string_view level) {
  std::vector<HyperfineState> basis;
  for (HalfInt F : allowed_F(atom, level))
    for (int m2 = -F.twice(); m2 <= F.twice(); m2 += 2)
      basis.push_back({std::string(level), F, HalfInt::from_twice(m2)});
  return basis;
}

std::size_t basis_index(const std::vector<HyperfineState>& basis, HalfInt F, HalfInt mF) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i].F == F && basis[i].mF == mF) return i;
  throw ValidationError("state F=" + F.str() + " mF=" + mF.str() + " not in basis");
}

double hyperfine_energy(const AtomSpec& atom, std::string_view level, HalfInt F) {
  const auto& l = atom.level(level);
  const HalfInt I = atom.nuclear_I;
  if (!triangle(l.J, I, F))
    throw ValidationError("F=" + F.str() + " is not allowed for level " + l.label);
  const double j = l.J.value(), i = I.value(), f = F.value();
  const double K = f * (f + 1) - i * (i + 1) - j * (j + 1);
  double e = 0.5 * l.hyperfine_A_MHz * K;
  if (l.hyperfine_B_MHz != 0.0 && I.twice() > 1 && l.J.twice() > 1) {
    e += l.hyperfine_B_MHz * (1.5 * K * (K + 1) - 2.0 * i * (i + 1) * j * (j + 1)) /
         (4.0 * i * (2 * i - 1) * j * (2 * j - 1));
  }
  return e;
}

Eigen::MatrixXd hyperfine_hamiltonian(const AtomSpec& atom, std::string_view level) {
  const auto basis = hyperfine_basis(atom, level);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) H(i, i) = hyperfine_energy(atom, level, basis[i].F);
  return H;
}

namespace {

// <F m| (a J_z + b I_z) |F' m> through the uncoupled |mJ mI> basis.
Eigen::MatrixXd angular_z_operator(const AtomSpec& atom, std::string_view level, double jz_weight,
                                   double iz_weight) {
  const auto& l = atom.level(level);
  const HalfInt I = atom.nuclear_I;
  const auto basis = hyperfine_basis(atom, level);
  const auto n = basis.size();
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (basis[a].mF != basis[b].mF) continue;
      const HalfInt m = basis[a].mF;
      double s = 0.0;
      for (int mj2 = -l.J.twice(); mj2 <= l.J.twice(); mj2 += 2) {
        const HalfInt mJ = HalfInt::from_twice(mj2);
        const HalfInt mI = m - mJ;
        if (!valid_projection(I, mI)) continue;
        const double ca = clebsch(l.J, mJ, I, mI, basis[a].F, m);
        const double cb = clebsch(l.J, mJ, I, mI, basis[b].F, m);
        s += ca * cb * (jz_weight * mJ.value() + iz_weight * mI.value());
      }
      Z(a, b) = s;
    }
  }
  return Z;
}

}  // namespace

Eigen::MatrixXd zeeman_operator(const AtomSpec& atom, std::string_view level) {
  const auto& l = atom.level(level);
  return constants::mu_B_MHz_per_G * angular_z_operator(atom, level, l.gJ, atom.gI);
}

Eigen::MatrixXd jz_operator(const AtomSpec& atom, std::string_view level) {
  return angular_z_operator(atom, level, 1.0, 0.0);
}

namespace {

struct BlockSolution {
  std::vector<std::size_t> indices;  // basis indices of this mF block
  Eigen::VectorXd energies;          // ascending
  Eigen::MatrixXd vectors;           // columns, block coordinates
};

std::vector<BlockSolution> solve_blocks(const std::vector<HyperfineState>& basis,
                                        const Eigen::MatrixXd& H) {
  std::vector<HalfInt> ms;
  for (const auto& s : basis)
    if (std::find(ms.begin(), ms.end(), s.mF) == ms.end()) ms.push_back(s.mF);
  std::sort(ms.begin(), ms.end());
  std::vector<BlockSolution> out;
  for (HalfInt m : ms) {
    BlockSolution blk;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i].mF == m) blk.indices.push_back(i);
    const auto k = static_cast<Eigen::Index>(blk.indices.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = H(blk.indices[r], blk.indices[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    blk.energies = es.eigenvalues();
    blk.vectors = es.eigenvectors();
    out.push_back(std::move(blk));
  }
  return out;
}

}  // namespace

std::vector<DressedState> dressed_states(const AtomSpec& atom, std::string_view level, double B_G) {
  if (!(B_G >= 0.0)) throw ValidationError("dressed_states: B must be >= 0");
  const auto basis = hyperfine_basis(atom, level);
  const Eigen::MatrixXd H0 = hyperfine_hamiltonian(atom, level);
  const Eigen::MatrixXd Z = zeeman_operator(atom, level);

  // Zero-field labels of each block, in ascending hyperfine energy.
  auto blocks0 = solve_blocks(basis, H0);
  std::vector<std::vector<std::size_t>> labels;  // per block: basis index per eigen rank
  for (const auto& blk : blocks0) {
    std::vector<std::size_t> idx = blk.indices;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return H0(a, a) < H0(b, b); });
    labels.push_back(idx);
  }

  // Continuity check along the sweep 0 -> B: consecutive eigenvectors of equal
  // rank must overlap by more than 0.5.
  const int steps = std::clamp(static_cast<int>(std::ceil(B_G / 2.0)), 1, 64);
  std::vector<Eigen::MatrixXd> previous;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    const auto k = static_cast<Eigen::Index>(labels[b].size());
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto pos = std::find(blocks0[b].indices.begin(), blocks0[b].indices.end(), labels[b][r]) -
                       blocks0[b].indices.begin();
      v(pos, r) = 1.0;
    }
    previous.push_back(v);
  }
  std::vector<BlockSolution> blocks;
  for (int s = 1; s <= steps; ++s) {
    const double field = B_G * s / steps;
    blocks = solve_blocks(basis, H0 + field * Z);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const double overlap_floor = 0.5;
      for (Eigen::Index r = 0; r < blocks[b].vectors.cols(); ++r) {
        const double ov = std::abs(previous[b].col(r).dot(blocks[b].vectors.col(r)));
        if (ov * ov <= overlap_floor && B_G > 0.0)
          throw TrackingError("ambiguous adiabatic labeling in level " + std::string(level) +
                              " near B = " + std::to_string(field) + " G");
      }
      previous[b] = blocks[b].vectors;
    }
  }
  if (B_G == 0.0) blocks = solve_blocks(basis, H0);

  std::vector<DressedState> out(basis.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    for (Eigen::Index r = 0; r < blk.vectors.cols(); ++r) {
      const std::size_t label_idx = labels[b][r];
      Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(basis.size());
      for (Eigen::Index i = 0; i < blk.vectors.rows(); ++i) amp(blk.indices[i]) = blk.vectors(i, r);
      if (B_G == 0.0) {
        amp.setZero();
        amp(label_idx) = 1.0;
      } else if (amp(label_idx).real() < 0.0) {
        amp = -amp;
      }
      DressedState ds;
      ds.level = std::string(level);
      ds.B_G = B_G;
      ds.energy_MHz = B_G == 0.0 ? H0(label_idx, label_idx) : blk.energies(r);
      ds.amplitudes = amp;
      ds.adiabatic_label = basis[label_idx];
      out[label_idx] = std::move(ds);
    }
  }
  return out;
}

DressedState dressed_state(const AtomSpec& atom, const HyperfineState& label, double B_G) {
  const auto basis = hyperfine_basis(atom, label.level);
  const auto idx = basis_index(basis, label.F, label.mF);
  return dressed_states(atom, label.level, B_G)[idx];
}

std::optional<double> reduced_dipole(const AtomSpec& atom, std::string_view a, std::string_view b) {
  for (const auto& d : atom.dipoles)
    if ((d.upper == a && d.lower == b) || (d.upper == b && d.lower == a)) return d.reduced_me_au;
  return std::nullopt;
}

namespace {

const TransitionDipole& find_transition(const AtomSpec& atom, std::string_view upper,
                                        std::string_view lower) {
  for (const auto& d : atom.dipoles)
    if (d.upper == upper && d.lower == lower) return d;
  throw ValidationError("no dipole transition " + std::string(upper) + " -> " + std::string(lower));
}

}  // namespace

double reduced_dipole_F(const AtomSpec& atom, std::string_view upper, HalfInt F_upper,
                        std::string_view lower, HalfInt F_lower) {
  const auto& d = find_transition(atom, upper, lower);
  const auto& lu = atom.level(upper);
  const auto& ll = atom.level(lower);
  const HalfInt I = atom.nuclear_I;
  // <J_u I F_u||d||J_l I F_l> = (-1)^{J_u+I+F_l+1} sqrt((2F_u+1)(2F_l+1)) {J_u F_u I; F_l J_l 1} <J_u||d||J_l>
  const double six = wigner6j(lu.J, F_upper, I, F_lower, ll.J, HalfInt(1));
  if (six == 0.0) return 0.0;
  return parity_sign(lu.J + I + F_lower + HalfInt(1)) *
         std::sqrt(static_cast<double>(F_upper.dimension() * F_lower.dimension())) * six *
         d.reduced_me_au;
}

double dipole_element(const AtomSpec& atom, const HyperfineState& upper,
                      const HyperfineState& lower, int q) {
  if (q < -1 || q > 1) throw ValidationError("dipole_element: q must be -1, 0 or +1");
  find_transition(atom, upper.level, lower.level);
  if (upper.mF != lower.mF + HalfInt(q)) return 0.0;
  const double red = reduced_dipole_F(atom, upper.level, upper.F, lower.level, lower.F);
  if (red == 0.0) return 0.0;
  // Wigner-Eckart: (-1)^{F_u - m_u} (F_u 1 F_l; -m_u q m_l) <F_u||d||F_l>
  return parity_sign(upper.F - upper.mF) *
         wigner3j(upper.F, HalfInt(1), lower.F, -upper.mF, HalfInt(q), lower.mF) * red;
}

std::array<Eigen::MatrixXcd, 3> dipole_matrices(const AtomSpec& atom, std::string_view bra,
                                                std::string_view ket) {
  const bool bra_is_upper = [&] {
    for (const auto& d : atom.dipoles) {
      if (d.upper == bra && d.lower == ket) return true;
      if (d.upper == ket && d.lower == bra) return false;
    }
    throw ValidationError("no dipole transition between " + std::string(bra) + " and " +
                          std::string(ket));
  }();
  if (!bra_is_upper) {
    auto m = dipole_matrices(atom, ket, bra);
    for (auto& c : m) c = c.adjoint().eval();
    return m;
  }
  const auto bu = hyperfine_basis(atom, bra);
  const auto bl = hyperfine_basis(atom, ket);
  std::array<Eigen::MatrixXd, 3> sph;  // q = -1, 0, +1
  for (int q = -1; q <= 1; ++q) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(bu.size(), bl.size());
    for (std::size_t i = 0; i < bu.size(); ++i)
      for (std::size_t j = 0; j < bl.size(); ++j) D(i, j) = dipole_element(atom, bu[i], bl[j], q);
    sph[q + 1] = D;
  }
  const std::complex<double> I(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Eigen::MatrixXcd, 3> cart;
  cart[0] = (r * (sph[0] - sph[2])).cast<std::complex<double>>();
  cart[1] = (I * r) * (sph[0] + sph[2]).cast<std::complex<double>>();
  cart[2] = sph[1].cast<std::complex<double>>();
  return cart;
}

std::vector<std::string> dipole_partners(const AtomSpec& atom, std::string_view level) {
  std::vector<std::string> out;
  for (const auto& d : atom.dipoles) {
    if (d.lower == level) out.push_back(d.upper);
    if (d.upper == level) out.push_back(d.lower);
  }
  return out;
}

}  // namespace magicpol
