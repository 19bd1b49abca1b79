#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <sstream>

#include "magicpol/angular.hpp"
#include "magicpol/atom.hpp"
#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"
#include "support.hpp"

using namespace magicpol;
using magicpol::test::ba133;
using magicpol::test::h;

namespace {

const char* kMinimal = R"([atom]
name = Toy
I = 1/2
gI = 0

[level]
label = g
L = 0
S = 1/2
J = 1/2
energy_MHz = 0
gJ = 2
A_MHz = 1000

[level]
label = e
L = 1
S = 1/2
J = 3/2
energy_MHz = 5e8
gJ = 1.3333
A_MHz = 10

[dipole]
upper = e
lower = g
reduced_me_au = 2.0
)";

AtomSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_atom(in, "toy");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

int parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

// Independent uncoupled-basis Hamiltonian for J = I = 1/2:
// A I.J + mu_B B (gJ Jz + gI Iz) with basis |mJ mI> = ++, +-, -+, --.
Eigen::Vector4d brute_force_s_half(double A, double gJ, double gI, double B) {
  const double muB = constants::mu_B_MHz_per_G * B;
  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  const double mJ[4] = {0.5, 0.5, -0.5, -0.5}, mI[4] = {0.5, -0.5, 0.5, -0.5};
  for (int i = 0; i < 4; ++i) H(i, i) = A * mJ[i] * mI[i] + muB * (gJ * mJ[i] + gI * mI[i]);
  // (A/2)(J+ I- + J- I+) couples |+-> and |-+> with <-+|J- I+|+-> = 1
  H(1, 2) = H(2, 1) = 0.5 * A;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(H);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("bundled dataset loads") {
  const auto& a = ba133();
  CHECK(a.nuclear_I == HalfInt(1, 2));
  CHECK(a.levels.size() == 5);
  for (const char* l : {"6s_S1/2", "6p_P1/2", "6p_P3/2", "5d_D3/2", "5d_D5/2"}) CHECK(a.find_level(l) != nullptr);
  CHECK(a.level("5d_D5/2").hyperfine_A_MHz == 29.7565);
  CHECK(a.level("6s_S1/2").energy_MHz == 0.0);
  CHECK_THROWS_AS(a.level("7s"), UnknownLabelError);
  for (const auto& d : a.dipoles) CHECK_FALSE(d.source.empty());
}

TEST_CASE("atom file validation") {
  CHECK_NOTHROW(parse(kMinimal));
  CHECK_THROWS_AS(parse(replace(kMinimal, "lower = g", "lower = x")), UnknownLabelError);
  // quadrupole on J = 1/2
  CHECK_THROWS_AS(parse(replace(kMinimal, "A_MHz = 1000", "A_MHz = 1000\nB_MHz = 3")), ValidationError);
  CHECK_THROWS_AS(parse(replace(kMinimal, "J = 3/2", "J = 5/2")), ValidationError);
  CHECK_THROWS_AS(parse(replace(kMinimal, "label = e", "label = g")), ValidationError);
  CHECK_THROWS_AS(parse(replace(kMinimal, "reduced_me_au = 2.0", "reduced_me_au = -2.0")), ValidationError);
  CHECK_THROWS_AS(parse(replace(kMinimal, "energy_MHz = 0", "energy_MHz = 10")), ValidationError);
  // lower above upper
  CHECK_THROWS_AS(parse(replace(replace(kMinimal, "upper = e", "upper = g"), "lower = g", "lower = e")),
                  ValidationError);
}

TEST_CASE("parser reports line numbers") {
  CHECK(parse_error_line(replace(kMinimal, "gI = 0", "gI = 0\ncolour = red")) == 5);
  CHECK(parse_error_line(replace(kMinimal, "gJ = 2\n", "gJ = two\n")) == 12);
  CHECK(parse_error_line(replace(kMinimal, "[dipole]", "[transition]")) == 24);
  CHECK(parse_error_line(replace(kMinimal, "gI = 0", "gI = 0\ngI = 1")) == 5);
  CHECK(parse_error_line(replace(kMinimal, "I = 1/2", "I = 1/3")) == 3);
  CHECK(parse_error_line(std::string("name = x\n") + kMinimal) == 1);
  CHECK(parse_error_line(replace(kMinimal, "J = 3/2\n", "")) == 15);
  CHECK(parse_error_line("# empty\n") == 1);
}

TEST_CASE("hyperfine energies") {
  auto a = ba133();
  const double As = a.level("6s_S1/2").hyperfine_A_MHz;
  CHECK(hyperfine_energy(a, "6s_S1/2", HalfInt(1)) == doctest::Approx(As / 4).epsilon(1e-15));
  CHECK(hyperfine_energy(a, "6s_S1/2", HalfInt(0)) == doctest::Approx(-3 * As / 4).epsilon(1e-15));
  CHECK(hyperfine_energy(a, "6s_S1/2", HalfInt(1)) - hyperfine_energy(a, "6s_S1/2", HalfInt(0)) ==
        doctest::Approx(As).epsilon(1e-15));
  const double d52 = hyperfine_energy(a, "5d_D5/2", HalfInt(3)) - hyperfine_energy(a, "5d_D5/2", HalfInt(2));
  CHECK(std::abs(d52 - 89.2695) < 1e-9);
  CHECK_THROWS_AS(hyperfine_energy(a, "5d_D5/2", HalfInt(4)), ValidationError);
  for (auto& l : a.levels)
    if (l.label == "5d_D5/2") l.hyperfine_A_MHz = 0.0;
  CHECK(hyperfine_energy(a, "5d_D5/2", HalfInt(2)) == 0.0);
  CHECK(hyperfine_energy(a, "5d_D5/2", HalfInt(3)) == 0.0);
}

TEST_CASE("quadrupole interval") {
  // I = 3/2, J = 3/2: E(F) = A K/2 + B(3K(K+1)/2 - 2I(I+1)J(J+1)) / (4I(2I-1)J(2J-1))
  auto a = parse(replace(replace(kMinimal, "I = 1/2", "I = 3/2"), "A_MHz = 10\n", "A_MHz = 10\nB_MHz = 4\n"));
  for (int F = 0; F <= 3; ++F) {
    const double K = F * (F + 1) - 2 * 3.75;
    const double expect = 5 * K + 4 * (1.5 * K * (K + 1) - 2 * 3.75 * 3.75) / (4 * 1.5 * 2 * 1.5 * 2);
    CHECK(hyperfine_energy(a, "e", HalfInt(F)) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("basis ordering") {
  const auto b = hyperfine_basis(ba133(), "5d_D5/2");
  REQUIRE(b.size() == 12);
  CHECK(b.front().F == HalfInt(2));
  CHECK(b.front().mF == HalfInt(-2));
  CHECK(b.back().F == HalfInt(3));
  CHECK(b.back().mF == HalfInt(3));
  CHECK(basis_index(b, HalfInt(3), HalfInt(0)) == 8);
  CHECK_THROWS(basis_index(b, HalfInt(4), HalfInt(0)));
}

TEST_CASE("zero field dressed states are the hyperfine basis") {
  for (const auto& l : ba133().levels) {
    const auto ds = dressed_states(ba133(), l.label, 0.0);
    const auto basis = hyperfine_basis(ba133(), l.label);
    REQUIRE(ds.size() == basis.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(ds[i].adiabatic_label == basis[i]);
      CHECK(ds[i].energy_MHz == doctest::Approx(hyperfine_energy(ba133(), l.label, basis[i].F)).epsilon(1e-14));
      CHECK(std::abs(ds[i].amplitudes(i) - 1.0) < 1e-14);
      CHECK(std::abs(ds[i].amplitudes.norm() - 1.0) < 1e-14);
    }
  }
  CHECK_THROWS_AS(dressed_states(ba133(), "6s_S1/2", -1.0), ValidationError);
  CHECK_THROWS_AS(dressed_states(ba133(), "nope", 1.0), UnknownLabelError);
}

TEST_CASE("ground-state clock splitting against brute-force diagonalization") {
  const auto& lv = ba133().level("6s_S1/2");
  for (double B : {0.5, 5.0, 5.036, 50.0, 100.0}) {
    const auto ev = brute_force_s_half(lv.hyperfine_A_MHz, lv.gJ, ba133().gI, B);
    // mF = 0 states are the two eigenvectors living in the {|+->, |-+>} block;
    // the stretched ones have closed-form energies, remove those.
    const double muB = constants::mu_B_MHz_per_G * B;
    const double up = lv.hyperfine_A_MHz / 4 + 0.5 * muB * (lv.gJ + ba133().gI);
    const double dn = lv.hyperfine_A_MHz / 4 - 0.5 * muB * (lv.gJ + ba133().gI);
    std::vector<double> rest;
    for (int i = 0; i < 4; ++i)
      if (std::abs(ev(i) - up) > 1e-6 && std::abs(ev(i) - dn) > 1e-6) rest.push_back(ev(i));
    REQUIRE(rest.size() == 2);
    const double brute = std::abs(rest[1] - rest[0]);
    const auto ds = dressed_states(ba133(), "6s_S1/2", B);
    const auto b = hyperfine_basis(ba133(), "6s_S1/2");
    const double ours = ds[basis_index(b, HalfInt(0), HalfInt(0))].energy_MHz -
                        ds[basis_index(b, HalfInt(1), HalfInt(0))].energy_MHz;
    CHECK(std::abs(ours - brute) < 1e-8);
    // second-order estimate
    const double A = std::abs(lv.hyperfine_A_MHz);
    const double x = (lv.gJ - ba133().gI) * muB;
    CHECK(ours - A == doctest::Approx(x * x / (2 * A)).epsilon(B < 10 ? 1e-3 : 0.05));
  }
}

TEST_CASE("dressed-state invariants") {
  for (const auto& l : ba133().levels) {
    const Eigen::MatrixXd H0 = hyperfine_hamiltonian(ba133(), l.label);
    const Eigen::MatrixXd Z = zeeman_operator(ba133(), l.label);
    CHECK((Z - Z.transpose()).norm() == 0.0);
    const auto basis = hyperfine_basis(ba133(), l.label);
    for (double B : {0.1, 1.0, 7.3, 40.0, 100.0}) {
      const auto ds = dressed_states(ba133(), l.label, B);
      double sum = 0.0;
      for (const auto& d : ds) {
        sum += d.energy_MHz;
        CHECK(std::abs(d.amplitudes.norm() - 1.0) < 1e-12);
        for (std::size_t k = 0; k < basis.size(); ++k)
          if (basis[k].mF != d.adiabatic_label.mF) CHECK(d.amplitudes(k) == std::complex<double>(0.0));
      }
      CHECK(std::abs(sum - (H0 + B * Z).trace()) < 1e-9);
    }
  }
}

TEST_CASE("adiabatic labels form a bijection on 0..10 G") {
  for (const auto& l : ba133().levels) {
    const auto basis = hyperfine_basis(ba133(), l.label);
    for (int i = 0; i <= 200; ++i) {
      const double B = 0.05 * i;
      const auto ds = dressed_states(ba133(), l.label, B);
      std::set<std::pair<int, int>> seen;
      for (std::size_t k = 0; k < ds.size(); ++k) {
        CHECK(ds[k].adiabatic_label == basis[k]);
        seen.insert({ds[k].adiabatic_label.F.twice(), ds[k].adiabatic_label.mF.twice()});
      }
      CHECK(seen.size() == basis.size());
    }
  }
}

TEST_CASE("clock states have no linear Zeeman shift") {
  const double dB = 1e-2;
  for (const char* lvl : {"6s_S1/2", "5d_D3/2", "5d_D5/2"}) {
    for (HalfInt F : allowed_F(ba133(), lvl)) {
      if (!F.is_integer()) continue;
      const HyperfineState s{lvl, F, HalfInt(0)};
      auto E = [&](double B) { return dressed_state(ba133(), s, B).energy_MHz; };
      // Richardson removes the quadratic term
      const double slope = (4 * E(dB / 2) - E(dB) - 3 * E(0)) / dB;
      CHECK(std::abs(slope) < ba133().gI * constants::mu_B_MHz_per_G + 1e-9);
    }
  }
}

TEST_CASE("D5/2 clock splitting near 5 G") {
  const double s0 = 3 * 29.7565;
  const auto ds = dressed_states(ba133(), "5d_D5/2", 5.036);
  const auto b = hyperfine_basis(ba133(), "5d_D5/2");
  const double s = ds[basis_index(b, HalfInt(3), HalfInt(0))].energy_MHz -
                   ds[basis_index(b, HalfInt(2), HalfInt(0))].energy_MHz;
  CHECK(s - s0 == doctest::Approx(89.6697 - 89.2695).epsilon(0.15));
}

TEST_CASE("dipole selection rules and errors") {
  const HyperfineState u{"6p_P3/2", HalfInt(2), HalfInt(1)}, l{"6s_S1/2", HalfInt(1), HalfInt(1)};
  CHECK(dipole_element(ba133(), u, l, 1) == 0.0);
  CHECK(dipole_element(ba133(), u, l, -1) == 0.0);
  CHECK(dipole_element(ba133(), u, l, 0) != 0.0);
  CHECK_THROWS_AS(dipole_element(ba133(), u, l, 2), ValidationError);
  CHECK_THROWS_AS(dipole_element(ba133(), {"5d_D5/2", HalfInt(2), HalfInt(0)}, {"6s_S1/2", HalfInt(0), HalfInt(0)}, 0),
                  ValidationError);
  CHECK_THROWS(dipole_matrices(ba133(), "5d_D5/2", "6s_S1/2"));
}

TEST_CASE("dipole sum rule") {
  for (const auto& d : ba133().dipoles) {
    const double J_l = ba133().level(d.lower).J.value();
    const double expect = d.reduced_me_au * d.reduced_me_au / (2 * J_l + 1);
    for (const auto& lo : hyperfine_basis(ba133(), d.lower)) {
      double s = 0.0;
      for (const auto& up : hyperfine_basis(ba133(), d.upper))
        for (int q = -1; q <= 1; ++q) {
          const double e = dipole_element(ba133(), up, lo, q);
          s += e * e;
        }
      CHECK(std::abs(s - expect) < 1e-10 * expect);
    }
  }
}

TEST_CASE("stretched-state dipole") {
  for (const auto& d : ba133().dipoles) {
    const auto& lu = ba133().level(d.upper);
    const auto& ll = ba133().level(d.lower);
    if (lu.J.twice() != ll.J.twice() + 2) continue;
    const HalfInt I = ba133().nuclear_I;
    const HalfInt Fu = lu.J + I, Fl = ll.J + I;
    // product state |J m_J = J>|I m_I = I>, so only the J part acts
    const double expect = wigner3j(lu.J, HalfInt(1), ll.J, -lu.J, HalfInt(1), ll.J) * d.reduced_me_au;
    CHECK(dipole_element(ba133(), {d.upper, Fu, Fu}, {d.lower, Fl, Fl}, 1) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("Cartesian dipole matrices are consistent in both directions") {
  const auto up = dipole_matrices(ba133(), "6p_P3/2", "5d_D5/2");
  const auto dn = dipole_matrices(ba133(), "5d_D5/2", "6p_P3/2");
  for (int i = 0; i < 3; ++i) CHECK((up[i].adjoint() - dn[i]).norm() < 1e-15);
  // d_z is real and equals the q = 0 element
  const auto bu = hyperfine_basis(ba133(), "6p_P3/2"), bl = hyperfine_basis(ba133(), "5d_D5/2");
  for (std::size_t i = 0; i < bu.size(); ++i)
    for (std::size_t j = 0; j < bl.size(); ++j)
      CHECK(std::abs(up[2](i, j) - dipole_element(ba133(), bu[i], bl[j], 0)) < 1e-15);
  // sum over Cartesian components equals the spherical sum
  double cart = 0.0, sph = 0.0;
  for (int i = 0; i < 3; ++i) cart += up[i].squaredNorm();
  for (std::size_t i = 0; i < bu.size(); ++i)
    for (std::size_t j = 0; j < bl.size(); ++j)
      for (int q = -1; q <= 1; ++q) sph += std::pow(dipole_element(ba133(), bu[i], bl[j], q), 2);
  CHECK(cart == doctest::Approx(sph).epsilon(1e-13));
}

TEST_CASE("unit conversions round-trip") {
  const double au = 123.456;
  const double si = au * constants::au_polarizability_to_Hz_per_W_m2;
  CHECK(std::abs(si / constants::au_polarizability_to_Hz_per_W_m2 - au) < 1e-12 * au);
  CHECK(constants::mu_B_MHz_per_G == doctest::Approx(1.399624).epsilon(1e-6));
  // 1 au of polarizability is 4.68645e-8 Hz/(W/m^2)
  CHECK(constants::au_polarizability_to_Hz_per_W_m2 == doctest::Approx(4.68645e-6 * 1e-2).epsilon(1e-5));
  CHECK(constants::wavelength_to_MHz(532.0) == doctest::Approx(563519657.5).epsilon(1e-9));
}

TEST_CASE("atom file lookup") {
  CHECK(find_atom_file("ba133").filename() == "ba133.atom");
  CHECK(find_atom_file("ba133.atom").filename() == "ba133.atom");
  CHECK_THROWS_AS(find_atom_file("no_such_atom"), ValidationError);
}
