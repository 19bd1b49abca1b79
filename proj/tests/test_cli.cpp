#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "magicpol/atom.hpp"
#include "magicpol/table.hpp"

namespace fs = std::filesystem;
using namespace magicpol;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "magicpol");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Table parse(const std::string& csv) {
  std::istringstream in(csv);
  return read_csv(in);
}

// Output with the command-line comment removed.
std::string without_command(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, kept;
  while (std::getline(in, line))
    if (line.rfind("# command:", 0) != 0) kept += line + '\n';
  return kept;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "magicpol_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("header names the version, command, atom hash and seed") {
  const auto r = run({"--seed", "17", "divergence", "--w", "10.8e-3", "--w0", "0", "--f", "0.4"});
  REQUIRE(r.code == 0);
  const auto t = parse(r.out);
  REQUIRE(t.comments.size() >= 4);
  CHECK(t.comments[0].rfind("magicpol ", 0) == 0);
  CHECK(t.comments[1] == "command: magicpol --seed 17 divergence --w 10.8e-3 --w0 0 --f 0.4");
  std::ifstream f(find_atom_file("ba133"), std::ios::binary);
  std::stringstream bytes;
  bytes << f.rdbuf();
  CHECK(t.comments[2] == "atom: ba133.atom fnv1a=" + fnv1a_hex(bytes.str()));
  CHECK(t.comments[3] == "seed: 17");
  CHECK(t.column("theta_mrad")(0) == doctest::Approx(13.5).epsilon(1e-3));
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"magic-scan", "--B="}).code == 2);
  CHECK(run({"polarizability"}).code == 2);
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--atom", "nonexistent", "divergence", "--w", "1", "--w0", "0", "--f", "1"}).code == 2);
  const auto dom = run({"divergence", "--w", "1e-3", "--w0", "2e-3", "--f", "0.4"});
  CHECK(dom.code == 3);
  CHECK(dom.err.rfind("error: ", 0) == 0);
  // S1/2 F=1 <-> P1/2 F=1 line.
  const auto res = run({"polarizability", "--F", "1", "--wavelength", "493.5437456"});
  CHECK(res.code == 3);
  CHECK(res.err.find("6p_P1/2 F=1") != std::string::npos);

  const auto bad = scratch("ragged.csv");
  std::ofstream(bad) << "wait_s,p0,stderr\n0,0\n";
  CHECK(run({"fit-fringe", "--in", bad.string()}).code == 2);
}

TEST_CASE("polarizability rows for every F, including F=0") {
  const auto r = run({"polarizability", "--wavelength", "532"});
  REQUIRE(r.code == 0);
  const auto t = parse(r.out);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "0");
  CHECK(t.rows[1][0] == "1");
  CHECK(t.column("vector_au")(0) == 0.0);
  CHECK(t.column("vector_au")(1) != 0.0);
  const auto s = run({"polarizability", "--wavelength", "inf", "--F", "0"});
  REQUIRE(s.code == 0);
  CHECK(parse(s.out).rows.at(0).at(1) == "inf");
}

TEST_CASE("ramsey output fits back to the shifted frequency") {
  const auto fringe = scratch("fringe.csv");
  REQUIRE(run({"--seed", "5", "--out", fringe.string(), "ramsey", "--light-shift", "-283.1"}).code == 0);
  const auto r = run({"fit-fringe", "--in", fringe.string()});
  REQUIRE(r.code == 0);
  const auto t = parse(r.out);
  const double f = t.column("f_ramsey_Hz")(0), sf = t.column("sigma_f_Hz")(0);
  CHECK(sf > 0.0);
  CHECK(std::abs(f - 157.3) < 3 * sf);
  CHECK(t.column("converged")(0) == 1.0);
}

TEST_CASE("reruns are byte identical and thread independent") {
  const std::vector<std::string> cmd = {"ramsey", "--sigma-rel", "0.05", "--wait-max", "0.01"};
  auto with = [&](std::vector<std::string> pre) {
    pre.insert(pre.end(), cmd.begin(), cmd.end());
    return run(pre);
  };
  const auto a = with({"--seed", "3"}), b = with({"--seed", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto t1 = with({"--seed", "3", "--threads", "1"}), t5 = with({"--seed", "3", "--threads", "5"});
  CHECK(without_command(t1.out) == without_command(t5.out));
  CHECK(without_command(t1.out) == without_command(a.out));
  CHECK(without_command(with({"--seed", "4"}).out) != without_command(a.out));

  const auto s1 = run({"--threads", "1", "sequence", "--shots", "3000"});
  const auto s6 = run({"--threads", "6", "sequence", "--shots", "3000"});
  REQUIRE(s1.code == 0);
  CHECK(without_command(s1.out) == without_command(s6.out));
}

TEST_CASE("atom files are found through MAGICPOL_DATA_PATH") {
  const auto dir = scratch("atoms");
  fs::create_directories(dir);
  fs::copy_file(find_atom_file("ba133"), dir / "custom.atom", fs::copy_options::overwrite_existing);
  const std::string path = "/nonexistent:" + dir.string();
  ::setenv("MAGICPOL_DATA_PATH", path.c_str(), 1);
  const auto r = run({"--atom", "custom", "polarizability", "--wavelength", "532", "--F", "1"});
  ::unsetenv("MAGICPOL_DATA_PATH");
  REQUIRE(r.code == 0);
  CHECK(parse(r.out).comments.at(2).rfind("atom: custom.atom fnv1a=", 0) == 0);
  CHECK(run({"--atom", "custom", "polarizability", "--wavelength", "532"}).code == 2);
}

TEST_CASE("sequence histograms and summary agree") {
  const auto hist = scratch("hist.csv");
  const auto r = run({"sequence", "--shots", "4000", "--histograms", hist.string()});
  REQUIRE(r.code == 0);
  const auto s = parse(r.out);
  std::ifstream in(hist);
  const auto h = read_csv(in);
  const auto occ = h.column("occurrences");
  double herald = 0.0, readout = 0.0;
  for (std::size_t i = 0; i < h.rows.size(); ++i) (h.rows[i][2] == "herald" ? herald : readout) += occ(i);
  CHECK(herald == 4000.0);
  CHECK(readout == 4000.0 - s.column("discarded")(0));
}

TEST_CASE("magic scan and critical field") {
  const auto r = run({"magic-scan", "--B", "5", "--A-steps", "5"});
  REQUIRE(r.code == 0);
  const auto t = parse(r.out);
  CHECK(t.rows.size() == 5);
  bool found = false;
  for (const auto& c : t.comments)
    if (c.rfind("zero_crossing B_G=5 A_magic=0.21", 0) == 0) found = true;
  CHECK(found);
  const auto none = run({"magic-scan", "--B", "0.5", "--A", "0"});
  CHECK(none.out.find("A_magic=none") != std::string::npos);

  const auto bc = run({"critical-field", "--wavelength", "532"});
  REQUIRE(bc.code == 0);
  const auto b = parse(bc.out);
  CHECK(b.rows.at(0).at(2) == "dressed_numeric");
  CHECK(b.column("Bc_G")(0) == doctest::Approx(1.0596).epsilon(1e-3));
}
