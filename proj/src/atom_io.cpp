#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "magicpol/atom.hpp"
#include "magicpol/errors.hpp"

namespace magicpol {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Block {
  std::string section;
  int line = 0;
  std::map<std::string, std::pair<std::string, int>> values;  // key -> (value, line)
};

class BlockReader {
 public:
  BlockReader(const Block& b, const std::string& source) : block_(b), source_(source) {}

  bool has(const std::string& key) const { return block_.values.count(key) != 0; }

  std::string text(const std::string& key) const {
    auto it = block_.values.find(key);
    if (it == block_.values.end())
      throw ParseError(source_, block_.line, "[" + block_.section + "] missing key '" + key + "'");
    return it->second.first;
  }

  std::string text_or(const std::string& key, std::string fallback) const {
    return has(key) ? text(key) : std::move(fallback);
  }

  double number(const std::string& key) const {
    const auto& [v, line] = block_.values.at(require(key));
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ParseError(source_, line, "key '" + key + "': expected a number, got '" + v + "'");
    }
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  HalfInt half_int(const std::string& key) const {
    const auto& [v, line] = block_.values.at(require(key));
    try {
      return HalfInt::parse(v);
    } catch (const ValidationError&) {
      throw ParseError(source_, line, "key '" + key + "': expected an integer or half-integer, got '" + v + "'");
    }
  }

 private:
  const std::string& require(const std::string& key) const {
    if (!has(key))
      throw ParseError(source_, block_.line, "[" + block_.section + "] missing key '" + key + "'");
    return key;
  }
  const Block& block_;
  const std::string& source_;
};

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"atom", {"name", "I", "gI", "note"}},
      {"level", {"label", "L", "S", "J", "energy_MHz", "gJ", "A_MHz", "B_MHz", "note"}},
      {"dipole", {"upper", "lower", "reduced_me_au", "source"}},
  };
  return keys;
}

}  // namespace

AtomSpec parse_atom(std::istream& in, const std::string& source) {
  std::vector<Block> blocks;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(source, lineno, "unterminated section header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (!allowed_keys().count(name)) throw ParseError(source, lineno, "unknown section [" + name + "]");
      blocks.push_back({name, lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, lineno, "expected 'key = value'");
    if (blocks.empty()) throw ParseError(source, lineno, "key outside of any section");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    auto& blk = blocks.back();
    const auto& keys = allowed_keys().at(blk.section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ParseError(source, lineno, "unknown key '" + key + "' in [" + blk.section + "]");
    if (value.empty()) throw ParseError(source, lineno, "empty value for '" + key + "'");
    if (!blk.values.emplace(key, std::make_pair(value, lineno)).second)
      throw ParseError(source, lineno, "duplicate key '" + key + "'");
  }

  AtomSpec atom;
  int atom_blocks = 0;
  for (const auto& blk : blocks) {
    BlockReader r(blk, source);
    if (blk.section == "atom") {
      if (++atom_blocks > 1) throw ParseError(source, blk.line, "more than one [atom] section");
      atom.name = r.text("name");
      atom.nuclear_I = r.half_int("I");
      atom.gI = r.number_or("gI", 0.0);
      atom.note = r.text_or("note", "");
    } else if (blk.section == "level") {
      FineLevel l;
      l.label = r.text("label");
      l.L = r.half_int("L");
      l.S = r.half_int("S");
      l.J = r.half_int("J");
      l.energy_MHz = r.number("energy_MHz");
      l.gJ = r.number("gJ");
      l.hyperfine_A_MHz = r.number("A_MHz");
      l.hyperfine_B_MHz = r.number_or("B_MHz", 0.0);
      l.note = r.text_or("note", "");
      atom.levels.push_back(std::move(l));
    } else {
      TransitionDipole d;
      d.upper = r.text("upper");
      d.lower = r.text("lower");
      d.reduced_me_au = r.number("reduced_me_au");
      d.source = r.text_or("source", "");
      atom.dipoles.push_back(std::move(d));
    }
  }
  if (atom_blocks == 0) throw ParseError(source, lineno, "missing [atom] section");
  atom.validate();
  return atom;
}

AtomSpec load_atom(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open atom file " + path.string());
  return parse_atom(in, path.string());
}

std::filesystem::path find_atom_file(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(name)) return name;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("MAGICPOL_DATA_PATH")) {
    std::stringstream ss(env);
    std::string dir;
    while (std::getline(ss, dir, ':'))
      if (!dir.empty()) dirs.emplace_back(dir);
  }
#ifdef MAGICPOL_DATA_DIR
  dirs.emplace_back(MAGICPOL_DATA_DIR);
#endif
  for (const auto& d : dirs) {
    for (const auto& candidate : {d / name, d / (name + ".atom")})
      if (fs::is_regular_file(candidate)) return candidate;
  }
  throw ValidationError("atom file '" + name + "' not found (searched MAGICPOL_DATA_PATH and " +
                        "the bundled data directory)");
}

}  // namespace magicpol
