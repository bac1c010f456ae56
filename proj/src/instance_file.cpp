#include "fpcore/instance_file.hpp"

#include <sstream>

namespace fpcore {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& s, int line) {
  std::vector<int> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    try {
      out.push_back(std::stoi(trim(cur)));
    } catch (...) {
      throw error("line " + std::to_string(line) + ": bad integer '" +
                  trim(cur) + "'");
    }
  }
  return out;
}

}  // namespace

InstanceData parse_instance_file(const std::string& text) {
  InstanceData d;
  std::istringstream is(text);
  std::string line, section;
  int ln = 0;
  bool seen_setting = false;
  while (std::getline(is, line)) {
    ++ln;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw error("line " + std::to_string(ln) + ": unterminated section");
      section = t.substr(1, t.size() - 2);
      if (section != "group" && section != "subgroup.H" &&
          section != "subgroup.K" && section != "budgets" &&
          section != "seed")
        throw error("line " + std::to_string(ln) + ": unknown section [" +
                    section + "]");
      if (section == "subgroup.H") d.has_h = true;
      if (section == "subgroup.K") d.has_k = true;
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw error("line " + std::to_string(ln) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (section == "group") {
      if (key == "setting") {
        if (val != "plain" && val != "amalgamated")
          throw error("line " + std::to_string(ln) + ": setting must be " +
                      "plain or amalgamated");
        d.setting = val;
        seen_setting = true;
      } else if (key == "factor") {
        d.factor_desc.push_back(val);
      } else if (key == "free_rank") {
        d.free_rank = std::stoi(val);
      } else if (key == "amalgam") {
        d.amalgam_desc = val;
      } else if (key == "embed") {
        d.embeds.push_back(parse_int_list(val, ln));
      } else if (key.rfind("table.", 0) == 0) {
        std::string name = key.substr(6);
        std::vector<std::vector<int>> rows;
        std::string row;
        std::istringstream rs(val);
        while (std::getline(rs, row, '/'))
          rows.push_back(parse_int_list(row, ln));
        d.tables[name] = std::move(rows);
      } else {
        throw error("line " + std::to_string(ln) + ": unknown key '" + key +
                    "' in [group]");
      }
    } else if (section == "subgroup.H" || section == "subgroup.K") {
      if (key != "gen")
        throw error("line " + std::to_string(ln) + ": unknown key '" + key +
                    "' in [" + section + "]");
      (section == "subgroup.H" ? d.gens_h : d.gens_k).push_back(val);
    } else if (section == "budgets") {
      if (key == "L")
        d.budget_l = std::stoi(val);
      else if (key == "R")
        d.budget_r = std::stoi(val);
      else
        throw error("line " + std::to_string(ln) + ": unknown key '" + key +
                    "' in [budgets]");
    } else if (section == "seed") {
      if (key != "seed")
        throw error("line " + std::to_string(ln) + ": unknown key '" + key +
                    "' in [seed]");
      d.seed = std::stoull(val);
    } else {
      throw error("line " + std::to_string(ln) + ": key outside any section");
    }
  }
  if (!seen_setting) throw error("missing setting = ... in [group]");
  return d;
}

namespace {

FiniteGroup group_from_desc(const InstanceData& d, const std::string& desc) {
  if (desc.rfind("table:", 0) == 0) {
    std::string name = desc.substr(6);
    auto it = d.tables.find(name);
    if (it == d.tables.end())
      throw error("instance: table '" + name + "' not defined");
    return FiniteGroup::from_table(name, it->second);
  }
  return make_group(desc);
}

}  // namespace

AmbientSpec InstanceData::to_spec() const {
  std::vector<FiniteGroup> factors;
  for (auto& f : factor_desc) factors.push_back(group_from_desc(*this, f));
  if (setting == "plain") {
    if (!amalgam_desc.empty() || !embeds.empty())
      throw error("instance: plain setting with amalgam data");
    return plain_spec(std::move(factors), free_rank);
  }
  if (amalgam_desc.empty()) throw error("instance: missing amalgam");
  FiniteGroup a = group_from_desc(*this, amalgam_desc);
  if (embeds.size() != factor_desc.size())
    throw error("instance: need one embed line per factor");
  std::vector<EmbeddingMap> maps;
  for (auto& im : embeds) maps.push_back(EmbeddingMap{im});
  return amalgamated_spec(std::move(factors), std::move(a), std::move(maps),
                          free_rank);
}

std::vector<NormalForm> InstanceData::words_h(const AmbientSpec& spec) const {
  std::vector<NormalForm> out;
  for (auto& g : gens_h) {
    NormalForm w = parse_word(spec, g);
    if (!w.is_identity()) out.push_back(w);
  }
  return out;
}

std::vector<NormalForm> InstanceData::words_k(const AmbientSpec& spec) const {
  std::vector<NormalForm> out;
  for (auto& g : gens_k) {
    NormalForm w = parse_word(spec, g);
    if (!w.is_identity()) out.push_back(w);
  }
  return out;
}

std::string format_instance_file(const InstanceData& d) {
  std::ostringstream os;
  os << "[group]\n";
  os << "setting = " << d.setting << "\n";
  for (auto& f : d.factor_desc) os << "factor = " << f << "\n";
  for (auto& [name, rows] : d.tables) {
    os << "table." << name << " = ";
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r) os << " / ";
      for (size_t c = 0; c < rows[r].size(); ++c) {
        if (c) os << ",";
        os << rows[r][c];
      }
    }
    os << "\n";
  }
  os << "free_rank = " << d.free_rank << "\n";
  if (!d.amalgam_desc.empty()) {
    os << "amalgam = " << d.amalgam_desc << "\n";
    for (auto& e : d.embeds) {
      os << "embed = ";
      for (size_t i = 0; i < e.size(); ++i) {
        if (i) os << ",";
        os << e[i];
      }
      os << "\n";
    }
  }
  if (d.has_h || !d.gens_h.empty()) {
    os << "\n[subgroup.H]\n";
    for (auto& g : d.gens_h) os << "gen = " << g << "\n";
  }
  if (d.has_k || !d.gens_k.empty()) {
    os << "\n[subgroup.K]\n";
    for (auto& g : d.gens_k) os << "gen = " << g << "\n";
  }
  os << "\n[budgets]\nL = " << d.budget_l << "\nR = " << d.budget_r << "\n";
  os << "\n[seed]\nseed = " << d.seed << "\n";
  return os.str();
}

}  // namespace fpcore
