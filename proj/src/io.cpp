#include "frengate/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "frengate/errors.hpp"

namespace frengate {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void save_field_csv(const BiphotonField& field, const std::filesystem::path& csv_path) {
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("save_field_csv: cannot open " + csv_path.string());
  out << "omega,omega_prime,re,im\n";
  for (int j = 0; j < field.grid.n_omega; ++j)
    for (int i = 0; i < field.grid.n_omega_prime; ++i) {
      const std::complex<double> v = field.values(i, j);
      out << format_double(field.grid.omega(j)) << ','
          << format_double(field.grid.omega_prime(i)) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
}

namespace {
std::string polarization_name(Polarization p) { return p == Polarization::R ? "R" : "L"; }
}  // namespace

void save_field_sidecar(const BiphotonField& field, const PhysicalParams& params,
                        const std::filesystem::path& json_path) {
  nlohmann::json j;
  j["grid"] = {{"omega_min", field.grid.omega_min},
               {"omega_max", field.grid.omega_max},
               {"n_omega", field.grid.n_omega},
               {"omega_prime_min", field.grid.omega_prime_min},
               {"omega_prime_max", field.grid.omega_prime_max},
               {"n_omega_prime", field.grid.n_omega_prime}};
  j["channel"] = {{"mu_prime", field.channel.mu_prime == Direction::plus ? "+" : "-"},
                  {"mu", field.channel.mu == Direction::plus ? "+" : "-"},
                  {"sigma_prime", polarization_name(field.channel.sigma_prime())},
                  {"sigma", polarization_name(field.channel.sigma())}};
  j["normalized"] = field.normalized;
  j["params"] = {{"omega_2X", params.omega_2X}, {"omega_X", params.omega_X},
                 {"delta_X", params.delta_X},   {"S", params.S},
                 {"Gamma", params.Gamma},       {"D", params.D},
                 {"omega_e", params.omega_e},   {"omega_b", params.omega_b},
                 {"tau", params.tau}};
  std::ofstream out(json_path);
  if (!out)
    throw std::runtime_error("save_field_sidecar: cannot open " + json_path.string());
  out << j.dump(2) << '\n';
}

void save_mode_profile_csv(const ModeProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("save_mode_profile_csv: cannot open " + path.string());
  out << "omega,u\n";
  for (std::size_t i = 0; i < profile.omegas().size(); ++i)
    out << format_double(profile.omegas()[i]) << ',' << format_double(profile.values()[i])
        << '\n';
}

ModeProfile load_mode_profile_csv(const std::filesystem::path& path,
                                  ModeProfile::Kind kind) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_mode_profile_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("omega,u", 0) != 0)
    throw config_error("load_mode_profile_csv: expected header 'omega,u'");
  std::vector<double> omegas, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw config_error("load_mode_profile_csv: malformed row '" + line + "'");
    omegas.push_back(std::stod(line.substr(0, comma)));
    us.push_back(std::stod(line.substr(comma + 1)));
  }
  return ModeProfile(std::move(omegas), std::move(us), kind);
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_checksum: cannot open " + path.string());
  std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a offset basis
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;  // FNV-1a prime
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

namespace {

// Minimal TOML subset: [table] / [a.b] headers, key = value with strings,
// numbers, booleans and flat arrays; '#' comments. Enough for run configs.
class TomlSubsetParser {
 public:
  explicit TomlSubsetParser(std::istream& in) : in_(in) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    std::string line;
    int line_no = 0;
    while (std::getline(in_, line)) {
      ++line_no;
      const std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line_no, "unterminated table header");
        table = &descend(root, strip(s.substr(1, s.size() - 2)), line_no);
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
      const std::string key = strip(s.substr(0, eq));
      if (key.empty()) fail(line_no, "empty key");
      (*table)[key] = parse_value(strip(s.substr(eq + 1)), line_no);
    }
    return root;
  }

 private:
  static std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }

  [[noreturn]] static void fail(int line_no, const std::string& what) {
    throw config_error("config (TOML) line " + std::to_string(line_no) + ": " + what);
  }

  static nlohmann::json& descend(nlohmann::json& root, const std::string& dotted,
                                 int line_no) {
    if (dotted.empty()) fail(line_no, "empty table name");
    nlohmann::json* node = &root;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
      part = strip(part);
      if (part.empty()) fail(line_no, "empty table-name component");
      node = &(*node)[part];
      if (!node->is_object() && !node->is_null()) fail(line_no, "table redefines a value");
      if (node->is_null()) *node = nlohmann::json::object();
    }
    return *node;
  }

  static nlohmann::json parse_value(std::string v, int line_no) {
    // Drop trailing comments outside of strings.
    bool in_string = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == '"') in_string = !in_string;
      if (v[i] == '#' && !in_string) {
        v = strip(v.substr(0, i));
        break;
      }
    }
    if (v.empty()) fail(line_no, "missing value");
    if (v.front() == '"') {
      if (v.size() < 2 || v.back() != '"') fail(line_no, "unterminated string");
      return v.substr(1, v.size() - 2);
    }
    if (v.front() == '[') {
      if (v.back() != ']') fail(line_no, "unterminated array");
      nlohmann::json arr = nlohmann::json::array();
      std::stringstream ss(v.substr(1, v.size() - 2));
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (!item.empty()) arr.push_back(parse_value(item, line_no));
      }
      return arr;
    }
    if (v == "true") return true;
    if (v == "false") return false;
    try {
      std::size_t used = 0;
      if (v.find_first_of(".eEinf") == std::string::npos) {
        const long long i = std::stoll(v, &used);
        if (used == v.size()) return i;
      }
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::exception&) {
      // fall through to the error below
    }
    fail(line_no, "unsupported value '" + v + "'");
  }

  std::istream& in_;
};

}  // namespace

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("load_config: cannot open " + path.string());
  const std::string ext = path.extension().string();
  try {
    if (ext == ".json") {
      nlohmann::json j;
      in >> j;
      if (!j.is_object()) throw config_error("load_config: top level must be an object");
      return j;
    }
    if (ext == ".toml") return TomlSubsetParser(in).parse();
  } catch (const nlohmann::json::exception& e) {
    throw config_error("load_config: " + path.string() + ": " + e.what());
  }
  throw config_error("load_config: unsupported config extension '" + ext +
                     "' (expected .toml or .json)");
}

namespace {
void collect_paths(const nlohmann::json& node, const std::string& prefix,
                   std::vector<std::string>& out) {
  if (!node.is_object()) {
    out.push_back(prefix);
    return;
  }
  for (const auto& [key, value] : node.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object())
      collect_paths(value, path, out);
    else
      out.push_back(path);
  }
}
}  // namespace

void reject_unknown_keys(const nlohmann::json& config,
                         const std::vector<std::string>& allowed, const std::string& where) {
  std::vector<std::string> paths;
  collect_paths(config, "", paths);
  for (const std::string& p : paths) {
    bool found = false;
    for (const std::string& a : allowed)
      if (a == p) {
        found = true;
        break;
      }
    if (!found)
      throw config_error(where + ": unknown config key '" + p + "'");
  }
}

int thread_cap() {
  const char* env = std::getenv("FRENGATE_THREADS");
  if (env != nullptr) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
      // ignore malformed values, fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace frengate
