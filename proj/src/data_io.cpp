#include "thzsaga/data_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

#include "thzsaga/constants.hpp"
#include "thzsaga/error.hpp"

#ifndef THZSAGA_DEFAULT_DATA_DIR
#define THZSAGA_DEFAULT_DATA_DIR "data"
#endif

namespace thz {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto p = text.find('\n', start);
    if (p == std::string_view::npos) {
      if (start < text.size()) out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, p - start));
    start = p + 1;
  }
  for (auto& l : out)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  return out;
}

std::string at_line(const std::string& source, int line) { return source + ":" + std::to_string(line); }

fs::path& data_dir_override() {
  static fs::path p;
  return p;
}

std::mutex& data_dir_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------- kv text

KvDocument parse_kv(std::string_view text, const std::string& source) {
  KvDocument doc;
  doc.source = source;
  int n = 0;
  for (const auto& raw : lines_of(text)) {
    ++n;
    std::string line = raw;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw Error(ErrorCode::parse, "malformed section header '" + line + "'", at_line(source, n));
      doc.sections.push_back({trim(std::string_view(line).substr(1, line.size() - 2)), n, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::parse, "expected 'key = value', got '" + line + "'", at_line(source, n));
    KvEntry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), n};
    if (e.key.empty()) throw Error(ErrorCode::parse, "empty key", at_line(source, n));
    auto& target = doc.sections.empty() ? doc.top : doc.sections.back().entries;
    for (const auto& prev : target)
      if (prev.key == e.key)
        throw Error(ErrorCode::parse, "duplicate key '" + e.key + "' (first at line " + std::to_string(prev.line) + ")",
                    at_line(source, n));
    target.push_back(std::move(e));
  }
  return doc;
}

KvBlock::KvBlock(const std::vector<KvEntry>& entries, std::string source, std::string context, int line)
    : entries_(&entries), source_(std::move(source)), context_(std::move(context)), line_(line) {}

const KvEntry* KvBlock::find(const std::string& key) const {
  for (const auto& e : *entries_)
    if (e.key == key) return &e;
  return nullptr;
}

bool KvBlock::has(const std::string& key) const { return find(key) != nullptr; }

int KvBlock::line_of(const std::string& key) const {
  const KvEntry* e = find(key);
  return e ? e->line : line_;
}

std::string KvBlock::location(const std::string& key) const {
  return at_line(source_, line_of(key)) + " " + context_ + "." + key;
}

const std::string& KvBlock::required(const std::string& key) {
  const KvEntry* e = find(key);
  if (!e)
    throw Error(ErrorCode::missing_key, "missing required key '" + key + "' in " + context_,
                at_line(source_, line_) + " " + context_ + "." + key);
  seen_.insert(key);
  return e->value;
}

std::optional<std::string> KvBlock::optional(const std::string& key) {
  const KvEntry* e = find(key);
  if (!e) return std::nullopt;
  seen_.insert(key);
  return e->value;
}

double KvBlock::required_double(const std::string& key) {
  const std::string v = required(key);
  return parse_double(v, location(key));
}

double KvBlock::get_double(const std::string& key, double fallback) {
  auto v = optional(key);
  return v ? parse_double(*v, location(key)) : fallback;
}

std::vector<double> KvBlock::get_list(const std::string& key) {
  const std::string v = required(key);
  return parse_double_list(v, location(key));
}

void KvBlock::finish() const {
  for (const auto& e : *entries_)
    if (!seen_.count(e.key))
      throw Error(ErrorCode::unknown_key, "unknown key '" + e.key + "' in " + context_,
                  at_line(source_, e.line) + " " + context_ + "." + e.key);
}

double parse_double(std::string_view s, const std::string& where) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  if (!t.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (t.empty() || ec != std::errc() || p != e || !std::isfinite(v))
    throw Error(ErrorCode::parse, "not a number: '" + t + "'", where);
  return v;
}

std::vector<double> parse_double_list(std::string_view s, const std::string& where) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_double(item, where));
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// ---------------------------------------------------------------- files

fs::path data_dir() {
  {
    std::lock_guard<std::mutex> lock(data_dir_mutex());
    if (!data_dir_override().empty()) return data_dir_override();
  }
  if (const char* env = std::getenv("THZ_SAGA_DATA"); env && *env) return fs::path(env);
  return fs::path(THZSAGA_DEFAULT_DATA_DIR);
}

void set_data_dir(const fs::path& dir) {
  std::lock_guard<std::mutex> lock(data_dir_mutex());
  data_dir_override() = dir;
}

fs::path resolve_ref(const std::string& ref, const fs::path& base_dir) {
  const fs::path p(ref);
  if (p.is_absolute()) return p;
  if (!base_dir.empty() && fs::exists(base_dir / p)) return base_dir / p;
  if (fs::exists(data_dir() / p)) return data_dir() / p;
  throw Error(ErrorCode::io, "cannot find '" + ref + "' relative to '" + base_dir.string() + "' or data dir '" +
                                 data_dir().string() + "'",
              ref);
}

std::uint32_t crc32_of(std::string_view bytes) {
  uLong c = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto chunk = std::min<std::size_t>(bytes.size() - off, 1u << 30);
    c = crc32(c, reinterpret_cast<const Bytef*>(bytes.data() + off), uInt(chunk));
    off += chunk;
  }
  return std::uint32_t(c);
}

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open file", path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "read failure", path.string());
  return os.str();
}

std::optional<std::uint32_t> listed_checksum(const fs::path& file) {
  std::error_code ec;
  const fs::path dir = fs::weakly_canonical(data_dir(), ec);
  if (ec) return std::nullopt;
  const fs::path abs = fs::weakly_canonical(file, ec);
  if (ec) return std::nullopt;
  const fs::path rel = abs.lexically_relative(dir);
  if (rel.empty() || *rel.begin() == "..") return std::nullopt;
  const fs::path list = dir / "checksums.txt";
  if (!fs::exists(list)) return std::nullopt;
  std::istringstream in(slurp(list));
  std::string hex, name;
  while (in >> hex >> name)
    if (name == rel.generic_string()) return std::uint32_t(std::stoul(hex, nullptr, 16));
  return std::nullopt;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::string bytes = slurp(path);
  if (auto want = listed_checksum(path)) {
    const auto got = crc32_of(bytes);
    if (got != *want) {
      std::ostringstream os;
      os << "crc32 " << std::hex << std::setw(8) << std::setfill('0') << got << " does not match listed "
         << std::setw(8) << *want;
      throw Error(ErrorCode::checksum, os.str(), path.string());
    }
  }
  return bytes;
}

// ---------------------------------------------------------------- csv tables

namespace {

struct CsvRows {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::vector<std::string> comments;
};

CsvRows read_csv(std::string_view text, const std::string& source, const std::string& header) {
  CsvRows out;
  bool have_header = false;
  int n = 0;
  for (const auto& raw : lines_of(text)) {
    ++n;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      out.comments.push_back(trim(std::string_view(line).substr(1)));
      continue;
    }
    if (!have_header) {
      if (line != header)
        throw Error(ErrorCode::parse, "expected header '" + header + "', got '" + line + "'", at_line(source, n));
      have_header = true;
      continue;
    }
    out.rows.push_back({n, split(line, ',')});
  }
  if (!have_header) throw Error(ErrorCode::parse, "missing header '" + header + "'", source);
  return out;
}

std::optional<std::string> comment_value(const std::vector<std::string>& comments, const std::string& key) {
  for (const auto& c : comments) {
    const auto p = c.find(key + "=");
    if (p == std::string::npos || (p > 0 && c[p - 1] != ' ')) continue;
    std::string rest = c.substr(p + key.size() + 1);
    if (key != "provenance") rest = rest.substr(0, rest.find(' '));
    return trim(rest);
  }
  return std::nullopt;
}

std::vector<double> numeric_row(const std::pair<int, std::vector<std::string>>& row, std::size_t width,
                                const std::string& source) {
  if (row.second.size() != width)
    throw Error(ErrorCode::parse,
                "expected " + std::to_string(width) + " fields, got " + std::to_string(row.second.size()),
                at_line(source, row.first));
  std::vector<double> v;
  for (const auto& f : row.second) v.push_back(parse_double(f, at_line(source, row.first)));
  return v;
}

}  // namespace

AbsorptionTable load_absorption_table(std::string_view text, const std::string& source) {
  const CsvRows csv = read_csv(text, source, "frequency_hz,sigma_m2");
  AbsorptionTable t;
  auto species = comment_value(csv.comments, "species");
  if (!species || species->empty())
    throw Error(ErrorCode::missing_key, "header comment needs species=<name>", source + " species");
  t.species = *species;
  t.provenance = comment_value(csv.comments, "provenance").value_or("");
  for (const auto& row : csv.rows) {
    const auto v = numeric_row(row, 2, source);
    if (!t.f_hz.empty() && v[0] <= t.f_hz.back())
      throw Error(ErrorCode::validation,
                  v[0] == t.f_hz.back() ? "duplicate frequency" : "frequencies must be strictly increasing",
                  at_line(source, row.first));
    if (!(v[0] > 0.0)) throw Error(ErrorCode::validation, "frequency must be positive", at_line(source, row.first));
    if (v[1] < 0.0) throw Error(ErrorCode::validation, "cross section must be >= 0", at_line(source, row.first));
    t.f_hz.push_back(v[0]);
    t.sigma_m2.push_back(v[1]);
  }
  if (t.f_hz.size() < 2) throw Error(ErrorCode::validation, "table needs at least two rows", source);
  return t;
}

AbsorptionTable load_absorption_table(std::istream& in, const std::string& source) {
  std::ostringstream os;
  os << in.rdbuf();
  return load_absorption_table(os.str(), source);
}

DropSpectrum load_drop_spectrum(std::string_view text, const std::string& source) {
  const CsvRows csv = read_csv(text, source, "diameter_m,density_m3");
  DropSpectrum s;
  if (auto r = comment_value(csv.comments, "rain_rate_mmhr")) {
    s.rain_rate_mmhr = parse_double(*r, source + " rain_rate_mmhr");
    if (s.rain_rate_mmhr < 0.0) throw Error(ErrorCode::validation, "rain rate must be >= 0", source);
  }
  for (const auto& row : csv.rows) {
    const auto v = numeric_row(row, 2, source);
    if (!(v[0] > 0.0)) throw Error(ErrorCode::validation, "diameter must be positive", at_line(source, row.first));
    if (!s.bins.empty() && v[0] <= s.bins.back().diameter_m)
      throw Error(ErrorCode::validation, "diameters must be strictly increasing", at_line(source, row.first));
    if (v[1] < 0.0) throw Error(ErrorCode::validation, "density must be >= 0", at_line(source, row.first));
    s.bins.push_back({v[0], v[1]});
  }
  if (s.bins.empty()) throw Error(ErrorCode::validation, "spectrum has no bins", source);
  return s;
}

std::string save_drop_spectrum(const DropSpectrum& s) {
  std::ostringstream os;
  if (s.rain_rate_mmhr > 0.0) os << "# rain_rate_mmhr=" << format_double(s.rain_rate_mmhr) << "\n";
  os << "diameter_m,density_m3\n";
  for (const auto& b : s.bins) os << format_double(b.diameter_m) << "," << format_double(b.density_m3) << "\n";
  return os.str();
}

DoubleDebyeParams load_double_debye(std::string_view text, const std::string& source) {
  const KvDocument doc = parse_kv(text, source);
  if (!doc.sections.empty())
    throw Error(ErrorCode::parse, "sections are not allowed", at_line(source, doc.sections.front().line));
  KvBlock kv(doc.top, source, "double_debye", 1);
  DoubleDebyeParams p;
  p.version = kv.required("version");
  const std::string var = kv.optional("temperature_variable").value_or("celsius");
  if (var == "celsius")
    p.variable = DoubleDebyeParams::TempVariable::celsius;
  else if (var == "inverse_theta")
    p.variable = DoubleDebyeParams::TempVariable::inverse_theta;
  else
    throw Error(ErrorCode::validation, "temperature_variable must be celsius or inverse_theta",
                kv.location("temperature_variable"));
  p.eps_s = kv.get_list("eps_s");
  p.eps_1 = kv.get_list("eps_1");
  p.eps_inf = kv.get_list("eps_inf");
  p.fD1_hz = kv.get_list("fD1_hz");
  p.fD2_hz = kv.get_list("fD2_hz");
  p.f_min_hz = kv.get_double("f_min_hz", p.f_min_hz);
  p.f_max_hz = kv.get_double("f_max_hz", p.f_max_hz);
  p.T_min_K = kv.get_double("T_min_K", p.T_min_K);
  p.T_max_K = kv.get_double("T_max_K", p.T_max_K);
  kv.finish();
  return p;
}

std::shared_ptr<const DoubleDebyeParams> default_double_debye() {
  static const std::shared_ptr<const DoubleDebyeParams> p = [] {
    const fs::path f = data_dir() / "water" / "double_debye_liebe.kv";
    return std::make_shared<const DoubleDebyeParams>(load_double_debye(read_file(f), f.string()));
  }();
  return p;
}

BandAllocationTable load_band_table(std::string_view text, const std::string& source) {
  std::string header = "lo_ghz,hi_ghz";
  for (std::size_t i = 0; i < kServiceCount; ++i) header += std::string(",") + to_string(Service(i));
  const CsvRows csv = read_csv(text, source, header);
  BandAllocationTable t;
  for (const auto& row : csv.rows) {
    const auto v = numeric_row(row, 2 + kServiceCount, source);
    BandAllocation b{v[0], v[1], {}};
    if (!(b.lo_ghz < b.hi_ghz)) throw Error(ErrorCode::validation, "band needs lo < hi", at_line(source, row.first));
    if (!t.rows.empty() && b.lo_ghz < t.rows.back().hi_ghz)
      throw Error(ErrorCode::validation, "bands overlap or are unsorted", at_line(source, row.first));
    for (std::size_t i = 0; i < kServiceCount; ++i) {
      if (v[2 + i] != 0.0 && v[2 + i] != 1.0)
        throw Error(ErrorCode::validation, "service flags must be 0 or 1", at_line(source, row.first));
      b.flags[i] = v[2 + i] == 1.0;
    }
    t.rows.push_back(b);
  }
  return t;
}

BandAllocationTable default_band_table() {
  const fs::path f = data_dir() / "bands" / "allocations_100_450ghz.csv";
  return load_band_table(read_file(f), f.string());
}

// ---------------------------------------------------------------- species

SpeciesCatalog load_species_catalog(std::string_view text, const std::string& source, const fs::path& base_dir) {
  const KvDocument doc = parse_kv(text, source);
  if (!doc.top.empty()) throw Error(ErrorCode::parse, "entries must sit in [species] blocks", source);
  SpeciesCatalog cat;
  std::vector<std::pair<std::shared_ptr<GasSpecies>, std::pair<std::string, std::string>>> pending;
  for (const auto& sec : doc.sections) {
    if (sec.name != "species")
      throw Error(ErrorCode::parse, "unknown section [" + sec.name + "]", at_line(source, sec.line));
    KvBlock kv(sec.entries, source, "species", sec.line);
    auto s = std::make_shared<GasSpecies>();
    s->name = kv.required("name");
    s->mass_kg = kv.required_double("mass_u") * constants::amu;
    s->polarizability_m3 = kv.get_double("polarizability_m3", 0.0);
    if (!(s->mass_kg > 0.0)) throw Error(ErrorCode::validation, "mass must be positive", kv.location("mass_u"));
    if (s->polarizability_m3 < 0.0)
      throw Error(ErrorCode::validation, "polarizability must be >= 0", kv.location("polarizability_m3"));
    auto table = kv.optional("absorption");
    auto comps = kv.optional("components");
    if (table && comps)
      throw Error(ErrorCode::validation, "give either absorption or components", kv.location("components"));
    if (table) {
      const fs::path p = resolve_ref(*table, base_dir);
      s->table = std::make_shared<const AbsorptionTable>(load_absorption_table(read_file(p), p.string()));
    }
    kv.finish();
    if (cat.count(s->name))
      throw Error(ErrorCode::validation, "duplicate species '" + s->name + "'", at_line(source, sec.line));
    if (comps) pending.push_back({s, {*comps, kv.location("components")}});
    cat[s->name] = s;
  }
  for (auto& [s, spec] : pending) {
    for (const auto& item : split(spec.first, ',')) {
      const auto c = item.find(':');
      if (c == std::string::npos) throw Error(ErrorCode::parse, "component needs name:fraction", spec.second);
      const std::string name = trim(std::string_view(item).substr(0, c));
      const double frac = parse_double(std::string_view(item).substr(c + 1), spec.second);
      auto it = cat.find(name);
      if (it == cat.end() || it->second == s)
        throw Error(ErrorCode::validation, "unknown component species '" + name + "'", spec.second);
      s->components.push_back({frac, it->second});
    }
  }
  return cat;
}

const SpeciesCatalog& default_species_catalog() {
  static const SpeciesCatalog cat = [] {
    const fs::path f = data_dir() / "species.kv";
    return load_species_catalog(read_file(f), f.string(), data_dir());
  }();
  return cat;
}

// ---------------------------------------------------------------- atmosphere

namespace {

std::vector<DropBin> parse_bins(const std::string& v, const std::string& where) {
  std::vector<DropBin> bins;
  for (const auto& item : split(v, ',')) {
    const auto c = item.find(':');
    if (c == std::string::npos) throw Error(ErrorCode::parse, "bin needs d_m:n_m3, got '" + item + "'", where);
    DropBin b{parse_double(std::string_view(item).substr(0, c), where),
              parse_double(std::string_view(item).substr(c + 1), where)};
    if (!(b.diameter_m > 0.0) || b.density_m3 < 0.0)
      throw Error(ErrorCode::validation, "bins need d > 0 and n >= 0", where);
    if (!bins.empty() && b.diameter_m <= bins.back().diameter_m)
      throw Error(ErrorCode::validation, "bin diameters must be strictly increasing", where);
    bins.push_back(b);
  }
  return bins;
}

void check_layer(double lo, double hi, const std::string& where) {
  if (!(lo >= 0.0) || !(hi > lo)) throw Error(ErrorCode::validation, "layer needs 0 <= h_lo_m < h_hi_m", where);
}

template <class Layer>
void check_no_overlap(const std::vector<Layer>& layers, const std::string& where) {
  for (std::size_t i = 0; i < layers.size(); ++i)
    for (std::size_t j = i + 1; j < layers.size(); ++j)
      if (layers[i].name == layers[j].name && layers[i].h_lo < layers[j].h_hi && layers[j].h_lo < layers[i].h_hi)
        throw Error(ErrorCode::validation, "layers of '" + layers[i].name + "' overlap", where);
}

}  // namespace

AtmosphereModel load_atmosphere(std::string_view text, const std::string& source, const fs::path& base_dir,
                                const SpeciesCatalog& catalog) {
  const KvDocument doc = parse_kv(text, source);
  AtmosphereModel m;
  KvBlock top(doc.top, source, "atmosphere", 1);
  m.temperature.surface_K = top.required_double("surface_temperature_K");
  m.temperature.lapse_K_per_m = top.get_double("lapse_rate_K_per_m", m.temperature.lapse_K_per_m);
  m.temperature.tropopause_m = top.get_double("tropopause_m", m.temperature.tropopause_m);
  m.temperature.stratopause_m = top.get_double("stratopause_m", m.temperature.stratopause_m);
  m.temperature.upper_K = top.get_double("upper_temperature_K", m.temperature.upper_K);
  if (auto v = top.optional("humidity_mode")) m.humidity = parse_humidity_mode(*v);
  m.humidity_multiplier = top.get_double("humidity_multiplier", 1.0);
  m.unsaturated_n0 = top.get_double("unsaturated_surface_density_m3", m.unsaturated_n0);
  if (auto v = top.optional("density_form")) {
    if (*v == "exact")
      m.density_form = DensityForm::exact;
    else if (*v == "printed")
      m.density_form = DensityForm::printed;
    else
      throw Error(ErrorCode::validation, "density_form must be exact or printed", top.location("density_form"));
  }
  top.finish();
  if (!(m.temperature.surface_K > 0.0) || !(m.temperature.upper_K > 0.0))
    throw Error(ErrorCode::validation, "temperatures must be positive", top.location("surface_temperature_K"));
  if (!(m.temperature.tropopause_m <= m.temperature.stratopause_m))
    throw Error(ErrorCode::validation, "tropopause must lie below stratopause", top.location("tropopause_m"));

  for (const auto& sec : doc.sections) {
    KvBlock kv(sec.entries, source, sec.name, sec.line);
    if (sec.name == "gas") {
      GasProfile gp;
      const std::string name = kv.required("name");
      auto it = catalog.find(name);
      if (it == catalog.end())
        throw Error(ErrorCode::validation, "unknown gas species '" + name + "'", kv.location("name"));
      gp.species = *it->second;
      gp.kind = parse_profile_kind(kv.optional("profile").value_or("hydrostatic"));
      const bool needs_n0 = gp.kind == ProfileKind::hydrostatic || gp.kind == ProfileKind::uniform ||
                            gp.kind == ProfileKind::unsaturated_water;
      gp.n0 = needs_n0 ? kv.required_double("surface_density_m3") : kv.get_double("surface_density_m3", 0.0);
      gp.ceiling_m = kv.get_double("ceiling_m", gp.ceiling_m);
      if (gp.n0 < 0.0) throw Error(ErrorCode::validation, "density must be >= 0", kv.location("surface_density_m3"));
      m.gases.push_back(gp);
    } else if (sec.name == "hydrometeor") {
      HydrometeorLayer l;
      l.name = kv.required("name");
      l.h_lo = kv.required_double("h_lo_m");
      l.h_hi = kv.required_double("h_hi_m");
      check_layer(l.h_lo, l.h_hi, kv.location("h_hi_m"));
      if (l.h_hi > kWaterVaporCeiling_m)
        throw Error(ErrorCode::validation, "hydrometeor layers must stay below 15000 m", kv.location("h_hi_m"));
      auto bins = kv.optional("bins");
      auto spectrum = kv.optional("spectrum");
      if (bins.has_value() == spectrum.has_value())
        throw Error(ErrorCode::missing_key, "give exactly one of bins or spectrum", kv.location("bins"));
      if (bins) {
        l.bins = parse_bins(*bins, kv.location("bins"));
      } else {
        const fs::path p = resolve_ref(*spectrum, base_dir);
        l.bins = load_drop_spectrum(read_file(p), p.string()).bins;
      }
      auto q = kv.optional("refractive_index");
      if (q) {
        const auto v = parse_double_list(*q, kv.location("refractive_index"));
        if (v.size() != 2)
          throw Error(ErrorCode::parse, "refractive_index needs re, im", kv.location("refractive_index"));
        l.refractive = RefractiveModel::fixed({v[0], v[1]});
        if (kv.has("temperature_K"))
          throw Error(ErrorCode::validation, "temperature_K only applies to water", kv.location("temperature_K"));
      } else {
        l.refractive = RefractiveModel::water(kv.get_double("temperature_K", m.temperature.surface_K));
      }
      m.hydrometeors.push_back(l);
    } else if (sec.name == "plasma") {
      PlasmaLayer l;
      l.name = kv.required("name");
      l.h_lo = kv.required_double("h_lo_m");
      l.h_hi = kv.required_double("h_hi_m");
      check_layer(l.h_lo, l.h_hi, kv.location("h_hi_m"));
      l.state.n_e = kv.required_double("ne_m3");
      l.state.T = kv.required_double("T_K");
      if (l.state.n_e < 0.0 || !(l.state.T > 0.0))
        throw Error(ErrorCode::validation, "plasma needs ne_m3 >= 0 and T_K > 0", kv.location("ne_m3"));
      m.plasma.push_back(l);
    } else {
      throw Error(ErrorCode::parse, "unknown section [" + sec.name + "]", at_line(source, sec.line));
    }
    kv.finish();
  }
  check_no_overlap(m.hydrometeors, source);
  check_no_overlap(m.plasma, source);
  return m;
}

AtmosphereModel load_atmosphere_file(const fs::path& path) {
  return load_atmosphere(read_file(path), path.string(), path.parent_path(), default_species_catalog());
}

std::string save_atmosphere(const AtmosphereModel& m) {
  std::ostringstream os;
  const auto& t = m.temperature;
  os << "surface_temperature_K = " << format_double(t.surface_K) << "\n"
     << "lapse_rate_K_per_m = " << format_double(t.lapse_K_per_m) << "\n"
     << "tropopause_m = " << format_double(t.tropopause_m) << "\n"
     << "stratopause_m = " << format_double(t.stratopause_m) << "\n"
     << "upper_temperature_K = " << format_double(t.upper_K) << "\n"
     << "humidity_mode = " << to_string(m.humidity) << "\n"
     << "humidity_multiplier = " << format_double(m.humidity_multiplier) << "\n"
     << "unsaturated_surface_density_m3 = " << format_double(m.unsaturated_n0) << "\n"
     << "density_form = " << (m.density_form == DensityForm::exact ? "exact" : "printed") << "\n";
  for (const auto& g : m.gases)
    os << "\n[gas]\nname = " << g.species.name << "\nprofile = " << to_string(g.kind)
       << "\nsurface_density_m3 = " << format_double(g.n0) << "\nceiling_m = " << format_double(g.ceiling_m) << "\n";
  for (const auto& l : m.hydrometeors) {
    os << "\n[hydrometeor]\nname = " << l.name << "\nh_lo_m = " << format_double(l.h_lo)
       << "\nh_hi_m = " << format_double(l.h_hi) << "\nbins = ";
    for (std::size_t i = 0; i < l.bins.size(); ++i)
      os << (i ? ", " : "") << format_double(l.bins[i].diameter_m) << ":" << format_double(l.bins[i].density_m3);
    os << "\n";
    if (l.refractive.is_water())
      os << "temperature_K = " << format_double(l.refractive.water_temperature()) << "\n";
    else
      os << "refractive_index = " << format_double(l.refractive.fixed_q().real()) << ", "
         << format_double(l.refractive.fixed_q().imag()) << "\n";
  }
  for (const auto& l : m.plasma)
    os << "\n[plasma]\nname = " << l.name << "\nh_lo_m = " << format_double(l.h_lo)
       << "\nh_hi_m = " << format_double(l.h_hi) << "\nne_m3 = " << format_double(l.state.n_e)
       << "\nT_K = " << format_double(l.state.T) << "\n";
  return os.str();
}

// ---------------------------------------------------------------- scenario

Scenario load_scenario(std::string_view text, const std::string& source, const fs::path& base_dir) {
  const KvDocument doc = parse_kv(text, source);
  Scenario sc;
  KvBlock top(doc.top, source, "scenario", 1);
  sc.name = top.required("name");
  sc.atmosphere_ref = top.required("atmosphere");
  sc.p_total_w = top.get_double("p_total_w", sc.p_total_w);
  sc.gain_db = top.get_double("gain_db", sc.gain_db);
  const double bp = top.get_double("band_points", 1.0);
  top.finish();
  if (!(sc.p_total_w > 0.0)) throw Error(ErrorCode::validation, "p_total_w must be positive", top.location("p_total_w"));
  if (bp < 1.0 || bp != std::floor(bp))
    throw Error(ErrorCode::validation, "band_points must be a positive integer", top.location("band_points"));
  sc.band_points = int(bp);
  sc.atmosphere = load_atmosphere_file(resolve_ref(sc.atmosphere_ref, base_dir));

  for (const auto& sec : doc.sections) {
    KvBlock kv(sec.entries, source, sec.name, sec.line);
    if (sec.name == "weather") {
      Weather w;
      w.name = kv.required("name");
      w.rain_rate_mmhr = kv.get_double("rain_rate_mmhr", 0.0);
      w.rain_top_m = kv.get_double("rain_top_m", w.rain_top_m);
      w.rain_spectrum_ref = kv.optional("rain_spectrum").value_or(w.rain_spectrum_ref);
      w.cloud_top_m = kv.get_double("cloud_top_m", 0.0);
      w.cloud_spectrum_ref = kv.optional("cloud_spectrum").value_or(w.cloud_spectrum_ref);
      if (auto h = kv.optional("humidity_mode")) w.humidity = parse_humidity_mode(*h);
      if (w.rain_rate_mmhr < 0.0 || w.cloud_top_m < 0.0 || !(w.rain_top_m > 0.0))
        throw Error(ErrorCode::validation, "weather values must be non-negative", at_line(source, sec.line));
      if (w.rain_top_m > kWaterVaporCeiling_m || w.cloud_top_m > kWaterVaporCeiling_m)
        throw Error(ErrorCode::validation, "rain and cloud tops must stay below 15000 m", at_line(source, sec.line));
      if (w.rain_rate_mmhr > 0.0) {
        const fs::path p = resolve_ref(w.rain_spectrum_ref, base_dir);
        w.rain_spectrum = load_drop_spectrum(read_file(p), p.string());
      }
      if (w.cloud_top_m > 0.0) {
        const fs::path p = resolve_ref(w.cloud_spectrum_ref, base_dir);
        w.cloud_spectrum = load_drop_spectrum(read_file(p), p.string());
      }
      if (sc.find_weather(w.name))
        throw Error(ErrorCode::validation, "duplicate weather '" + w.name + "'", at_line(source, sec.line));
      sc.weathers.push_back(w);
    } else if (sec.name == "link") {
      sc.links.push_back({kv.required("label"), {}});
    } else if (sec.name == "hop") {
      if (sc.links.empty())
        throw Error(ErrorCode::parse, "[hop] must follow a [link]", at_line(source, sec.line));
      HopSpec h;
      h.label = kv.required("label");
      const auto band = kv.get_list("band_ghz");
      if (band.size() != 2 || !(band[0] < band[1]) || !(band[0] > 0.0))
        throw Error(ErrorCode::validation, "band_ghz needs lo, hi with 0 < lo < hi", kv.location("band_ghz"));
      h.f_lo_hz = band[0] * 1e9;
      h.f_hi_hz = band[1] * 1e9;
      h.h0_m = kv.required_double("h0_m");
      const int kinds = int(kv.has("elevation_rad")) + int(kv.has("ground_distance_m")) + int(kv.has("horizontal_km"));
      if (kinds != 1)
        throw Error(ErrorCode::missing_key, "give exactly one of elevation_rad, ground_distance_m, horizontal_km",
                    kv.location("elevation_rad"));
      if (kv.has("horizontal_km")) {
        h.geometry = HopSpec::Geometry::horizontal;
        h.geometry_value = kv.required_double("horizontal_km");
        h.h1_m = kv.get_double("h1_m", h.h0_m);
        if (h.h1_m != h.h0_m)
          throw Error(ErrorCode::validation, "horizontal hop needs h1_m == h0_m", kv.location("h1_m"));
      } else {
        h.h1_m = kv.required_double("h1_m");
        h.geometry = kv.has("elevation_rad") ? HopSpec::Geometry::elevation : HopSpec::Geometry::ground_distance;
        h.geometry_value = kv.required_double(kv.has("elevation_rad") ? "elevation_rad" : "ground_distance_m");
      }
      if (kv.has("gain_db")) h.gain_db = kv.required_double("gain_db");
      h.weather = kv.optional("weather").value_or("");
      (void)h.path();
      sc.links.back().hops.push_back(h);
    } else {
      throw Error(ErrorCode::parse, "unknown section [" + sec.name + "]", at_line(source, sec.line));
    }
    kv.finish();
  }
  for (const auto& l : sc.links) {
    if (l.hops.empty() || l.hops.size() > 2)
      throw Error(ErrorCode::validation, "link '" + l.label + "' needs one or two hops", source);
    for (const auto& h : l.hops)
      if (!h.weather.empty() && !sc.find_weather(h.weather))
        throw Error(ErrorCode::validation, "hop '" + h.label + "' names unknown weather '" + h.weather + "'", source);
  }
  return sc;
}

Scenario load_scenario_file(const fs::path& path) {
  return load_scenario(read_file(path), path.string(), path.parent_path());
}

std::string save_scenario(const Scenario& sc) {
  std::ostringstream os;
  os << "name = " << sc.name << "\natmosphere = " << sc.atmosphere_ref << "\np_total_w = " << format_double(sc.p_total_w)
     << "\ngain_db = " << format_double(sc.gain_db) << "\nband_points = " << sc.band_points << "\n";
  for (const auto& w : sc.weathers) {
    os << "\n[weather]\nname = " << w.name << "\nrain_rate_mmhr = " << format_double(w.rain_rate_mmhr)
       << "\nrain_top_m = " << format_double(w.rain_top_m) << "\nrain_spectrum = " << w.rain_spectrum_ref
       << "\ncloud_top_m = " << format_double(w.cloud_top_m) << "\ncloud_spectrum = " << w.cloud_spectrum_ref << "\n";
    if (w.humidity) os << "humidity_mode = " << to_string(*w.humidity) << "\n";
  }
  for (const auto& l : sc.links) {
    os << "\n[link]\nlabel = " << l.label << "\n";
    for (const auto& h : l.hops) {
      os << "\n[hop]\nlabel = " << h.label << "\nband_ghz = " << format_double(h.f_lo_hz / 1e9) << ", "
         << format_double(h.f_hi_hz / 1e9) << "\nh0_m = " << format_double(h.h0_m) << "\n";
      switch (h.geometry) {
        case HopSpec::Geometry::elevation:
          os << "h1_m = " << format_double(h.h1_m) << "\nelevation_rad = " << format_double(h.geometry_value) << "\n";
          break;
        case HopSpec::Geometry::ground_distance:
          os << "h1_m = " << format_double(h.h1_m) << "\nground_distance_m = " << format_double(h.geometry_value)
             << "\n";
          break;
        case HopSpec::Geometry::horizontal: os << "horizontal_km = " << format_double(h.geometry_value) << "\n"; break;
      }
      if (h.gain_db) os << "gain_db = " << format_double(*h.gain_db) << "\n";
      if (!h.weather.empty()) os << "weather = " << h.weather << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- reports

namespace {

std::string fixed(double v, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  std::string s = os.str();
  // Avoid "-0.00".
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(6) << v;
  return os.str();
}

std::string db(double v, const ReportFormat& fmt) { return fmt.scientific ? sci(v) : fixed(v, 2); }

}  // namespace

void emit_loss_report(const std::vector<LossBreakdown>& rows, std::ostream& out, ReportFormat fmt) {
  out << "f_hz,fspl_db,mie_db,rayleigh_db,molecular_db,plasma_db,total_db\n";
  for (const auto& r : rows)
    out << fixed(r.f_hz, 1) << "," << db(r.fspl_db, fmt) << "," << db(r.mie_db, fmt) << "," << db(r.rayleigh_db, fmt)
        << "," << db(r.molecular_db, fmt) << "," << db(r.plasma_db, fmt) << "," << db(r.total_db, fmt) << "\n";
  if (!out) throw Error(ErrorCode::io, "write failure", "loss report");
}

void emit_budget_report(const std::vector<BudgetRow>& rows, std::ostream& out, ReportFormat fmt) {
  out << "link,hop,f_ghz,p_t_w,l_fp_db,l_m_db,l_r_db,l_mo_db,l_pl_db,l_tot_db,p_r_dbm,p_n_dbm,c_gbps,c_b_bps_hz,"
         "method\n";
  for (const auto& r : rows) {
    const auto& L = r.losses;
    out << r.link << "," << r.hop << "," << format_double(r.f_lo_hz / 1e9) << "-" << format_double(r.f_hi_hz / 1e9)
        << "," << fixed(r.p_t_w, 2) << "," << db(L.fspl_db, fmt) << "," << db(L.mie_db, fmt) << ","
        << db(L.rayleigh_db, fmt) << "," << db(L.molecular_db, fmt) << "," << db(L.plasma_db, fmt) << ","
        << db(L.total_db, fmt) << "," << db(r.p_r_dbm, fmt) << "," << db(r.p_n_dbm, fmt) << ","
        << (fmt.scientific ? sci(r.capacity_bps / 1e9) : fixed(r.capacity_bps / 1e9, 2)) << ","
        << (fmt.scientific ? sci(r.spectral_efficiency) : fixed(r.spectral_efficiency, 2)) << "," << L.method << "\n";
  }
  if (!out) throw Error(ErrorCode::io, "write failure", "budget report");
}

}  // namespace thz
