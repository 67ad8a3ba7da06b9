#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "thzsaga/atmosphere.hpp"
#include "thzsaga/linkbudget.hpp"
#include "thzsaga/path.hpp"
#include "thzsaga/xsection.hpp"

namespace thz {

namespace fs = std::filesystem;

// key = value text with [section] headers and # comments.
struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct KvSection {
  std::string name;
  int line = 0;
  std::vector<KvEntry> entries;
};

struct KvDocument {
  std::string source;
  std::vector<KvEntry> top;
  std::vector<KvSection> sections;
};

KvDocument parse_kv(std::string_view text, const std::string& source);

// Schema access to one block. Keys never read are rejected by finish().
class KvBlock {
 public:
  KvBlock(const std::vector<KvEntry>& entries, std::string source, std::string context, int line);

  bool has(const std::string& key) const;
  const std::string& required(const std::string& key);
  std::optional<std::string> optional(const std::string& key);
  double required_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::vector<double> get_list(const std::string& key);
  int line_of(const std::string& key) const;
  std::string location(const std::string& key) const;
  void finish() const;

 private:
  const KvEntry* find(const std::string& key) const;
  const std::vector<KvEntry>* entries_;
  std::string source_;
  std::string context_;
  int line_;
  std::set<std::string> seen_;
};

double parse_double(std::string_view s, const std::string& where);
std::vector<double> parse_double_list(std::string_view s, const std::string& where);
std::string format_double(double v);  // shortest text that round-trips

// Bundled data directory: set_data_dir() > THZ_SAGA_DATA > build default.
fs::path data_dir();
void set_data_dir(const fs::path& dir);

// Absolute refs as-is, then relative to base_dir, then to data_dir().
fs::path resolve_ref(const std::string& ref, const fs::path& base_dir = {});

std::uint32_t crc32_of(std::string_view bytes);

// Reads a file; files listed in <data_dir>/checksums.txt must match.
std::string read_file(const fs::path& path);

AbsorptionTable load_absorption_table(std::string_view text, const std::string& source);
AbsorptionTable load_absorption_table(std::istream& in, const std::string& source);

DropSpectrum load_drop_spectrum(std::string_view text, const std::string& source);
std::string save_drop_spectrum(const DropSpectrum& s);

DoubleDebyeParams load_double_debye(std::string_view text, const std::string& source);
std::shared_ptr<const DoubleDebyeParams> default_double_debye();

BandAllocationTable load_band_table(std::string_view text, const std::string& source);
BandAllocationTable default_band_table();

using SpeciesCatalog = std::map<std::string, std::shared_ptr<const GasSpecies>>;
SpeciesCatalog load_species_catalog(std::string_view text, const std::string& source, const fs::path& base_dir);
const SpeciesCatalog& default_species_catalog();

AtmosphereModel load_atmosphere(std::string_view text, const std::string& source, const fs::path& base_dir,
                                const SpeciesCatalog& catalog);
AtmosphereModel load_atmosphere_file(const fs::path& path);
std::string save_atmosphere(const AtmosphereModel& m);

Scenario load_scenario(std::string_view text, const std::string& source, const fs::path& base_dir);
Scenario load_scenario_file(const fs::path& path);
std::string save_scenario(const Scenario& s);

struct ReportFormat {
  bool scientific = false;
};

void emit_loss_report(const std::vector<LossBreakdown>& rows, std::ostream& out, ReportFormat fmt = {});
void emit_budget_report(const std::vector<BudgetRow>& rows, std::ostream& out, ReportFormat fmt = {});

}  // namespace thz
