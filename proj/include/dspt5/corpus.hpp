// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dspt5::corpus {

enum class College {
  AgricultureLifeSciences,
  ArchitectureArtsDesign,
  Engineering,
  LiberalArtsHumanSciences,
  NaturalResourcesEnvironment,
  Science,
  Business,
  VeterinaryMedicine,
  Unassigned,
};

/// The eight assignable colleges, in report order.
const std::vector<College>& all_colleges();
std::string_view college_abbrev(College c);   // e.g. "ENG"
std::string_view college_name(College c);     // e.g. "Engineering"
std::optional<College> college_from_abbrev(std::string_view abbrev);

enum class DegreeLevel { Doctoral, Masters };
enum class EtdType { Thesis, Dissertation };

std::string_view to_string(DegreeLevel level);
std::string_view to_string(EtdType type);

/// One thesis/dissertation metadata row. `abstract` is the academic source
/// document, `abstract_general` the general-audience target.
struct EtdRecord {
  std::string identifier_uri;
  std::string title;
  std::string abstract;
  std::string abstract_general;
  std::vector<std::string> subject_terms;
  std::string discipline;
  std::string department;
  std::string degree;
  DegreeLevel degree_level = DegreeLevel::Masters;
  EtdType type = EtdType::Thesis;
  College college = College::Unassigned;
};

struct Rejection {
  std::string missing_field;  // field whose absence caused the rejection
  std::string detail;
};

using ParseResult = std::variant<EtdRecord, Rejection>;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse a single OAI-PMH <record> element (DSpace "dim" or oai_dc layouts)
/// into a record without a college. Records missing identifier_uri,
/// abstract or abstract_general are rejected, naming the field. Malformed
/// XML propagates as xml::ParseError.
ParseResult parse_record(std::string_view record_xml);

// ---------------------------------------------------------------------------
// College assignment

using Roster = std::map<College, std::vector<std::string>>;

/// Departments per college as listed on the university's college sites.
/// Departments belonging to two colleges appear in both rosters.
const Roster& default_roster();

/// Normalized Levenshtein similarity in [0,1] between two department names
/// after lowercasing, punctuation stripping and removal of administrative
/// filler tokens (department/dept/school/college/of/the).
double department_similarity(std::string_view a, std::string_view b);

/// Every college with a roster entry whose similarity to `department`
/// reaches `threshold`. Empty set means the record stays unassigned.
std::set<College> assign_college(std::string_view department, const Roster& roster,
                                 double threshold = 0.85);

// ---------------------------------------------------------------------------
// CSV persistence (Table 5 columns plus "college")

const std::vector<std::string>& csv_header();

void write_csv(std::ostream& out, const std::vector<EtdRecord>& records);
void write_csv_file(const std::string& path, const std::vector<EtdRecord>& records);

/// Throws SchemaError when the header row does not match csv_header().
std::vector<EtdRecord> read_csv(std::string_view content);
std::vector<EtdRecord> read_csv_file(const std::string& path);

// ---------------------------------------------------------------------------
// Train/test split

struct CorpusSplit {
  std::vector<EtdRecord> train;
  std::vector<EtdRecord> test;
  std::uint64_t seed = 0;
  double ratio = 0.8;
  std::vector<std::string> warnings;
};

/// Stratified split by college, deterministic for a fixed seed. All rows
/// sharing an identifier_uri (multi-college duplicates) land on the same
/// side. Colleges with fewer than 2 rows go entirely to train, with a
/// warning.
CorpusSplit split(const std::vector<EtdRecord>& records, double ratio, std::uint64_t seed);

}  // namespace dspt5::corpus
