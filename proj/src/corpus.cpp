// SPDX-License-Identifier: Apache-2.0
#include "dspt5/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dspt5/csv.hpp"
#include "dspt5/levenshtein.hpp"
#include "dspt5/rng.hpp"
#include "dspt5/text.hpp"
#include "dspt5/xml.hpp"

namespace dspt5::corpus {
namespace {

struct CollegeInfo {
  College college;
  std::string_view abbrev;
  std::string_view name;
};

constexpr CollegeInfo kColleges[] = {
    {College::AgricultureLifeSciences, "ALS", "Agriculture and Life Sciences"},
    {College::ArchitectureArtsDesign, "AAD", "Architecture, Arts, and Design"},
    {College::Engineering, "ENG", "Engineering"},
    {College::LiberalArtsHumanSciences, "LAHS", "Liberal Arts and Human Sciences"},
    {College::NaturalResourcesEnvironment, "NRE", "Natural Resources and Environment"},
    {College::Science, "SCI", "Science"},
    {College::Business, "BUS", "Business"},
    {College::VeterinaryMedicine, "VM", "Veterinary Medicine"},
};

const CollegeInfo* info_for(College c) {
  for (const CollegeInfo& info : kColleges) {
    if (info.college == c) return &info;
  }
  return nullptr;
}

}  // namespace

const std::vector<College>& all_colleges() {
  static const std::vector<College> order = [] {
    std::vector<College> v;
    for (const CollegeInfo& info : kColleges) v.push_back(info.college);
    return v;
  }();
  return order;
}

std::string_view college_abbrev(College c) {
  const CollegeInfo* info = info_for(c);
  return info ? info->abbrev : std::string_view("unassigned");
}

std::string_view college_name(College c) {
  const CollegeInfo* info = info_for(c);
  return info ? info->name : std::string_view("Unassigned");
}

std::optional<College> college_from_abbrev(std::string_view abbrev) {
  for (const CollegeInfo& info : kColleges) {
    if (info.abbrev == abbrev) return info.college;
  }
  if (abbrev == "unassigned") return College::Unassigned;
  return std::nullopt;
}

std::string_view to_string(DegreeLevel level) {
  return level == DegreeLevel::Doctoral ? "doctoral" : "masters";
}

std::string_view to_string(EtdType type) {
  return type == EtdType::Thesis ? "thesis" : "dissertation";
}

// ---------------------------------------------------------------------------
// parse_record

namespace {

// Values keyed by "schema.element.qualifier" ("" when absent).
struct FieldBag {
  std::unordered_map<std::string, std::vector<std::string>> values;

  void add(std::string key, std::string value) {
    if (value.empty()) return;
    values[std::move(key)].push_back(std::move(value));
  }

  const std::string* first(std::initializer_list<std::string_view> keys) const {
    for (std::string_view key : keys) {
      auto it = values.find(std::string(key));
      if (it != values.end() && !it->second.empty()) return &it->second.front();
    }
    return nullptr;
  }

  std::vector<std::string> all(std::string_view key) const {
    auto it = values.find(std::string(key));
    return it == values.end() ? std::vector<std::string>{} : it->second;
  }
};

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

void collect_fields(const xml::Element& metadata, FieldBag& bag) {
  // DSpace intermediate metadata: <dim:field mdschema=".." element=".." qualifier="..">
  for (const xml::Element* field : metadata.find_all("field")) {
    const std::string* schema = field->attribute("mdschema");
    const std::string* element = field->attribute("element");
    if (!element) continue;
    const std::string* qualifier = field->attribute("qualifier");
    std::string key = (schema ? *schema : std::string("dc")) + "." + *element + "." +
                      (qualifier ? *qualifier : std::string());
    bag.add(std::move(key), trimmed(field->text));
  }
  if (!bag.values.empty()) return;

  // Plain (qualified) Dublin Core: child elements of the dc container.
  const xml::Element* container = metadata.children.empty() ? &metadata : &metadata.children.front();
  for (const xml::Element& child : container->children) {
    std::string element(child.local_name());
    const std::string* qualifier = child.attribute("qualifier");
    std::string key = "dc." + element + "." + (qualifier ? *qualifier : std::string());
    bag.add(std::move(key), trimmed(child.text));
  }
}

std::optional<DegreeLevel> parse_degree_level(std::string_view raw) {
  const std::string v = text::to_lower(raw);
  if (v == "doctoral" || v == "doctorate" || v == "phd" || v == "ph.d.") return DegreeLevel::Doctoral;
  if (v == "masters" || v == "master's" || v == "master" || v == "ms" || v == "m.s.")
    return DegreeLevel::Masters;
  return std::nullopt;
}

std::optional<EtdType> parse_etd_type(std::string_view raw) {
  const std::string v = text::to_lower(raw);
  if (v == "thesis") return EtdType::Thesis;
  if (v == "dissertation") return EtdType::Dissertation;
  return std::nullopt;
}

}  // namespace

ParseResult parse_record(std::string_view record_xml) {
  const xml::Element record = xml::parse(record_xml);

  const xml::Element* metadata = record.find("metadata");
  if (!metadata) return Rejection{"metadata", "record has no <metadata> element"};

  FieldBag bag;
  collect_fields(*metadata, bag);

  EtdRecord rec;

  const std::string* identifier = bag.first({"dc.identifier.uri", "dc.identifier."});
  if (!identifier) {
    // Any identifier that looks like a URI.
    for (const auto& [key, values] : bag.values) {
      if (key.rfind("dc.identifier", 0) == 0) {
        for (const std::string& v : values) {
          if (v.find("://") != std::string::npos) {
            identifier = &v;
            break;
          }
        }
      }
      if (identifier) break;
    }
  }
  if (!identifier) return Rejection{"identifier_uri", "no dc.identifier.uri"};
  rec.identifier_uri = *identifier;

  if (const std::string* title = bag.first({"dc.title."})) rec.title = *title;

  const std::string* abstract_academic = bag.first({"dc.description.abstract"});
  if (!abstract_academic) return Rejection{"abstract", "no dc.description.abstract"};
  rec.abstract = *abstract_academic;

  const std::string* abstract_general =
      bag.first({"dc.description.abstractgeneral", "dc.description.abstract-general",
                 "dc.description.generalabstract"});
  if (!abstract_general) return Rejection{"abstract_general", "no dc.description.abstractgeneral"};
  rec.abstract_general = *abstract_general;

  rec.subject_terms = bag.all("dc.subject.");

  if (const std::string* v = bag.first({"thesis.degree.discipline", "dc.description.discipline"}))
    rec.discipline = *v;
  if (const std::string* v = bag.first({"dc.contributor.department", "thesis.degree.department"}))
    rec.department = *v;
  if (const std::string* v = bag.first({"thesis.degree.name", "dc.degree."})) rec.degree = *v;

  std::optional<DegreeLevel> level;
  if (const std::string* v = bag.first({"thesis.degree.level", "dc.degree.level"}))
    level = parse_degree_level(*v);
  std::optional<EtdType> type;
  if (const std::string* v = bag.first({"dc.type."})) type = parse_etd_type(*v);

  // Each implies the other when only one is present.
  if (!level && type) level = (*type == EtdType::Dissertation) ? DegreeLevel::Doctoral : DegreeLevel::Masters;
  if (!type && level) type = (*level == DegreeLevel::Doctoral) ? EtdType::Dissertation : EtdType::Thesis;
  if (!level) return Rejection{"degree_level", "no thesis.degree.level or dc.type"};
  rec.degree_level = *level;
  rec.type = *type;

  return rec;
}

// ---------------------------------------------------------------------------
// College assignment

const Roster& default_roster() {
  static const Roster roster = {
      {College::AgricultureLifeSciences,
       {"Agricultural, Leadership, and Community Education", "Agricultural and Applied Economics",
        "Animal and Poultry Sciences", "Biochemistry", "Biological Systems Engineering",
        "Dairy Science", "Entomology", "Food Science and Technology", "Horticulture",
        "Human Nutrition, Foods, and Exercise", "Plant Pathology, Physiology, and Weed Science",
        "School of Plant and Environmental Sciences"}},
      {College::ArchitectureArtsDesign,
       {"Architecture", "Art and Art History", "Building Construction", "Industrial Design",
        "Interior Design", "Landscape Architecture", "Theatre and Cinema", "Music",
        "School of Design", "School of Performing Arts"}},
      {College::Engineering,
       {"Aerospace and Ocean Engineering", "Biological Systems Engineering",
        "Biomedical Engineering and Mechanics", "Building Construction", "Chemical Engineering",
        "Civil and Environmental Engineering", "Computer Science",
        "Electrical and Computer Engineering", "Engineering Education",
        "Environmental Science and Engineering", "Industrial and Systems Engineering",
        "Materials Science and Engineering", "Mechanical Engineering",
        "Mining and Minerals Engineering"}},
      {College::LiberalArtsHumanSciences,
       {"Apparel, Housing, and Resource Management", "Communication", "English", "History",
        "Human Development and Family Science", "Political Science", "Religion and Culture",
        "Philosophy", "Sociology", "School of Education", "Modern and Classical Languages and Literatures"}},
      {College::NaturalResourcesEnvironment,
       {"Fish and Wildlife Conservation", "Forest Resources and Environmental Conservation",
        "Geography", "Sustainable Biomaterials"}},
      {College::Science,
       {"Biological Sciences", "Chemistry", "Economics", "Geosciences", "Mathematics",
        "Physics", "Psychology", "Statistics", "School of Neuroscience"}},
      {College::Business,
       {"Accounting and Information Systems", "Business Information Technology", "Finance",
        "Hospitality and Tourism Management", "Management", "Marketing"}},
      {College::VeterinaryMedicine,
       {"Biomedical and Veterinary Sciences", "Biomedical Sciences and Pathobiology",
        "Large Animal Clinical Sciences", "Small Animal Clinical Sciences",
        "Population Health Sciences", "Veterinary Medicine"}},
  };
  return roster;
}

namespace {

// Lowercase, strip punctuation, drop administrative filler tokens.
std::string normalize_department(std::string_view name) {
  static const std::set<std::string> filler = {"department", "dept", "departments",
                                               "school",     "college", "of", "the"};
  std::string joined;
  for (const std::string& token : text::tokenize_words(name)) {
    if (filler.contains(token)) continue;
    if (!joined.empty()) joined.push_back(' ');
    joined += token;
  }
  return joined;
}

}  // namespace

double department_similarity(std::string_view a, std::string_view b) {
  const std::string na = normalize_department(a);
  const std::string nb = normalize_department(b);
  if (na.empty() && nb.empty()) return 1.0;
  const std::size_t longest = std::max(na.size(), nb.size());
  if (longest == 0) return 1.0;
  const std::size_t dist = decode::levenshtein_distance(
      std::vector<char>(na.begin(), na.end()), std::vector<char>(nb.begin(), nb.end()));
  return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

std::set<College> assign_college(std::string_view department, const Roster& roster,
                                 double threshold) {
  std::set<College> out;
  for (const auto& [college, departments] : roster) {
    for (const std::string& entry : departments) {
      if (department_similarity(department, entry) >= threshold) {
        out.insert(college);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV persistence

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> header = {
      "identifier_uri", "title",      "abstract", "abstract_general", "subject_terms",
      "discipline",     "department", "degree",   "degree_level",     "type",
      "college"};
  return header;
}

namespace {

std::string join_subjects(const std::vector<std::string>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) out += "; ";
    out += terms[i];
  }
  return out;
}

std::vector<std::string> split_subjects(std::string_view cell) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= cell.size()) {
    const std::size_t sep = cell.find("; ", start);
    std::string_view piece =
        sep == std::string_view::npos ? cell.substr(start) : cell.substr(start, sep - start);
    if (!piece.empty()) out.emplace_back(piece);
    if (sep == std::string_view::npos) break;
    start = sep + 2;
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<EtdRecord>& records) {
  csv::write_row(out, csv_header());
  for (const EtdRecord& rec : records) {
    csv::write_row(out, {rec.identifier_uri, rec.title, rec.abstract, rec.abstract_general,
                         join_subjects(rec.subject_terms), rec.discipline, rec.department,
                         rec.degree, std::string(to_string(rec.degree_level)),
                         std::string(to_string(rec.type)),
                         std::string(college_abbrev(rec.college))});
  }
}

void write_csv_file(const std::string& path, const std::vector<EtdRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(out, records);
}

std::vector<EtdRecord> read_csv(std::string_view content) {
  const auto rows = csv::parse(content);
  if (rows.empty()) throw SchemaError("empty CSV: missing header row");
  if (rows.front() != csv_header()) {
    std::ostringstream msg;
    msg << "CSV header mismatch; expected:";
    for (const std::string& col : csv_header()) msg << ' ' << col;
    throw SchemaError(msg.str());
  }
  std::vector<EtdRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;  // stray blank line
    if (row.size() != csv_header().size())
      throw SchemaError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                        " fields, expected " + std::to_string(csv_header().size()));
    EtdRecord rec;
    rec.identifier_uri = row[0];
    rec.title = row[1];
    rec.abstract = row[2];
    rec.abstract_general = row[3];
    rec.subject_terms = split_subjects(row[4]);
    rec.discipline = row[5];
    rec.department = row[6];
    rec.degree = row[7];
    const auto level = parse_degree_level(row[8]);
    if (!level) throw SchemaError("row " + std::to_string(r) + ": bad degree_level '" + row[8] + "'");
    rec.degree_level = *level;
    const auto type = parse_etd_type(row[9]);
    if (!type) throw SchemaError("row " + std::to_string(r) + ": bad type '" + row[9] + "'");
    rec.type = *type;
    const auto college = college_from_abbrev(row[10]);
    if (!college) throw SchemaError("row " + std::to_string(r) + ": bad college '" + row[10] + "'");
    rec.college = *college;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EtdRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_csv(buffer.str());
}

// ---------------------------------------------------------------------------
// Train/test split

CorpusSplit split(const std::vector<EtdRecord>& records, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split ratio must be in (0,1)");

  CorpusSplit result;
  result.seed = seed;
  result.ratio = ratio;

  // Group row indices by identifier so multi-college duplicates move together.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) groups[records[i].identifier_uri].push_back(i);

  std::map<College, std::vector<const std::vector<std::size_t>*>> by_college;
  std::map<College, std::size_t> college_rows;
  for (const auto& [id, rows] : groups) {
    by_college[records[rows.front()].college].push_back(&rows);
    for (std::size_t row : rows) college_rows[records[row].college] += 1;
  }

  // Largest college first, so coupled duplicates are settled by the stratum
  // they affect most.
  std::vector<College> order;
  for (const auto& [college, _] : by_college) order.push_back(college);
  std::stable_sort(order.begin(), order.end(), [&](College a, College b) {
    return college_rows[a] > college_rows[b];
  });

  std::map<College, std::size_t> train_rows, test_rows;
  std::vector<char> to_train(records.size(), 0);
  std::vector<char> assigned(records.size(), 0);

  std::mt19937_64 gen(seed);
  for (College college : order) {
    auto& group_list = by_college[college];
    rng::shuffle(group_list, gen);

    const std::size_t total = college_rows[college];
    if (total < 2) {
      result.warnings.push_back("college " + std::string(college_abbrev(college)) + " has " +
                                std::to_string(total) + " record(s); all sent to train");
    }
    const std::size_t target_train =
        total < 2 ? total : static_cast<std::size_t>(std::llround(ratio * static_cast<double>(total)));

    for (const std::vector<std::size_t>* rows : group_list) {
      if (assigned[rows->front()]) continue;  // settled through another college
      const bool train_side = train_rows[college] < target_train;
      for (std::size_t row : *rows) {
        to_train[row] = train_side ? 1 : 0;
        assigned[row] = 1;
        (train_side ? train_rows : test_rows)[records[row].college] += 1;
      }
    }
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    (to_train[i] ? result.train : result.test).push_back(records[i]);
  }
  return result;
}

}  // namespace dspt5::corpus
