#include "kex/record_io.hpp"

#include <fstream>
#include <sstream>

#include "kex/errors.hpp"

namespace kex {

namespace {

std::vector<uint8_t> parse_bits(const std::string& s, int line_no) {
  std::vector<uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1')
      throw ConfigError("records line " + std::to_string(line_no) +
                        ": bit strings may only contain 0 and 1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

}  // namespace

std::string blood_name(int blood) {
  switch (blood) {
    case kBloodO: return "O";
    case kBloodA: return "A";
    case kBloodB: return "B";
    case kBloodAB: return "AB";
    default: throw ConfigError("records: blood type out of range");
  }
}

int blood_from_name(const std::string& name) {
  if (name == "O") return kBloodO;
  if (name == "A") return kBloodA;
  if (name == "B") return kBloodB;
  if (name == "AB") return kBloodAB;
  throw ConfigError("records: unknown blood type '" + name + "'");
}

std::vector<PairRecord> parse_records(const std::string& text) {
  std::vector<PairRecord> records;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  size_t panel = 0;
  while (std::getline(in, line)) {
    line_no++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string patient, donor, sensitized, antibodies, antigens;
    if (!(fields >> patient)) continue;  // blank or comment-only
    if (!(fields >> donor >> sensitized >> antibodies >> antigens))
      throw ConfigError("records line " + std::to_string(line_no) +
                        ": expected 5 fields");
    std::string extra;
    if (fields >> extra)
      throw ConfigError("records line " + std::to_string(line_no) +
                        ": trailing content '" + extra + "'");
    PairRecord rec;
    rec.patient_blood = blood_from_name(patient);
    rec.donor_blood = blood_from_name(donor);
    if (sensitized != "0" && sensitized != "1")
      throw ConfigError("records line " + std::to_string(line_no) +
                        ": sensitized flag must be 0 or 1");
    rec.sensitized = sensitized == "1";
    rec.patient_antibodies = parse_bits(antibodies, line_no);
    rec.donor_antigens = parse_bits(antigens, line_no);
    if (rec.patient_antibodies.size() != rec.donor_antigens.size())
      throw ConfigError("records line " + std::to_string(line_no) +
                        ": antibody and antigen strings differ in length");
    if (rec.patient_antibodies.empty())
      throw ConfigError("records line " + std::to_string(line_no) +
                        ": empty antigen panel");
    if (records.empty()) {
      panel = rec.patient_antibodies.size();
    } else if (rec.patient_antibodies.size() != panel) {
      throw ConfigError("records line " + std::to_string(line_no) +
                        ": antigen panel size differs from earlier lines");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<PairRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("records: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_records(buf.str());
}

std::string format_records(std::span<const PairRecord> records) {
  std::ostringstream out;
  for (const auto& rec : records) {
    out << blood_name(rec.patient_blood) << ' ' << blood_name(rec.donor_blood) << ' '
        << (rec.sensitized ? 1 : 0) << ' ';
    for (uint8_t b : rec.patient_antibodies) out << int(b);
    out << ' ';
    for (uint8_t b : rec.donor_antigens) out << int(b);
    out << '\n';
  }
  return out.str();
}

}  // namespace kex
