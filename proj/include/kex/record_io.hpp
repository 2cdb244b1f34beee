#pragma once

#include <span>
#include <string>
#include <vector>

#include "kex/compat.hpp"

namespace kex {

std::string blood_name(int blood);
int blood_from_name(const std::string& name);

// One pair per line: patient_blood donor_blood sensitized antibodies antigens
// with bloods as O/A/B/AB, sensitized as 0/1, and two equal-length bitstrings
// over the antigen panel. '#' starts a comment.
std::vector<PairRecord> parse_records(const std::string& text);
std::vector<PairRecord> load_records(const std::string& path);
std::string format_records(std::span<const PairRecord> records);

}  // namespace kex
