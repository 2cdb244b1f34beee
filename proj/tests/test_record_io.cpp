#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kex/errors.hpp"
#include "kex/record_io.hpp"

using namespace kex;

TEST_CASE("parse and format roundtrip") {
  std::string text =
      "# two enrolled pairs\n"
      "O A 1 10010 01100\n"
      "\n"
      "AB B 0 00000 11111  # fully typed donor\n";
  auto records = parse_records(text);
  REQUIRE(records.size() == 2);
  CHECK(records[0].patient_blood == kBloodO);
  CHECK(records[0].donor_blood == kBloodA);
  CHECK(records[0].sensitized);
  CHECK(records[0].patient_antibodies == std::vector<uint8_t>{1, 0, 0, 1, 0});
  CHECK(records[0].donor_antigens == std::vector<uint8_t>{0, 1, 1, 0, 0});
  CHECK(records[1].patient_blood == kBloodAB);
  CHECK_FALSE(records[1].sensitized);

  auto round = parse_records(format_records(records));
  REQUIRE(round.size() == 2);
  CHECK(round[0].patient_antibodies == records[0].patient_antibodies);
  CHECK(round[1].donor_antigens == records[1].donor_antigens);
  CHECK(round[1].patient_blood == records[1].patient_blood);
}

TEST_CASE("generated pools survive the text format") {
  GeneratorConfig gen;
  gen.num_antigens = 12;
  Prg prg(4);
  auto pool = random_pool(6, gen, prg);
  auto round = parse_records(format_records(pool));
  REQUIRE(round.size() == pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    CHECK(round[i].patient_blood == pool[i].patient_blood);
    CHECK(round[i].donor_blood == pool[i].donor_blood);
    CHECK(round[i].sensitized == pool[i].sensitized);
    CHECK(round[i].patient_antibodies == pool[i].patient_antibodies);
    CHECK(round[i].donor_antigens == pool[i].donor_antigens);
  }
}

TEST_CASE("malformed lines are rejected with line numbers") {
  CHECK_THROWS_AS(parse_records("O A 1 101\n"), ConfigError);           // missing field
  CHECK_THROWS_AS(parse_records("O A 1 101 01\n"), ConfigError);        // length mismatch
  CHECK_THROWS_AS(parse_records("O A 2 101 010\n"), ConfigError);       // bad flag
  CHECK_THROWS_AS(parse_records("O X 1 101 010\n"), ConfigError);       // bad blood
  CHECK_THROWS_AS(parse_records("O A 1 1x1 010\n"), ConfigError);       // bad bit
  CHECK_THROWS_AS(parse_records("O A 1 101 010 junk\n"), ConfigError);  // trailing
  CHECK_THROWS_AS(parse_records("O A 1 10 01\nO A 1 100 010\n"), ConfigError);
  CHECK_THROWS_AS(parse_records("O A 1  \n"), ConfigError);
  CHECK_THROWS_AS(load_records("/nonexistent/records.txt"), ConfigError);
  CHECK(parse_records("# only comments\n\n").empty());

  try {
    parse_records("O A 1 101 010\nO B 1 11 00\n");
    FAIL("expected a panel size error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("blood names") {
  CHECK(blood_name(kBloodAB) == "AB");
  CHECK(blood_from_name("B") == kBloodB);
  CHECK_THROWS_AS(blood_name(7), ConfigError);
  CHECK_THROWS_AS(blood_from_name("ab"), ConfigError);
}
