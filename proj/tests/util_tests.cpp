#include <catch2/catch_amalgamated.hpp>

#include "tagmark/util.hpp"

using namespace tagmark;

TEST_CASE("split keeps empty fields") {
  auto parts = split("a\t\tb", '\t');
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == "a");
  CHECK(parts[1] == "");
  CHECK(parts[2] == "b");
  CHECK(split("", '\t').size() == 1);
  CHECK(split("x", '\t').size() == 1);
}

TEST_CASE("strip_cr removes a single trailing carriage return") {
  CHECK(strip_cr("abc\r") == "abc");
  CHECK(strip_cr("abc") == "abc");
  CHECK(strip_cr("\r") == "");
  CHECK(strip_cr("a\rb") == "a\rb");
}

TEST_CASE("all_digits") {
  CHECK(all_digits("0123"));
  CHECK_FALSE(all_digits(""));
  CHECK_FALSE(all_digits("12a"));
  CHECK_FALSE(all_digits("-1"));
}

TEST_CASE("valid_utf8 accepts well-formed text") {
  CHECK(valid_utf8("plain ascii"));
  CHECK(valid_utf8("na\xC3\xAFve"));                  // naïve
  CHECK(valid_utf8("\xE2\x82\xAC"));                  // €
  CHECK(valid_utf8("\xF0\x9F\x90\x8D"));              // U+1F40D
  CHECK(valid_utf8(""));
}

TEST_CASE("valid_utf8 rejects malformed sequences") {
  CHECK_FALSE(valid_utf8("\xC0\xAF"));                // overlong '/'
  CHECK_FALSE(valid_utf8("\xC1\x81"));                // overlong
  CHECK_FALSE(valid_utf8("\xE0\x80\x80"));            // overlong 3-byte
  CHECK_FALSE(valid_utf8("\xED\xA0\x80"));            // surrogate D800
  CHECK_FALSE(valid_utf8("\xF4\x90\x80\x80"));        // past U+10FFFF
  CHECK_FALSE(valid_utf8("\xF0\x80\x80\x80"));        // overlong 4-byte
  CHECK_FALSE(valid_utf8("\xC3"));                    // truncated
  CHECK_FALSE(valid_utf8("\x80"));                    // stray continuation
  CHECK_FALSE(valid_utf8("ab\xFF" "cd"));
}

TEST_CASE("first_codepoint decodes each width") {
  CHECK(first_codepoint("A") == U'A');
  CHECK(first_codepoint("\xC3\x89") == char32_t{0x00C9});      // É
  CHECK(first_codepoint("\xE2\x82\xAC") == char32_t{0x20AC});  // €
  CHECK(first_codepoint("\xF0\x9F\x90\x8D") == char32_t{0x1F40D});
  CHECK(first_codepoint("") == char32_t{0});
}

TEST_CASE("codepoint_offsets marks boundaries") {
  auto off = codepoint_offsets("a\xC3\xA9" "b");  // a é b
  REQUIRE(off == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(codepoint_offsets("") == std::vector<std::size_t>{0});
}

TEST_CASE("uppercase detection across supported scripts") {
  CHECK(starts_uppercase("Dog"));
  CHECK_FALSE(starts_uppercase("dog"));
  CHECK(starts_uppercase("\xC3\x89""cole"));        // École
  CHECK_FALSE(starts_uppercase("\xC3\xA9tude"));    // étude
  CHECK(starts_uppercase("\xC4\xB0stanbul"));       // İstanbul, U+0130
  CHECK_FALSE(starts_uppercase("\xC4\xB1rmak"));    // ırmak, U+0131
  CHECK(starts_uppercase("\xC4\x9E"));              // Ğ U+011E
  CHECK_FALSE(starts_uppercase("\xC4\x9F"));        // ğ U+011F
  CHECK(starts_uppercase("\xC5\x9E"));              // Ş U+015E
  CHECK_FALSE(starts_uppercase("\xC5\x9F"));        // ş U+015F
  CHECK(starts_uppercase("\xC3\x85rhus"));          // Århus
  CHECK(starts_uppercase("\xC3\x98sten"));          // Østen U+00D8
  CHECK_FALSE(starts_uppercase("\xC3\xB8re"));      // øre
  CHECK_FALSE(starts_uppercase("\xC3\x97"));        // × multiplication sign
  CHECK(starts_uppercase("\xD0\x9C\xD0\xBE\xD1\x81\xD0\xBA\xD0\xB2\xD0\xB0"));  // Москва
  CHECK_FALSE(starts_uppercase("\xD0\xBC\xD0\xB8\xD1\x80"));                    // мир
  CHECK_FALSE(starts_uppercase("123"));
  CHECK_FALSE(starts_uppercase(""));
  CHECK_FALSE(starts_uppercase("\xE4\xB8\xAD"));    // 中, caseless
}

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("hex64 renders zero-padded lowercase") {
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("number formatting") {
  CHECK(format_fixed(84.07, 2) == "84.07");
  CHECK(format_fixed(0.5, 2) == "0.50");
  CHECK(format_fixed(100.0, 2) == "100.00");
  CHECK(format_sci(445.0) == "4.45e2");
  CHECK(format_sci(199000.0) == "1.99e5");
  CHECK(format_sci(0.5) == "5.00e-1");
  CHECK(format_sci(0.0) == "0.00e0");
  double v = 0.1 + 0.2;
  CHECK(std::stod(format_exact(v)) == v);
}
