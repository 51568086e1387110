#include "ddc/cli.hpp"

#include <gtest/gtest.h>

using namespace ddc;

namespace {

const char* kZ4 = R"({"ring":{"kind":"mod-integers","modulus":4},"sequence":[2],"module":{"kind":"koszul"}})";

ErrorCode code_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorCode::malformed_input;
}

}  // namespace

TEST(Parse, ValidProblem) {
  auto s = parse_problem(kZ4);
  EXPECT_EQ(s.ring, RingSpec::mod_integers(4));
  ASSERT_EQ(s.sequence.size(), 1u);
  EXPECT_EQ(s.sequence[0], ring::from_int(s.ring, 2));
  EXPECT_EQ(build_module(s), koszul(s.ring, s.sequence));
  EXPECT_EQ(s.digest.size(), 16u);
}

TEST(Parse, DigestIgnoresLayout) {
  auto a = parse_problem(kZ4);
  auto b = parse_problem(R"({ "module": {"kind": "koszul"},
                              "sequence": [2], "ring": {"modulus": 4, "kind": "mod-integers"} })");
  EXPECT_EQ(a.digest, b.digest);
  auto c = parse_problem(R"({"ring":{"kind":"mod-integers","modulus":4},"sequence":[2],"module":{"kind":"ring"}})");
  EXPECT_NE(a.digest, c.digest);
}

TEST(Parse, ErrorCodes) {
  EXPECT_EQ(code_of(R"({"ring":{"kind":"mod-integers","modulus":1},"sequence":[]})"), ErrorCode::bad_ring);
  EXPECT_EQ(code_of(R"({"ring":{"kind":"p-adic"},"sequence":[]})"), ErrorCode::bad_ring);
  EXPECT_EQ(code_of(R"({"ring":{"kind":"prime-field","p":6},"sequence":[]})"), ErrorCode::bad_ring);
  EXPECT_EQ(code_of(R"({"ring":)"), ErrorCode::bad_json);
  EXPECT_EQ(code_of(R"({"ring":{"kind":"integers"},"sequence":[1],"extra":0})"), ErrorCode::unknown_field);
  EXPECT_EQ(code_of(R"({"ring":{"kind":"integers","modulus":3},"sequence":[1]})"), ErrorCode::unknown_field);
  EXPECT_EQ(code_of(R"({"ring":{"kind":"mod-integers","modulus":4},"sequence":[4]})"), ErrorCode::non_canonical);
  EXPECT_EQ(code_of(R"({"ring":{"kind":"mod-integers","modulus":4},"sequence":[-1]})"), ErrorCode::non_canonical);
  EXPECT_EQ(code_of(R"({"ring":{"kind":"truncated-poly","p":2,"n":3},"sequence":[[0,1]]})"),
            ErrorCode::non_canonical);
  // [[1]] twice in adjacent degrees
  EXPECT_EQ(code_of(R"({"ring":{"kind":"integers"},"sequence":[2],"module":{"kind":"explicit",
      "ranks":{"0":1,"1":1,"2":1},"differentials":{"0":[[1]],"1":[[1]]}}})"),
            ErrorCode::not_a_complex);
}

TEST(Parse, ModuleKinds) {
  auto s = parse_problem(R"({"ring":{"kind":"integers"},"sequence":[2],
                             "module":{"kind":"augmented-koszul","shifts":[1]}})");
  FreeComplex k = koszul(s.ring, s.sequence);
  EXPECT_EQ(build_module(s), direct_sum(k, shift(k, 1)));
  auto p = parse_problem(R"({"ring":{"kind":"integers"},"sequence":[2],"module":{"kind":"koszul-power","i":3}})");
  EXPECT_EQ(build_module(p), koszul(p.ring, {ring::from_int(p.ring, 8)}));
  auto e = parse_problem(R"({"ring":{"kind":"mod-integers","modulus":4},"sequence":[2],
      "module":{"kind":"explicit","ranks":{"-1":1,"0":1},"differentials":{"-1":[[2]]}}})");
  EXPECT_EQ(build_module(e), koszul(e.ring, e.sequence));
}

TEST(Parse, ComplexRoundTrip) {
  auto r = RingSpec::truncated_poly(3, 2);
  FreeComplex k = koszul(r, {ring::x(r)});
  FreeComplex back = io::complex_from_json(r, io::complex_to_json(k), "");
  EXPECT_EQ(back, k);
}

TEST(Command, ExitCodes) {
  CommandFlags f;
  auto z4 = parse_problem(kZ4);
  EXPECT_EQ(run_command("verify", z4, f).exit_code, 0);
  EXPECT_EQ(run_command("verify", z4, f).report["result"]["canonical_map"], "bijective");
  CommandFlags bar3;
  bar3.bar = 3;
  auto r = run_command("centralizer", z4, bar3);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.report["error"]["code"], "insufficient-truncation");
  auto z = parse_problem(R"({"ring":{"kind":"integers"},"sequence":[2]})");
  auto w = run_command("wpr", z, f);
  EXPECT_EQ(w.exit_code, 0);
  EXPECT_EQ(w.report["result"]["certificate"], "certified");
  EXPECT_TRUE(w.report["result"]["vacuous"].get<bool>());
  EXPECT_EQ(run_command("llambda", z, f).exit_code, 2);
}

TEST(Command, ReportEnvelope) {
  CommandFlags f;
  auto z4 = parse_problem(kZ4);
  for (const auto& c : command_names()) {
    auto r = run_command(c, z4, f);
    EXPECT_EQ(r.report["tool"], "ddc") << c;
    EXPECT_EQ(r.report["version"], kToolVersion) << c;
    EXPECT_EQ(r.report["problem"]["digest"], z4.digest) << c;
    ASSERT_TRUE(r.report.contains("grade")) << c;
    const auto g = r.report["grade"].get<std::string>();
    EXPECT_TRUE(g == "certified-bounded" || g == "certified-heuristic" || g == "undetermined") << c;
    EXPECT_EQ(r.exit_code, 0) << c;
  }
}

TEST(Command, Deterministic) {
  CommandFlags f;
  auto z4 = parse_problem(kZ4);
  for (const auto& c : command_names())
    EXPECT_EQ(render(run_command(c, z4, f).report, false), render(run_command(c, z4, f).report, false)) << c;
}

TEST(Command, TextIsFlatTable) {
  CommandFlags f;
  auto txt = render(run_command("koszul", parse_problem(kZ4), f).report, true);
  EXPECT_NE(txt.find("result.h0_vs_quotient.map.injective"), std::string::npos);
  EXPECT_EQ(txt.find('{'), std::string::npos);
}
