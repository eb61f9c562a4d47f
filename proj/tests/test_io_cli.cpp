#include <unistd.h>

#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "mono/cli.hpp"
#include "mono/io.hpp"
#include "oracles.hpp"

using namespace mono;
namespace fs = std::filesystem;

namespace {

// Per-process scratch directory.
const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("mono_tests_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_scratch(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  write_text_file(p, text);
  return p;
}

}  // namespace

TEST_CASE("matrix text form") {
  CHECK(format_matrix(s1()) == "[[1,0],[1,1]]");
  CHECK(parse_matrix("[[1,0],[1,1]]") == s1());
  CHECK(parse_matrix(" [[ 1 , 0 ] , [ 1 , 1 ]] ") == s1());
  CHECK(parse_matrix("[[3,-1],[4,-1]]") == sl2z(3, -1, 4, -1));
  CHECK_THROWS_AS(parse_matrix("[[1,0],[1]]"), ParseError);
  CHECK_THROWS_AS(parse_matrix("[[1,0],[1,1]] junk"), ParseError);
  CHECK_THROWS_AS(parse_matrix("[[1,0],[0,2]]"), ParseError);  // det 2
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Sl2z m = Sl2z::identity();
    for (int j = 0; j < 12; ++j) m = m * gen_matrix(static_cast<Gen>(rng() % 4));
    CHECK(parse_matrix(format_matrix(m)) == m);
  }
}

TEST_CASE("word text form") {
  const GeneratorWord w = {Gen::S1, Gen::S1Inv, Gen::S2, Gen::S2Inv};
  CHECK(format_word(w) == "s1 s1^-1 s2 s2^-1");
  CHECK(parse_word(format_word(w)) == w);
  CHECK(parse_word("").empty());
  CHECK_THROWS_AS(parse_word("s3"), ParseError);
}

TEST_CASE("factorization files") {
  const std::string text =
      "# a comment line\n"
      "[[1,0],[1,1]]\n"
      "\n"
      "[[1,-1],[0,1]]  # trailing comment\n";
  const Factorization f = parse_factorization(text);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == s1());
  CHECK(f[1] == s2());
  CHECK(parse_factorization(serialize_factorization(f)) == f);

  // Errors carry line numbers.
  try {
    parse_factorization("[[1,0],[1,1]]\n[[1,0],[2,1]]\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 2);
    CHECK(std::string(e.what()).find("conjugate of s1") != std::string::npos);
  }
  try {
    parse_factorization("[[1,0],[1,1]]\nnot a matrix\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 2);
  }

  // Round trip through a file, with CRLF normalization.
  const fs::path p = write_scratch("crlf.txt", "[[1,0],[1,1]]\r\n[[1,-1],[0,1]]\r\n");
  CHECK(load_factorization(p) == f);
}

TEST_CASE("chart files") {
  const Chart c = canonical_chart(1, 1, 2);
  const Chart back = parse_chart(serialize_chart(c));
  CHECK(back.vertices.size() == c.vertices.size());
  CHECK(back.edges.size() == c.edges.size());
  CHECK(back.boundary_order == c.boundary_order);
  CHECK(validate(back).ok());
  const ChartCounts counts = chart_counts(back);
  CHECK(counts.black_count == 12 + 6 + 2);

  Chart hooped = c;
  hooped.hoops.push_back({"h1", 2, ""});
  hooped.hoops.push_back({"h2", 1, "h1"});
  const Chart hback = parse_chart(serialize_chart(hooped));
  REQUIRE(hback.hoops.size() == 2);
  CHECK(hback.hoops[1].parent == "h1");

  CHECK_THROWS_AS(parse_chart("vertex v sphere\n"), ParseError);
  CHECK_THROWS_AS(parse_chart("edge e 1 a 0 b\n"), ParseError);
  CHECK_THROWS_AS(parse_chart("frob x\n"), ParseError);
}

TEST_CASE("crossing files") {
  const CrossingSequence path = parse_crossings(
      "# loop\n"
      "ue1 +1\n"
      "ue2 -1\n");
  REQUIRE(path.size() == 2);
  CHECK(path[0].edge_id == "ue1");
  CHECK(path[0].sign == 1);
  CHECK(path[1].sign == -1);
  CHECK_THROWS_AS(parse_crossings("e1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_crossings("e1\n"), ParseError);
}

TEST_CASE("dot export") {
  const std::string dot = to_dot(canonical_chart(1, 0, 1));
  CHECK(dot.rfind("digraph chart {", 0) == 0);
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("shape=square") != std::string::npos);
  CHECK(dot.find("label=\"1\"") != std::string::npos);
}

TEST_CASE("descriptor files") {
  SUBCASE("inline factorization") {
    const SblfDescriptor d = parse_descriptor(
        "round = yes\n"
        "factorization = [[1,0],[1,1]] ; [[1,0],[1,1]]\n"
        "twist = twisted\n"
        "m = -2\n"
        "lower = pao n=3 parity=odd\n",
        ".");
    CHECK(d.has_round);
    CHECK(d.higher_factorization.size() == 2);
    CHECK(d.higher_gluing_twist);
    CHECK(d.section_framing == -2);
    const auto* pao = std::get_if<PaoGluing>(&d.lower_gluing);
    REQUIRE(pao);
    CHECK(pao->n == 3);
    CHECK(pao->parity == Parity::Odd);
  }
  SUBCASE("factorization by path") {
    write_scratch("factor.txt", "[[1,0],[1,1]]\n[[1,-1],[0,1]]\n");
    const SblfDescriptor d = parse_descriptor(
        "round = no\n"
        "factorization = factor.txt\n"
        "lower = torus r=0\n",
        scratch());
    CHECK(d.higher_factorization.size() == 2);
  }
  SUBCASE("empty factorization and torus gluing") {
    const SblfDescriptor d = parse_descriptor(
        "round = no\n"
        "factorization =\n"
        "lower = torus r=4\n",
        ".");
    CHECK(d.higher_factorization.empty());
    const auto* torus = std::get_if<TorusGluing>(&d.lower_gluing);
    REQUIRE(torus);
    CHECK(torus->r == 4);
  }
  SUBCASE("round trip") {
    SblfDescriptor d;
    d.has_round = true;
    d.higher_factorization = canonical_form(0, 1, 1);
    d.section_framing = 7;
    d.lower_gluing = PaoGluing{2, Parity::Even};
    const SblfDescriptor back = parse_descriptor(serialize_descriptor(d), ".");
    CHECK(back.has_round == d.has_round);
    CHECK(back.higher_factorization == d.higher_factorization);
    CHECK(back.section_framing == d.section_framing);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_descriptor("factorization =\n", "."), ParseError);
    CHECK_THROWS_AS(
        parse_descriptor("round = yes\nfactorization =\n", "."), ParseError);
    CHECK_THROWS_AS(
        parse_descriptor("round = maybe\n", "."), ParseError);
    CHECK_THROWS_AS(
        parse_descriptor("round = yes\nlower = pao n=1 parity=blue\n", "."),
        ParseError);
    CHECK_THROWS_AS(
        parse_descriptor("round = no\nwibble = 3\n", "."), ParseError);
  }
}

TEST_CASE("cli: normalize") {
  const fs::path p =
      write_scratch("canon011.txt",
                    serialize_factorization(scramble(canonical_form(0, 1, 1), 3, 25)));
  const CommandResult r = cli_dispatch({"normalize", p.string()});
  CHECK(r.status == kOk);
  CHECK(r.human.rfind("p=0 q=1 k=1", 0) == 0);
  CHECK(r.render().find("\nq=1\n") != std::string::npos);

  const CommandResult moves =
      cli_dispatch({"normalize", p.string(), "--moves", "--budget", "500000"});
  CHECK(moves.status == kOk);
  bool found = false;
  for (const auto& [k, v] : moves.machine)
    if (k == "moves_found") {
      CHECK(v == "yes");
      found = true;
    }
  CHECK(found);
}

TEST_CASE("cli: equiv") {
  const Factorization a = canonical_form(1, 0, 0);
  const fs::path pa = write_scratch("a.txt", serialize_factorization(
                                                 scramble(a, 5, 100)));
  const fs::path pb = write_scratch("b.txt", serialize_factorization(
                                                 scramble(a, 9, 150)));
  const CommandResult r = cli_dispatch({"equiv", pa.string(), pb.string()});
  CHECK(r.status == kOk);
  CHECK(r.human.rfind("equivalent", 0) == 0);
  CHECK(r.human.find("length 12") != std::string::npos);

  const fs::path pc =
      write_scratch("c.txt", serialize_factorization(canonical_form(2, 0, 0)));
  const CommandResult ne = cli_dispatch({"equiv", pa.string(), pc.string()});
  CHECK(ne.status == kOk);
  CHECK(ne.machine.front().second == "not-equivalent");
}

TEST_CASE("cli: orbit") {
  const fs::path p = write_scratch(
      "orbit.txt",
      serialize_factorization(scramble(canonical_form(0, 1, 0), 21, 12)));
  const CommandResult r = cli_dispatch(
      {"orbit", p.string(), "--entry-bound", "48", "--budget", "300000"});
  CHECK(r.status == kOk);
  CHECK(r.human.find("canonical reached: yes") != std::string::npos);

  // The report does not depend on the worker count.
  const CommandResult jobs3 = cli_dispatch(
      {"orbit", p.string(), "--entry-bound", "48", "--budget", "300000",
       "--jobs", "3"});
  CHECK(jobs3.render() == r.render());

  const CommandResult tiny =
      cli_dispatch({"orbit", p.string(), "--entry-bound", "48", "--budget", "2"});
  CHECK(tiny.status == kBudget);

  // Escalation widens a too-tight initial bound.
  const fs::path wide = write_scratch(
      "orbit_wide.txt",
      serialize_factorization(scramble(canonical_form(0, 1, 1), 9, 60)));
  const Factorization loaded = load_factorization(wide);
  const auto start_bound = max_abs_entry(loaded);
  REQUIRE(start_bound);
  const CommandResult esc = cli_dispatch(
      {"orbit", wide.string(), "--entry-bound", std::to_string(*start_bound),
       "--budget", "2000000", "--escalate-to", "4096"});
  CHECK(esc.status == kOk);
  CHECK(esc.human.find("canonical reached: yes") != std::string::npos);
}

TEST_CASE("cli: classify") {
  const fs::path p = write_scratch("perutz.sblf",
                                   "round = yes\n"
                                   "factorization = [[1,-1],[0,1]]; [[3,-1],[4,-1]]\n"
                                   "twist = id\n"
                                   "m = 0\n"
                                   "lower = pao n=0 parity=even\n");
  const CommandResult r = cli_dispatch({"classify", p.string()});
  CHECK(r.status == kOk);
  CHECK(r.human.find("manifold: CP2 # 5*CP2bar") != std::string::npos);
  CHECK(r.render().find("blowups=4") != std::string::npos);
  CHECK(r.render().find("candidates=CP2 # CP2bar; S2xS2") != std::string::npos);
}

TEST_CASE("cli: chart subcommands") {
  const CommandResult canon = cli_dispatch(
      {"chart", "canonical", "-p", "2", "-q", "1", "-k", "4"});
  CHECK(canon.status == kOk);
  REQUIRE(canon.document);
  const Chart c = parse_chart(*canon.document);
  CHECK(chart_counts(c).black_count == 34);

  const fs::path chart_path = write_scratch("chart214.chart", *canon.document);
  const CommandResult val = cli_dispatch({"chart", "validate", chart_path.string()});
  CHECK(val.status == kOk);
  CHECK(val.render().find("black=34") != std::string::npos);
  CHECK(val.render().find("q=1") != std::string::npos);
  CHECK(val.render().find("k=4") != std::string::npos);

  // Break clause (5) by flipping a unit edge.
  Chart broken = c;
  for (ChartEdge& e : broken.edges)
    if (e.id == "ue1") std::swap(e.from, e.to);
  const fs::path broken_path =
      write_scratch("broken.chart", serialize_chart(broken));
  const CommandResult bad = cli_dispatch({"chart", "validate", broken_path.string()});
  CHECK(bad.status == kViolation);
  CHECK(bad.human.find("clause 5") != std::string::npos);

  const fs::path dot_path = scratch() / "chart.dot";
  const CommandResult with_dot = cli_dispatch(
      {"chart", "canonical", "-p", "1", "-q", "0", "-k", "0", "--dot",
       dot_path.string(), "--out", (scratch() / "n.chart").string()});
  CHECK(with_dot.status == kOk);
  CHECK(read_text_file(dot_path).find("doublecircle") != std::string::npos);

  const fs::path cross_path = write_scratch("path.crossings", "ue1 +1\nue2 -1\n");
  const CommandResult word = cli_dispatch(
      {"chart", "word", chart_path.string(), cross_path.string()});
  CHECK(word.status == kOk);
  CHECK(word.render().find("word=s1 s2^-1") != std::string::npos);
  CHECK(word.render().find("value=[[1,1],[1,2]]") != std::string::npos);
}

TEST_CASE("cli: scramble and determinism") {
  const fs::path p = write_scratch(
      "seed.txt", serialize_factorization(canonical_form(0, 1, 0)));
  const CommandResult a =
      cli_dispatch({"scramble", p.string(), "--seed", "7", "--steps", "40"});
  const CommandResult b =
      cli_dispatch({"scramble", p.string(), "--seed", "7", "--steps", "40"});
  CHECK(a.status == kOk);
  REQUIRE(a.document);
  CHECK(a.render() == b.render());
  const Factorization f = parse_factorization(*a.document);
  CHECK(f.size() == 6);
  CHECK(product(f) == sl2z(-1, 0, 0, -1));

  const CommandResult c =
      cli_dispatch({"scramble", p.string(), "--seed", "8", "--steps", "40"});
  CHECK(a.render() != c.render());
}

TEST_CASE("cli: sweep") {
  const CommandResult r = cli_dispatch(
      {"sweep", "--max-p", "0", "--max-k", "1", "--seeds", "2", "--steps",
       "20", "--entry-bound", "0"});
  CHECK(r.status == kOk);
  CHECK(r.render().find("certificate_failures=0") != std::string::npos);
  CHECK(r.render().find("rows=8") != std::string::npos);
  // Identical invocations render identically.
  const CommandResult again = cli_dispatch(
      {"sweep", "--max-p", "0", "--max-k", "1", "--seeds", "2", "--steps",
       "20", "--entry-bound", "0"});
  CHECK(r.render() == again.render());

  // Starving the orbit budget yields the inconclusive exit code.
  const CommandResult starved = cli_dispatch(
      {"sweep", "--max-p", "0", "--max-k", "1", "--seeds", "1", "--steps",
       "30", "--budget", "4", "--entry-bound", "32", "--max-bound", "32"});
  CHECK(starved.status == kBudget);
  CHECK(starved.render().find("certificate_failures=0") != std::string::npos);
}

TEST_CASE("cli: errors and usage") {
  CHECK(cli_dispatch({}).status == kUsage);
  CHECK(cli_dispatch({"help"}).status == kOk);
  CHECK(cli_dispatch({"frobnicate"}).status == kUsage);
  CHECK(cli_dispatch({"normalize"}).status == kUsage);
  CHECK(cli_dispatch({"normalize", "--bogus-flag", "x"}).status == kUsage);
  CHECK(cli_dispatch({"normalize", "/nonexistent/file.txt"}).status == kParse);

  const fs::path bad = write_scratch("bad.txt", "[[1,0],[2,1]]\n");
  CHECK(cli_dispatch({"normalize", bad.string()}).status == kParse);

  // Inadmissible factorization: validation error, not a crash.
  const fs::path perutz = write_scratch(
      "perutz.txt", "[[1,-1],[0,1]]\n[[3,-1],[4,-1]]\n");
  const CommandResult na = cli_dispatch({"normalize", perutz.string()});
  CHECK(na.status == kParse);
  CHECK(na.human.find("error:") != std::string::npos);
}
