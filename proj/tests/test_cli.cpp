#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "qfa/cli.hpp"

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int status = qfa::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("gram subcommand") {
  Run r = cli({"gram", "--type", "A1", "--weight", "1", "--beta", "1a"});
  CHECK(r.status == 0);
  CHECK(r.out.find("det") != std::string::npos);
  // S(f,f) at <lambda,alpha^vee> = 1 is q^{-1}[1] = q^{-1} = v^-2 at D=2.
  CHECK(r.out.find("(v^-2)") != std::string::npos);

  Run structured = cli({"gram", "--type", "A1", "--weight", "1", "--beta", "1a", "--format", "structured"});
  CHECK(structured.status == 0);
  CHECK(structured.out.find("#qfa/1 type=A1 D=2") == 0);
  CHECK(structured.out.find("entry i=0 j=0") != std::string::npos);
}

TEST_CASE("structured output is byte-deterministic") {
  std::vector<std::string> args = {"gram", "--type", "A2",   "--weight",    "1,0",
                                   "--beta", "1,1",  "--height", "4", "--format", "structured"};
  Run first = cli(args);
  Run second = cli(args);
  CHECK(first.status == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("kernel subcommand") {
  Run r = cli({"kernel", "--type", "A1", "--weight", "1", "--beta", "2a"});
  CHECK(r.status == 0);
  CHECK(r.out.find("f1^2") != std::string::npos);
}

TEST_CASE("gram subcommand over a weight family") {
  Run r = cli({"gram", "--type", "A1", "--weight", "1", "--direction", "1", "--beta", "2a", "--format",
               "structured"});
  CHECK(r.status == 0);
  // D' = 2 for nu = omega; the block's entries involve z.
  CHECK(r.out.find("Dp=2") != std::string::npos);
  CHECK(r.out.find("z^") != std::string::npos);
}

TEST_CASE("fusion subcommand over a family prints z-blocks") {
  Run r = cli({"fusion", "--type", "A1", "--weight", "1", "--direction", "1", "--blocks-height", "2",
               "--format", "structured"});
  CHECK(r.status == 0);
  CHECK(r.out.find("block beta=2") != std::string::npos);
}

TEST_CASE("module subcommand") {
  Run r = cli({"module", "--type", "A2", "--kind", "finite", "--weight", "1,1", "--height", "6"});
  CHECK(r.status == 0);
  CHECK(r.out.find("dim 8") != std::string::npos);
}

TEST_CASE("fn subcommand applies arrows and multiplies") {
  Run r = cli({"fn", "--type", "A1", "--height", "4", "--carrier", "2", "--lhs", "c(2,0)", "--apply", "f1",
               "--eval", "f1", "--rhs", "c(0,2)", "--multiply"});
  CHECK(r.status == 0);
  CHECK(r.out.find("arrow") != std::string::npos);
  CHECK(r.out.find("product") != std::string::npos);
}

TEST_CASE("star subcommand") {
  // Generic weight 1/2 needs D = 4.
  Run r = cli({"star", "--type", "A1", "--height", "6", "--root-order", "4", "--weight", "1/2", "--carrier",
               "2", "--lhs", "c(0,1)", "--rhs", "c(0,1)"});
  CHECK(r.status == 0);
  CHECK(r.out.find("star") != std::string::npos);

  // A non-invariant factor is a reported error.
  Run bad = cli({"star", "--type", "A1", "--height", "6", "--root-order", "4", "--weight", "1/2",
                 "--carrier", "2", "--lhs", "c(0,0)", "--rhs", "c(0,1)"});
  CHECK(bad.status != 0);
  CHECK(bad.err.find("invariant") != std::string::npos);
}

TEST_CASE("probe and kostant subcommands") {
  Run probe = cli({"probe", "--type", "A1", "--height", "6", "--weight", "1", "--direction", "1",
                   "--carrier", "2"});
  CHECK(probe.status == 0);
  CHECK(probe.out.find("PASS") != std::string::npos);
  CHECK(probe.out.find("control") != std::string::npos);

  Run lift = cli({"kostant", "--type", "A1", "--height", "6", "--weight", "1", "--direction", "1",
                  "--carrier", "2"});
  CHECK(lift.status == 0);
  CHECK(lift.out.find("PASS") != std::string::npos);
}

TEST_CASE("verify subcommand runs a named suite") {
  Run r = cli({"verify", "--suite", "hopf", "--type", "A2"});
  CHECK(r.status == 0);
  CHECK(r.out.find("[PASS] 2 hopf") != std::string::npos);
  CHECK(r.out.find("PASS: 1 criteria") != std::string::npos);

  Run none = cli({"verify", "--suite", "nonsense"});
  CHECK(none.status == 2);
}

TEST_CASE("weight validation errors are one-line and actionable") {
  Run r = cli({"gram", "--type", "A1", "--weight", "1/2", "--beta", "1a"});
  CHECK(r.status == 2);
  CHECK(r.err.find("error:") == 0);
  CHECK(r.err.find("(1/D)Z") != std::string::npos);

  Run overflow = cli({"kernel", "--type", "A1", "--height", "2", "--weight", "1", "--beta", "3a"});
  CHECK(overflow.status == 2);
  CHECK(overflow.err.find("raise --height") != std::string::npos);
}

TEST_CASE("config file provides defaults, flags override") {
  std::string path = "/tmp/qfa_test_config.txt";
  {
    std::ofstream f(path);
    f << "type = A1\nheight = 4\nformat = structured\n";
  }
  Run r = cli({"--config", path, "kernel", "--weight", "1", "--beta", "2a"});
  CHECK(r.status == 0);
  CHECK(r.out.find("#qfa/1 type=A1") == 0);
  Run overridden = cli({"--config", path, "kernel", "--weight", "1", "--beta", "2a", "--format", "text"});
  CHECK(overridden.status == 0);
  CHECK(overridden.out.find("#qfa/1") == std::string::npos);
}
