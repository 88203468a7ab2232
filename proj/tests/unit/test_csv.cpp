#include "doctest.h"
#include "test_support.hpp"

#include <sstream>

#include "dyadic/csv.hpp"
#include "dyadic/errors.hpp"

using namespace dyadic;

TEST_CASE("step function csv round trip") {
  FuzzCorpus rng(9);
  for (int i = 0; i < 50; ++i) {
    StepFunction g = rng.next_step_function();
    std::stringstream ss;
    csv::write_step_function(ss, g);
    CHECK(csv::read_step_function(ss) == g);
  }
}

TEST_CASE("step function csv rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return csv::read_step_function(in);
  };
  CHECK(parse("length,value\n0.5,2\n0.5,1\n") == testing::two_step());
  CHECK_THROWS_AS(parse("len,value\n1,1\n"), PreconditionError);
  CHECK_THROWS_AS(parse("length,value\n0.5,2\n"), PreconditionError);
  CHECK_THROWS_AS(parse("length,value\n0.5,x\n0.5,1\n"), PreconditionError);
  CHECK_THROWS_AS(parse("length,value\n0.5,1\n0.5,2\n"), PreconditionError);
  CHECK_THROWS_AS(parse("length,value\n0.5,1,3\n0.5,1\n"), PreconditionError);
  CHECK_THROWS_AS(parse("length,value\n"), PreconditionError);
}

TEST_CASE("atom function csv round trip and checks") {
  auto tree = testing::uniform_tree(2, 2);
  AtomFunction phi(tree, {4, 2, 1, 1});
  std::stringstream ss;
  csv::write_atom_function(ss, phi);
  AtomFunction back = csv::read_atom_function(ss, tree);
  CHECK(std::vector<double>(back.values().begin(), back.values().end()) ==
        std::vector<double>{4, 2, 1, 1});

  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return csv::read_atom_function(in, tree);
  };
  const std::string header = "leaf_index,measure,value\n";
  CHECK_NOTHROW(parse(header + "3,0.25,1\n0,0.25,4\n1,0.25,2\n2,0.25,1\n"));
  CHECK_THROWS_AS(parse(header + "0,0.25,4\n0,0.25,2\n2,0.25,1\n3,0.25,1\n"), PreconditionError);
  CHECK_THROWS_AS(parse(header + "0,0.25,4\n1,0.25,2\n2,0.25,1\n"), PreconditionError);
  CHECK_THROWS_AS(parse(header + "0,0.5,4\n1,0.25,2\n2,0.25,1\n3,0.25,1\n"), PreconditionError);
  CHECK_THROWS_AS(parse(header + "0,0.25,4\n1,0.25,2\n2,0.25,1\n4,0.25,1\n"), PreconditionError);
  CHECK_THROWS_AS(parse(header + "0,0.25,4\n1,0.25,-2\n2,0.25,1\n3,0.25,1\n"), PreconditionError);
}

TEST_CASE("missing files are reported") {
  CHECK_THROWS_AS(csv::read_step_function(std::string("/nonexistent/g.csv")), PreconditionError);
}
