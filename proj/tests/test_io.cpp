#include <doctest.h>

#include <cstdio>
#include <string>

#include "specshift/io.hpp"

using namespace specshift;

TEST_CASE("format_double round-trips") {
  for (double x : {0.0, 0.1, -1.0 / 3.0, 1e-9, 12345.678, 1e4, -2.5e-300}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("matrix json parsing") {
  HermitianOperator H = parse_matrix_json(R"({"dim":2,"re":[[0,1],[1,0]]})");
  CHECK(H.dim() == 2);
  CHECK(H.matrix()(0, 1) == cplx(1.0));

  HermitianOperator C = parse_matrix_json(
      R"({"dim":2,"re":[[1,0],[0,2]],"im":[[0,0.5],[-0.5,0]]})");
  CHECK(C.matrix()(0, 1) == cplx(0.0, 0.5));
  CHECK(C.matrix()(1, 0) == cplx(0.0, -0.5));
}

TEST_CASE("matrix json rejects bad input") {
  CHECK_THROWS_AS(parse_matrix_json("not json"), validation_error);
  CHECK_THROWS_AS(parse_matrix_json(R"({"re":[[0]]})"), validation_error);
  CHECK_THROWS_AS(parse_matrix_json(R"({"dim":2,"re":[[0,1],[0,0]]})"),
                  validation_error);  // non-Hermitian
  CHECK_THROWS_AS(parse_matrix_json(R"({"dim":2,"re":[[0,1]]})"), validation_error);
}

TEST_CASE("matrix json round-trip") {
  Matrix m(2, 2);
  m << cplx(1.0), cplx(0.25, 0.5), cplx(0.25, -0.5), cplx(-3.0);
  HermitianOperator H{m};
  HermitianOperator back = parse_matrix_json(matrix_to_json(H.matrix()));
  CHECK((back.matrix() - H.matrix()).norm() == 0.0);
}

TEST_CASE("piecewise json round-trip") {
  PiecewisePolynomial P({0.0, 0.5, 2.0}, {{1.0, -2.0, 0.125}, {0.25}}, 0.0, 0.0);
  PiecewisePolynomial Q = parse_piecewise_json(piecewise_to_json(P));
  CHECK(Q.breakpoints() == P.breakpoints());
  REQUIRE(Q.piece_count() == P.piece_count());
  for (std::size_t k = 0; k < P.piece_count(); ++k) CHECK(Q.piece(k) == P.piece(k));
  CHECK(Q.left_tail_value() == P.left_tail_value());
  CHECK(Q.right_tail_value() == P.right_tail_value());
  CHECK_THROWS_AS(parse_piecewise_json("[1,2]"), validation_error);
}

TEST_CASE("csv sampling") {
  PiecewisePolynomial P({0.0, 1.0}, {{1.0}}, 0.0, 0.0);
  std::vector<double> g = make_grid(-0.5, 1.5, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == -0.5);
  CHECK(g.back() == 1.5);
  std::string csv = sample_csv(g, {"chi"}, {&P});
  CHECK(csv.rfind("t,chi\n", 0) == 0);
  CHECK(csv == sample_csv(g, {"chi"}, {&P}));  // deterministic
  CHECK_THROWS_AS(sample_csv(g, {"a", "b"}, {&P}), validation_error);
  CHECK_THROWS_AS(make_grid(1.0, 0.0, 5), validation_error);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), validation_error);
}

TEST_CASE("file round-trip") {
  std::string path = "io_roundtrip_tmp.txt";
  write_file(path, "alpha\nbeta\n");
  CHECK(read_file(path) == "alpha\nbeta\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_file("definitely/not/a/file.json"), validation_error);
}
